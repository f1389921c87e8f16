#include "siwkit/q_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <optional>

#include "siwkit/core_model.hpp"
#include "siwkit/error.hpp"

namespace siwkit {

double to_db(double magnitude) { return 20.0 * std::log10(magnitude); }
double from_db(double db) { return std::pow(10.0, db / 20.0); }

void SParameterTrace::validate() const {
    const auto n = freqs.size();
    if (s11.size() != n || s21.size() != n || s12.size() != n || s22.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "S-parameter arrays must match the frequency grid length");
    }
    if (!(z0 > 0.0)) throw Error(ErrorKind::InvalidArgument, fmt::format("z0 must be > 0 (got {})", z0));
    for (std::size_t i = 1; i < n; ++i) {
        if (!(freqs[i] > freqs[i - 1])) {
            throw Error(ErrorKind::NonMonotonicFrequency,
                        fmt::format("frequency grid not strictly increasing at index {}", i));
        }
    }
}

std::string_view to_string(QMode mode) noexcept {
    return mode == QMode::Standard ? "standard" : "paper-literal";
}

QMode parse_q_mode(std::string_view text) {
    if (text == "standard") return QMode::Standard;
    if (text == "paper-literal") return QMode::PaperLiteral;
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown extraction mode '{}'", text));
}

namespace {

std::vector<double> s21_db(const SParameterTrace& trace) {
    std::vector<double> out(trace.size());
    std::transform(trace.s21.begin(), trace.s21.end(), out.begin(), [](cplx s) { return to_db(std::abs(s)); });
    return out;
}

void require_extractable(const SParameterTrace& trace) {
    trace.validate();
    if (trace.size() < 3) {
        throw Error(ErrorKind::InvalidArgument, "extraction needs at least 3 frequency points");
    }
}

// Vertex of the parabola through three points, offsets relative to the middle one.
std::pair<double, double> parabola_vertex(double a, double b, double y0, double y1, double y2) {
    const double s0 = (y0 - y1) / a;
    const double s2 = (y2 - y1) / b;
    const double curv = (s0 - s2) / (a - b);
    if (!(curv < 0.0)) return {0.0, y1};
    const double slope = s0 - curv * a;
    const double x = std::clamp(-slope / (2.0 * curv), a, b);
    return {x, y1 + slope * x + curv * x * x};
}

}  // namespace

Resonance find_resonance(const SParameterTrace& trace) {
    require_extractable(trace);
    const auto db = s21_db(trace);
    std::size_t peak = 0;
    for (std::size_t i = 1; i < db.size(); ++i) {
        if (db[i] > db[peak]) peak = i;
    }
    if (peak == 0 || peak + 1 == db.size()) {
        throw Error(ErrorKind::NoResonance,
                    fmt::format("|S21| peak sits on the grid boundary at {:.6f} GHz",
                                units::to_ghz(trace.freqs[peak])));
    }
    const double fc = trace.freqs[peak];
    const auto [dx, level] = parabola_vertex(trace.freqs[peak - 1] - fc, trace.freqs[peak + 1] - fc,
                                             db[peak - 1], db[peak], db[peak + 1]);
    return {fc + dx, level};
}

double half_power_bandwidth(const SParameterTrace& trace, double f0, double il_db) {
    require_extractable(trace);
    const auto db = s21_db(trace);
    const auto& f = trace.freqs;
    const double level = il_db - half_power_db;

    auto nearest = std::lower_bound(f.begin(), f.end(), f0);
    std::size_t start = static_cast<std::size_t>(nearest - f.begin());
    if (start == f.size()) start = f.size() - 1;
    if (start > 0 && (f0 - f[start - 1]) < (f[start] - f0)) --start;

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double t = (level - db[inside]) / (db[outside] - db[inside]);
        return f[inside] + t * (f[outside] - f[inside]);
    };

    std::optional<double> lower, upper;
    for (std::size_t i = start; i > 0; --i) {
        if (db[i - 1] <= level) {
            lower = crossing(i, i - 1);
            break;
        }
    }
    for (std::size_t i = start; i + 1 < f.size(); ++i) {
        if (db[i + 1] <= level) {
            upper = crossing(i, i + 1);
            break;
        }
    }
    if (!lower || !upper) {
        throw Error(ErrorKind::BandEdgeClipped,
                    fmt::format("{} 3 dB crossing lies outside the grid [{:.6f}, {:.6f}] GHz",
                                !lower ? "lower" : "upper", units::to_ghz(f.front()), units::to_ghz(f.back())));
    }
    return *upper - *lower;
}

double loaded_q(double f0, double delta_f) {
    if (!(f0 > 0.0 && delta_f > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "loaded Q needs positive f0 and bandwidth");
    }
    return f0 / delta_f;
}

UnloadedQ unloaded_q(double q_loaded, double il_db, QMode mode) {
    if (!(q_loaded > 0.0)) throw Error(ErrorKind::InvalidArgument, "loaded Q must be > 0");
    const double s21 = from_db(il_db);
    if (!(il_db < 0.0) || s21 >= 1.0) {
        throw Error(ErrorKind::FullTransmission,
                    fmt::format("|S21| = {:.6f} at resonance leaves Qu undefined", s21));
    }
    if (mode == QMode::PaperLiteral) {
        const double qe = std::pow(10.0, -il_db / 20.0);
        return {1.0 / (1.0 / q_loaded + 1.0 / qe), qe};
    }
    const double qe = s21 > 0.0 ? q_loaded / s21 : std::numeric_limits<double>::infinity();
    return {q_loaded / (1.0 - s21), qe};
}

QReport extract_q_report(const SParameterTrace& trace, const ExtractionOptions& options) {
    require_extractable(trace);
    const SParameterTrace* source = &trace;
    SParameterTrace smoothed;
    if (options.smooth) {
        smoothed = trace;
        const auto n = trace.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t lo = i == 0 ? 0 : i - 1;
            const std::size_t hi = std::min(n - 1, i + 1);
            double sum = 0.0;
            for (std::size_t k = lo; k <= hi; ++k) sum += std::abs(trace.s21[k]);
            const double mag = sum / static_cast<double>(hi - lo + 1);
            smoothed.s21[i] = std::polar(mag, std::arg(trace.s21[i]));
        }
        source = &smoothed;
    }

    const auto res = find_resonance(*source);
    QReport report;
    report.f0 = res.f0;
    report.il_db = res.il_db;
    report.delta_f = half_power_bandwidth(*source, res.f0, res.il_db);
    report.q_loaded = loaded_q(res.f0, report.delta_f);
    const auto uq = unloaded_q(report.q_loaded, res.il_db, options.mode);
    report.q_unloaded = uq.q_unloaded;
    report.q_external = uq.q_external;
    report.mode = options.mode;
    return report;
}

SParameterTrace synthesize_trace(double f0, double q_loaded, double q_unloaded, const std::vector<double>& grid,
                                 double z0) {
    if (!(f0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "f0 must be > 0");
    if (!(q_loaded > 0.0 && q_unloaded > q_loaded)) {
        throw Error(ErrorKind::InvalidQ,
                    fmt::format("need Qu > QL > 0 (QL = {}, Qu = {})", q_loaded, q_unloaded));
    }
    const double ratio = q_loaded / q_unloaded;  // 0 when Qu is unbounded
    const double amplitude = 1.0 - ratio;

    SParameterTrace t;
    t.z0 = z0;
    t.freqs = grid;
    const auto n = grid.size();
    t.s11.resize(n);
    t.s21.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = (grid[i] - f0) / f0;
        const cplx denom(1.0, 2.0 * q_loaded * delta);
        t.s21[i] = amplitude / denom;
        t.s11[i] = cplx(ratio, 2.0 * q_loaded * delta) / denom;
    }
    t.s12 = t.s21;
    t.s22 = t.s11;
    t.validate();
    return t;
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
    if (points < 2 || !(stop > start)) throw Error(ErrorKind::InvalidArgument, "grid needs >= 2 points and stop > start");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    g.back() = stop;
    return g;
}

std::string q_report_to_text(const QReport& r) {
    return fmt::format(
        "f0_GHz = {:.9g}\nIL_dB = {:.6f}\ndelta_f_MHz = {:.6f}\nQL = {:.6g}\nQe = {:.6g}\nQu = {:.6g}\nmode = {}\n",
        units::to_ghz(r.f0), r.il_db, units::to_mhz(r.delta_f), r.q_loaded, r.q_external, r.q_unloaded,
        to_string(r.mode));
}

std::string q_report_to_csv_row(std::string_view file, const QReport& r) {
    std::string name(file);
    if (name.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : name) {
            if (ch == '"') quoted += '"';
            quoted += ch;
        }
        name = quoted + "\"";
    }
    return fmt::format("{},{:.6f},{:.4f},{:.4f},{:.3f},{:.3f},{:.3f},{}", name, units::to_ghz(r.f0), r.il_db,
                       units::to_mhz(r.delta_f), r.q_loaded, r.q_external, r.q_unloaded, to_string(r.mode));
}

}  // namespace siwkit
