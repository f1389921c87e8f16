#include "siwkit/filter_design.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>

#include "siwkit/error.hpp"
#include "siwkit/q_extraction.hpp"
#include "siwkit/siw_design.hpp"

namespace siwkit {

std::string_view to_string(ResponseFamily family) noexcept {
    return family == ResponseFamily::Butterworth ? "butterworth" : "chebyshev";
}

ResponseFamily parse_response_family(std::string_view text) {
    if (text == "butterworth" || text == "Butterworth") return ResponseFamily::Butterworth;
    if (text == "chebyshev" || text == "Chebyshev") return ResponseFamily::Chebyshev;
    throw Error(ErrorKind::UnsupportedFamily, fmt::format("unsupported response family '{}'", text));
}

void FilterSpec::validate() const {
    if (!(f0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "filter center frequency must be > 0");
    if (!(fbw > 0.0 && fbw < 0.5)) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("fractional bandwidth must be in (0, 0.5), got {}", fbw));
    }
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "filter order must be >= 1");
    if (family == ResponseFamily::Chebyshev && !(ripple_db > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "Chebyshev ripple must be > 0 dB");
    }
    if (q_unloaded && !(*q_unloaded > 0.0)) throw Error(ErrorKind::InvalidArgument, "Qu must be > 0");
}

std::vector<double> lowpass_prototype(ResponseFamily family, int n, double ripple_db) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "prototype order must be >= 1");
    std::vector<double> g(static_cast<std::size_t>(n) + 2);
    g[0] = 1.0;
    const double pi = constants::pi;

    switch (family) {
        case ResponseFamily::Butterworth:
            for (int k = 1; k <= n; ++k) g[k] = 2.0 * std::sin((2.0 * k - 1.0) * pi / (2.0 * n));
            g[n + 1] = 1.0;
            return g;
        case ResponseFamily::Chebyshev: {
            if (!(ripple_db > 0.0)) throw Error(ErrorKind::InvalidArgument, "Chebyshev ripple must be > 0 dB");
            const double beta = std::log(1.0 / std::tanh(ripple_db / (40.0 / std::log(10.0))));
            const double gamma = std::sinh(beta / (2.0 * n));
            auto a = [&](int k) { return std::sin((2.0 * k - 1.0) * pi / (2.0 * n)); };
            auto b = [&](int k) { return gamma * gamma + std::pow(std::sin(k * pi / n), 2); };
            g[1] = 2.0 * a(1) / gamma;
            for (int k = 2; k <= n; ++k) g[k] = 4.0 * a(k - 1) * a(k) / (b(k - 1) * g[k - 1]);
            g[n + 1] = (n % 2 == 1) ? 1.0 : std::pow(1.0 / std::tanh(beta / 4.0), 2);
            return g;
        }
    }
    throw Error(ErrorKind::UnsupportedFamily, "unsupported response family");
}

CouplingPlan coupling_plan(const FilterSpec& spec, const Substrate& substrate, double d, double p) {
    spec.validate();
    CouplingPlan plan;
    plan.n = spec.order;
    plan.g = lowpass_prototype(spec.family, spec.order, spec.ripple_db);
    const auto& g = plan.g;
    const int n = plan.n;

    plan.m.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 1; i < n; ++i) {
        const double mij = 1.0 / std::sqrt(g[i] * g[i + 1]);
        plan.k.push_back(spec.fbw * mij);
        plan.m[static_cast<std::size_t>(i - 1) * n + i] = mij;
        plan.m[static_cast<std::size_t>(i) * n + (i - 1)] = mij;
    }
    plan.qe_in = g[0] * g[1] / spec.fbw;
    plan.qe_out = g[n] * g[n + 1] / spec.fbw;
    plan.cavity = synthesize_cavity(spec.f0, substrate, d, p, 1.0);
    return plan;
}

double midband_insertion_loss(const CouplingPlan& plan, const FilterSpec& spec) {
    if (!spec.q_unloaded || std::isinf(*spec.q_unloaded)) return 0.0;
    const double sum_g = std::accumulate(plan.g.begin() + 1, plan.g.begin() + 1 + plan.n, 0.0);
    return 10.0 / std::log(10.0) * sum_g / (spec.fbw * *spec.q_unloaded);
}

PointResponse evaluate_coupling_matrix(const CouplingPlan& plan, const FilterSpec& spec, double f) {
    using CMatrix = Eigen::MatrixXcd;
    const int n = plan.n;
    const cplx j(0.0, 1.0);

    cplx lambda = (f / spec.f0 - spec.f0 / f) / spec.fbw;
    if (spec.q_unloaded && std::isfinite(*spec.q_unloaded)) lambda -= j / (spec.fbw * *spec.q_unloaded);

    const double q1 = plan.qe_in * spec.fbw;
    const double qn = plan.qe_out * spec.fbw;

    CMatrix a = CMatrix::Zero(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a(r, c) = plan.m_at(r, c);
        a(r, r) += lambda;
    }
    a(0, 0) -= j / q1;
    a(n - 1, n - 1) -= j / qn;

    Eigen::PartialPivLU<CMatrix> lu(a);
    if (!(lu.rcond() > 1e-14)) {
        throw Error(ErrorKind::SingularMatrix, fmt::format("coupling matrix singular at {:.9f} GHz", units::to_ghz(f)));
    }
    const CMatrix inv = lu.inverse();
    const double port = 2.0 / std::sqrt(q1 * qn);
    PointResponse out;
    out.s21 = -j * port * inv(n - 1, 0);
    out.s12 = -j * port * inv(0, n - 1);
    out.s11 = 1.0 + 2.0 * j / q1 * inv(0, 0);
    return out;
}

namespace {

ResponseMetrics measure(const std::vector<double>& f, const std::vector<double>& s21_db) {
    std::size_t peak = 0;
    for (std::size_t i = 1; i < s21_db.size(); ++i) {
        if (s21_db[i] > s21_db[peak]) peak = i;
    }
    const double level = s21_db[peak] - half_power_db;
    auto cross = [&](std::size_t inside, std::size_t outside) {
        const double t = (level - s21_db[inside]) / (s21_db[outside] - s21_db[inside]);
        return f[inside] + t * (f[outside] - f[inside]);
    };
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = lo;
    for (std::size_t i = peak; i > 0; --i) {
        if (s21_db[i - 1] <= level) {
            lo = cross(i, i - 1);
            break;
        }
    }
    for (std::size_t i = peak; i + 1 < f.size(); ++i) {
        if (s21_db[i + 1] <= level) {
            hi = cross(i, i + 1);
            break;
        }
    }
    if (std::isnan(lo) || std::isnan(hi)) {
        throw Error(ErrorKind::InvalidArgument, "response grid does not contain both 3 dB edges");
    }

    ResponseMetrics m;
    m.bandwidth_3db = hi - lo;
    m.center = 0.5 * (lo + hi);
    auto it = std::lower_bound(f.begin(), f.end(), m.center);
    const auto k = static_cast<std::size_t>(it - f.begin());
    const double t = (m.center - f[k - 1]) / (f[k] - f[k - 1]);
    m.midband_il_db = -(s21_db[k - 1] + t * (s21_db[k] - s21_db[k - 1]));
    return m;
}

}  // namespace

FilterResponse simulate_response(const CouplingPlan& plan, const FilterSpec& spec, const std::vector<double>& grid) {
    spec.validate();
    if (plan.n != spec.order) throw Error(ErrorKind::InvalidArgument, "plan order does not match the spec");
    if (grid.size() < 3) throw Error(ErrorKind::InvalidArgument, "response grid needs at least 3 points");

    FilterResponse r;
    r.freqs = grid;
    r.s21_db.resize(grid.size());
    r.s11_db.resize(grid.size());
    r.s12_db.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorKind::NonMonotonicFrequency, "response grid must be strictly increasing");
        }
        const auto pt = evaluate_coupling_matrix(plan, spec, grid[i]);
        r.s21_db[i] = to_db(std::abs(pt.s21));
        r.s11_db[i] = to_db(std::abs(pt.s11));
        r.s12_db[i] = to_db(std::abs(pt.s12));
    }
    r.metrics = measure(r.freqs, r.s21_db);
    return r;
}

std::vector<double> default_filter_grid(const FilterSpec& spec, std::size_t points) {
    const double half_span = 3.0 * spec.fbw * spec.f0;
    return linear_grid(spec.f0 - half_span, spec.f0 + half_span, points);
}

TwoPoleDesign design_two_pole(double f0, double fbw, ResponseFamily family, double ripple_db,
                              const Substrate& substrate, double d, double p, std::optional<double> q_unloaded) {
    TwoPoleDesign out;
    out.spec = FilterSpec{f0, fbw, 2, family, ripple_db, q_unloaded};
    out.spec.validate();
    out.plan = coupling_plan(out.spec, substrate, d, p);
    out.response = simulate_response(out.plan, out.spec, default_filter_grid(out.spec));

    const auto& cav = out.plan.cavity;
    out.layout.cavity_w = cav.w;
    out.layout.cavity_l = cav.l;
    // Two cavities side by side sharing one via wall, measured to the outer via edges.
    out.layout.extent_x = 2.0 * cav.w + cav.d;
    out.layout.extent_y = cav.l + cav.d;
    return out;
}

std::string response_to_csv(const FilterResponse& response) {
    std::string out = "f_GHz,S21_dB,S11_dB\n";
    for (std::size_t i = 0; i < response.freqs.size(); ++i) {
        out += fmt::format("{:.9f},{:.6f},{:.6f}\n", units::to_ghz(response.freqs[i]), response.s21_db[i],
                           response.s11_db[i]);
    }
    return out;
}

std::string plan_to_text(const CouplingPlan& plan, const FilterSpec& spec) {
    auto join = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += fmt::format("{}{:.9g}", i ? ", " : "", v[i]);
        return s;
    };
    std::string out;
    out += "[spec]\n";
    out += fmt::format("f0_ghz = {:.9g}\nfbw = {:.9g}\norder = {}\nfamily = {}\n", units::to_ghz(spec.f0), spec.fbw,
                       spec.order, to_string(spec.family));
    if (spec.family == ResponseFamily::Chebyshev) out += fmt::format("ripple_db = {:.9g}\n", spec.ripple_db);
    if (spec.q_unloaded) out += fmt::format("q_unloaded = {:.9g}\n", *spec.q_unloaded);
    out += "\n[coupling]\n";
    out += fmt::format("g = {}\n", join(plan.g));
    out += fmt::format("k = {}\n", join(plan.k));
    out += fmt::format("qe_in = {:.9g}\nqe_out = {:.9g}\n", plan.qe_in, plan.qe_out);
    for (int r = 0; r < plan.n; ++r) {
        std::vector<double> row(plan.m.begin() + static_cast<long>(r) * plan.n,
                                plan.m.begin() + static_cast<long>(r + 1) * plan.n);
        out += fmt::format("m{} = {}\n", r + 1, join(row));
    }
    out += "\n[cavity]\n";
    out += fmt::format("w_um = {:.6f}\nl_um = {:.6f}\nd_um = {:.6f}\np_um = {:.6f}\n", units::to_um(plan.cavity.w),
                       units::to_um(plan.cavity.l), units::to_um(plan.cavity.d), units::to_um(plan.cavity.p));
    return out;
}

}  // namespace siwkit
