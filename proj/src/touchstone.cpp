#include "siwkit/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

#include "siwkit/core_model.hpp"
#include "siwkit/error.hpp"

namespace siwkit {

namespace {

constexpr double deg = constants::pi / 180.0;

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_number(std::string_view tok, double& value) {
    // from_chars rejects a leading '+', which some writers emit.
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

double unit_scale(FreqUnit unit) {
    switch (unit) {
        case FreqUnit::Hz: return 1.0;
        case FreqUnit::kHz: return 1e3;
        case FreqUnit::MHz: return 1e6;
        case FreqUnit::GHz: return 1e9;
    }
    return 1.0;
}

std::string_view unit_name(FreqUnit unit) {
    switch (unit) {
        case FreqUnit::Hz: return "HZ";
        case FreqUnit::kHz: return "KHZ";
        case FreqUnit::MHz: return "MHZ";
        case FreqUnit::GHz: return "GHZ";
    }
    return "GHZ";
}

OptionLine parse_option_line(std::string_view line, int line_no) {
    OptionLine opt;
    auto fail = [&](const std::string& what) -> OptionLine {
        throw Error(ErrorKind::MalformedOptionLine, fmt::format("line {}: {}", line_no, what));
    };
    const auto toks = tokens(line.substr(1));
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto t = upper(toks[i]);
        if (t == "HZ") opt.unit = FreqUnit::Hz;
        else if (t == "KHZ") opt.unit = FreqUnit::kHz;
        else if (t == "MHZ") opt.unit = FreqUnit::MHz;
        else if (t == "GHZ") opt.unit = FreqUnit::GHz;
        else if (t == "S") opt.parameter = 'S';
        else if (t == "Y" || t == "Z" || t == "H" || t == "G") return fail(fmt::format("only S parameters are supported, got '{}'", t));
        else if (t == "RI") opt.format = DataFormat::RI;
        else if (t == "MA") opt.format = DataFormat::MA;
        else if (t == "DB") opt.format = DataFormat::DB;
        else if (t == "R") {
            if (i + 1 >= toks.size()) return fail("'R' without a resistance value");
            double r = 0.0;
            if (!parse_number(toks[i + 1], r) || !(r > 0.0)) return fail(fmt::format("bad reference resistance '{}'", toks[i + 1]));
            opt.resistance = r;
            ++i;
        } else {
            return fail(fmt::format("unrecognized token '{}'", toks[i]));
        }
    }
    return opt;
}

cplx decode(DataFormat format, double a, double b) {
    switch (format) {
        case DataFormat::RI: return {a, b};
        case DataFormat::MA: return std::polar(a, b * deg);
        case DataFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * deg);
    }
    return {a, b};
}

std::pair<double, double> encode(DataFormat format, cplx v) {
    switch (format) {
        case DataFormat::RI: return {v.real(), v.imag()};
        case DataFormat::MA: return {std::abs(v), std::arg(v) / deg};
        case DataFormat::DB: return {20.0 * std::log10(std::abs(v)), std::arg(v) / deg};
    }
    return {v.real(), v.imag()};
}

}  // namespace

std::string_view to_string(DataFormat format) noexcept {
    switch (format) {
        case DataFormat::RI: return "RI";
        case DataFormat::MA: return "MA";
        case DataFormat::DB: return "DB";
    }
    return "MA";
}

DataFormat parse_data_format(std::string_view text) {
    const auto t = upper(text);
    if (t == "RI") return DataFormat::RI;
    if (t == "MA") return DataFormat::MA;
    if (t == "DB") return DataFormat::DB;
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown Touchstone format '{}'", text));
}

TouchstoneDocument parse_touchstone(std::string_view text) {
    TouchstoneDocument doc;
    bool have_options = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (const auto bang = line.find('!'); bang != std::string_view::npos) {
            const auto before = line.substr(0, bang);
            if (tokens(before).empty()) {
                auto comment = line.substr(bang + 1);
                if (!comment.empty() && comment.back() == '\r') comment.remove_suffix(1);
                doc.comments.emplace_back(comment);
            }
            line = before;
        }
        const auto toks = tokens(line);
        if (toks.empty()) continue;

        if (toks.front().front() == '#') {
            // Only the first option line counts.
            if (!have_options) {
                const auto hash = line.find('#');
                doc.options = parse_option_line(line.substr(hash), line_no);
                have_options = true;
            }
            continue;
        }

        if (toks.size() != 9) {
            throw Error(ErrorKind::BadRowArity,
                        fmt::format("line {}: expected 9 values for a 2-port row, got {}", line_no, toks.size()));
        }
        double v[9];
        for (int k = 0; k < 9; ++k) {
            if (!parse_number(toks[k], v[k])) {
                throw Error(ErrorKind::BadRowArity, fmt::format("line {}: '{}' is not a number", line_no, toks[k]));
            }
        }
        auto& t = doc.trace;
        const double f = v[0] * unit_scale(doc.options.unit);
        if (!t.freqs.empty() && !(f > t.freqs.back())) {
            throw Error(ErrorKind::NonMonotonicFrequency,
                        fmt::format("line {}: frequency {} does not increase", line_no, v[0]));
        }
        t.freqs.push_back(f);
        t.s11.push_back(decode(doc.options.format, v[1], v[2]));
        t.s21.push_back(decode(doc.options.format, v[3], v[4]));
        t.s12.push_back(decode(doc.options.format, v[5], v[6]));
        t.s22.push_back(decode(doc.options.format, v[7], v[8]));
    }
    doc.trace.z0 = doc.options.resistance;
    return doc;
}

TouchstoneDocument load_touchstone(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_touchstone(ss.str());
    } catch (const Error& e) {
        throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.detail()));
    }
}

std::string write_touchstone(const SParameterTrace& trace, DataFormat format, FreqUnit unit,
                             const std::vector<std::string>& comments) {
    trace.validate();
    std::string out;
    for (const auto& c : comments) out += fmt::format("!{}\n", c);
    out += fmt::format("# {} S {} R {:.9g}\n", unit_name(unit), to_string(format), trace.z0);
    const double scale = unit_scale(unit);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out += fmt::format("{:.9e}", trace.freqs[i] / scale);
        for (const cplx v : {trace.s11[i], trace.s21[i], trace.s12[i], trace.s22[i]}) {
            const auto [a, b] = encode(format, v);
            out += fmt::format(" {:.9e} {:.9e}", a, b);
        }
        out += '\n';
    }
    return out;
}

ZParameterTrace s_to_z(const SParameterTrace& trace) {
    trace.validate();
    ZParameterTrace z;
    z.freqs = trace.freqs;
    const auto n = trace.size();
    z.z11.resize(n);
    z.z12.resize(n);
    z.z21.resize(n);
    z.z22.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx s11 = trace.s11[i], s12 = trace.s12[i], s21 = trace.s21[i], s22 = trace.s22[i];
        // (I − S)⁻¹ = adj / det
        const cplx det = (1.0 - s11) * (1.0 - s22) - s12 * s21;
        const double scale = 1.0 + std::abs(s11) + std::abs(s22) + std::abs(s12 * s21);
        if (std::abs(det) <= 1e-12 * scale) {
            throw Error(ErrorKind::SingularConversion,
                        fmt::format("I - S is singular at {:.9g} GHz", units::to_ghz(trace.freqs[i])));
        }
        const double z0 = trace.z0;
        // (I + S)·adj(I − S)
        z.z11[i] = z0 * ((1.0 + s11) * (1.0 - s22) + s12 * s21) / det;
        z.z12[i] = z0 * (2.0 * s12) / det;
        z.z21[i] = z0 * (2.0 * s21) / det;
        z.z22[i] = z0 * ((1.0 + s22) * (1.0 - s11) + s12 * s21) / det;
    }
    return z;
}

}  // namespace siwkit
