#include "siwkit/design_file.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "siwkit/error.hpp"

namespace siwkit {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;
using Document = std::map<std::string, Section>;

[[noreturn]] void fail(int line, const std::string& what) {
    throw Error(ErrorKind::DesignFileError, fmt::format("line {}: {}", line, what));
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"substrate", {"preset", "eps_r", "mu_r", "tan_delta", "h_um"}},
        {"geometry", {"w_um", "l_um", "d_um", "p_um", "probe_w_um", "probe_l_um"}},
        {"target", {"f0_ghz"}},
    };
    return s;
}

Document parse_document(std::string_view text) {
    Document doc;
    std::string current;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(current)) fail(line_no, fmt::format("unknown section [{}]", current));
            if (doc.contains(current)) fail(line_no, fmt::format("duplicate section [{}]", current));
            doc[current];
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
        if (current.empty()) fail(line_no, "key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!schema().at(current).contains(key)) {
            fail(line_no, fmt::format("unknown key '{}' in [{}]", key, current));
        }
        auto& section = doc[current];
        if (section.contains(key)) fail(line_no, fmt::format("duplicate key '{}'", key));
        section[key] = Entry{value, line_no};
    }
    return doc;
}

double to_number(const Entry& e, std::string_view key) {
    double v = 0.0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) fail(e.line, fmt::format("'{}' is not a number: '{}'", key, e.value));
    return v;
}

std::optional<double> number(const Section& s, std::string_view key) {
    auto it = s.find(std::string(key));
    if (it == s.end()) return std::nullopt;
    return to_number(it->second, key);
}

double required(const Section& s, std::string_view section, std::string_view key) {
    auto v = number(s, key);
    if (!v) throw Error(ErrorKind::DesignFileError, fmt::format("missing '{}' in [{}]", key, section));
    return *v;
}

Substrate substrate_from(const Section& s) {
    Substrate sub = default_substrate();
    if (auto it = s.find("preset"); it != s.end()) {
        try {
            sub = substrate_preset(it->second.value);
        } catch (const Error& e) {
            fail(it->second.line, e.what());
        }
    }
    if (auto v = number(s, "eps_r")) sub.eps_r = *v;
    if (auto v = number(s, "mu_r")) sub.mu_r = *v;
    if (auto v = number(s, "tan_delta")) sub.tan_delta = *v;
    if (auto v = number(s, "h_um")) sub.h = units::from_um(*v);
    try {
        sub.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::DesignFileError, fmt::format("[substrate]: {}", e.what()));
    }
    return sub;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, fmt::format("cannot open '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ResonatorDesign parse_design_file(std::string_view text) {
    const auto doc = parse_document(text);

    ResonatorDesign design;
    design.substrate = doc.contains("substrate") ? substrate_from(doc.at("substrate")) : default_substrate();

    if (!doc.contains("geometry")) throw Error(ErrorKind::DesignFileError, "missing [geometry] section");
    const auto& g = doc.at("geometry");
    design.geometry.w = units::from_um(required(g, "geometry", "w_um"));
    design.geometry.l = units::from_um(required(g, "geometry", "l_um"));
    design.geometry.d = units::from_um(required(g, "geometry", "d_um"));
    design.geometry.p = units::from_um(required(g, "geometry", "p_um"));
    design.geometry.probe_w = units::from_um(number(g, "probe_w_um").value_or(0.0));
    design.geometry.probe_l = units::from_um(number(g, "probe_l_um").value_or(0.0));

    if (doc.contains("target")) {
        if (auto f = number(doc.at("target"), "f0_ghz")) design.target_f0 = units::from_ghz(*f);
    }

    try {
        design.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::DesignFileError, e.what());
    }
    return design;
}

std::string write_design_file(const ResonatorDesign& design) {
    const auto& s = design.substrate;
    const auto& g = design.geometry;
    std::string out;
    out += "# siwkit resonator design (lengths in um, frequency in GHz)\n";
    out += "[substrate]\n";
    out += fmt::format("eps_r = {:.15g}\n", s.eps_r);
    out += fmt::format("mu_r = {:.15g}\n", s.mu_r);
    out += fmt::format("tan_delta = {:.15g}\n", s.tan_delta);
    out += fmt::format("h_um = {:.15g}\n", units::to_um(s.h));
    out += "\n[geometry]\n";
    out += fmt::format("w_um = {:.15g}\n", units::to_um(g.w));
    out += fmt::format("l_um = {:.15g}\n", units::to_um(g.l));
    out += fmt::format("d_um = {:.15g}\n", units::to_um(g.d));
    out += fmt::format("p_um = {:.15g}\n", units::to_um(g.p));
    out += fmt::format("probe_w_um = {:.15g}\n", units::to_um(g.probe_w));
    out += fmt::format("probe_l_um = {:.15g}\n", units::to_um(g.probe_l));
    if (design.target_f0) {
        out += "\n[target]\n";
        out += fmt::format("f0_ghz = {:.15g}\n", units::to_ghz(*design.target_f0));
    }
    return out;
}

Substrate parse_substrate_file(std::string_view text) {
    const auto doc = parse_document(text);
    if (doc.size() != 1 || !doc.contains("substrate")) {
        throw Error(ErrorKind::DesignFileError, "a substrate file holds exactly one [substrate] section");
    }
    return substrate_from(doc.at("substrate"));
}

ResonatorDesign load_design_file(const std::filesystem::path& path) {
    try {
        return parse_design_file(read_file(path));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::IoError) throw;
        throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.detail()));
    }
}

Substrate resolve_substrate(std::string_view preset_or_path) {
    const std::filesystem::path path{std::string(preset_or_path)};
    if (!std::filesystem::exists(path)) {
        try {
            return substrate_preset(preset_or_path);
        } catch (const Error&) {
        }
        throw Error(ErrorKind::InvalidArgument,
                    fmt::format("'{}' is neither a substrate preset nor an existing file", preset_or_path));
    }
    return parse_substrate_file(read_file(path));
}

}  // namespace siwkit
