#include "siwkit/core_model.hpp"

#include <cmath>
#include <fmt/format.h>

#include "siwkit/error.hpp"
#include "siwkit/siw_design.hpp"

namespace siwkit {

namespace {

void require(bool condition, const std::string& what) {
    if (!condition) throw Error(ErrorKind::InvalidArgument, what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void Substrate::validate() const {
    require(finite(eps_r) && eps_r >= 1.0, fmt::format("eps_r must be >= 1 (got {})", eps_r));
    require(finite(mu_r) && mu_r > 0.0, fmt::format("mu_r must be > 0 (got {})", mu_r));
    require(finite(tan_delta) && tan_delta >= 0.0, fmt::format("tan_delta must be >= 0 (got {})", tan_delta));
    require(finite(h) && h > 0.0, fmt::format("substrate thickness must be > 0 (got {} m)", h));
}

Substrate Substrate::from_io(double eps_r, double mu_r, double tan_delta, double h_um) {
    Substrate s{eps_r, mu_r, tan_delta, units::from_um(h_um)};
    s.validate();
    return s;
}

Substrate substrate_preset(std::string_view name) {
    if (name == "high-resistivity-silicon" || name == "hr-si" || name == "silicon") {
        return Substrate{11.9, 1.0, 0.0, units::from_um(500.0)};
    }
    if (name == "air") return Substrate{1.0, 1.0, 0.0, units::from_um(500.0)};
    if (name == "alumina") return Substrate{9.8, 1.0, 1e-4, units::from_um(635.0)};
    if (name == "rt-duroid-5880") return Substrate{2.2, 1.0, 9e-4, units::from_um(508.0)};
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown substrate preset '{}'", name));
}

std::vector<std::string> substrate_preset_names() {
    return {"high-resistivity-silicon", "air", "alumina", "rt-duroid-5880"};
}

Substrate default_substrate() { return substrate_preset("high-resistivity-silicon"); }

void CavityGeometry::validate() const {
    require(finite(w) && w > 0.0, fmt::format("w must be > 0 (got {} m)", w));
    require(finite(l) && l > 0.0, fmt::format("l must be > 0 (got {} m)", l));
    require(finite(d) && d >= 0.0, fmt::format("d must be >= 0 (got {} m)", d));
    require(finite(p) && p > d, fmt::format("via pitch p must exceed diameter d (p={} m, d={} m)", p, d));
    require(finite(probe_w) && probe_w >= 0.0, "probe width must be >= 0");
    require(finite(probe_l) && probe_l >= 0.0, "probe length must be >= 0");
}

CavityGeometry CavityGeometry::from_um(double w_um, double l_um, double d_um, double p_um, double probe_w_um,
                                       double probe_l_um) {
    CavityGeometry g{units::from_um(w_um), units::from_um(l_um), units::from_um(d_um),
                     units::from_um(p_um), units::from_um(probe_w_um), units::from_um(probe_l_um)};
    g.validate();
    return g;
}

void ResonatorDesign::validate() const {
    substrate.validate();
    geometry.validate();
    if (target_f0) {
        require(finite(*target_f0) && *target_f0 > 0.0, fmt::format("target_f0 must be > 0 (got {} Hz)", *target_f0));
    }
}

bool ValidityReport::all_satisfied(bool include_conservative) const {
    for (const auto& r : rules) {
        if (r.conservative && !include_conservative) continue;
        if (!r.satisfied) return false;
    }
    return true;
}

const ValidityRule& ValidityReport::rule(std::string_view id) const {
    for (const auto& r : rules) {
        if (r.id == id) return r;
    }
    throw Error(ErrorKind::InvalidArgument, fmt::format("no validity rule '{}'", id));
}

ValidityReport validate_design(const ResonatorDesign& design) {
    design.validate();

    ValidityReport report;
    if (design.target_f0) {
        report.frequency = *design.target_f0;
        report.frequency_from_target = true;
    } else {
        try {
            report.frequency = resonant_frequency(design.substrate, design.geometry);
        } catch (const Error& e) {
            throw Error(ErrorKind::MissingFrequency,
                        fmt::format("no target_f0 and the forward model cannot be evaluated ({})", e.what()));
        }
    }

    const auto& g = design.geometry;
    const double lambda0 = constants::c0 / report.frequency;
    const double sqrt_er = std::sqrt(design.substrate.eps_r);

    auto add = [&](std::string_view id, double lhs, double rhs, bool conservative, std::string_view label) {
        const bool ok = lhs < rhs;
        report.rules.push_back(ValidityRule{
            std::string(id), ok, lhs, rhs,
            fmt::format("{}: {:.1f} um {} {:.1f} um ({})", label, units::to_um(lhs), ok ? "<" : ">=",
                        units::to_um(rhs), ok ? "satisfied" : "violated"),
            conservative});
    };

    add(rule_ids::pitch_vs_wavelength, g.p, lambda0 * sqrt_er / 2.0, false, "p < lambda0*sqrt(eps_r)/2");
    add(rule_ids::pitch_vs_diameter, g.p, 4.0 * g.d, false, "p < 4d");
    add(rule_ids::pitch_vs_wavelength_conservative, g.p, lambda0 / (2.0 * sqrt_er), true,
        "[conservative] p < lambda0/(2*sqrt(eps_r))");
    return report;
}

}  // namespace siwkit
