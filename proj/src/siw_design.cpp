#include "siwkit/siw_design.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "siwkit/error.hpp"

namespace siwkit {

double via_wall_correction(double d, double p) { return d * d / (0.95 * p); }

EffectiveDims effective_dimensions(const CavityGeometry& geometry) {
    geometry.validate();
    const double corr = via_wall_correction(geometry.d, geometry.p);
    if (corr >= geometry.w || corr >= geometry.l) {
        throw Error(ErrorKind::DegenerateCavity,
                    fmt::format("via correction {:.3f} um consumes the cavity ({:.3f} x {:.3f} um)",
                                units::to_um(corr), units::to_um(geometry.w), units::to_um(geometry.l)));
    }
    return {geometry.w - corr, geometry.l - corr};
}

double resonant_frequency(const Substrate& substrate, const CavityGeometry& geometry) {
    substrate.validate();
    const auto eff = effective_dimensions(geometry);
    const double kx = constants::pi / eff.w_eff;
    const double ky = constants::pi / eff.l_eff;
    return constants::c0 / (2.0 * constants::pi * std::sqrt(substrate.mu_r * substrate.eps_r)) *
           std::sqrt(kx * kx + ky * ky);
}

CavityGeometry synthesize_cavity(double target_f0, const Substrate& substrate, double d, double p, double aspect) {
    if (!(std::isfinite(target_f0) && target_f0 > 0.0)) {
        throw Error(ErrorKind::InvalidTarget, fmt::format("target frequency must be > 0 (got {} Hz)", target_f0));
    }
    if (!(std::isfinite(aspect) && aspect > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, fmt::format("aspect ratio must be > 0 (got {})", aspect));
    }
    if (!(d > 0.0 && p > d)) {
        throw Error(ErrorKind::InvalidArgument, "synthesis requires 0 < d < p");
    }
    substrate.validate();

    const double w_eff = constants::c0 * std::sqrt(1.0 + 1.0 / (aspect * aspect)) /
                         (2.0 * std::sqrt(substrate.mu_r * substrate.eps_r) * target_f0);
    const double l_eff = aspect * w_eff;
    const double corr = via_wall_correction(d, p);

    CavityGeometry g;
    g.w = w_eff + corr;
    g.l = l_eff + corr;
    g.d = d;
    g.p = p;
    g.validate();
    return g;
}

std::vector<SweepRow> parameter_sweep(const ResonatorDesign& design, std::string_view parameter, double start,
                                      double stop, int steps) {
    double Substrate::*sub_field = nullptr;
    double CavityGeometry::*geo_field = nullptr;
    if (parameter == "w") geo_field = &CavityGeometry::w;
    else if (parameter == "l") geo_field = &CavityGeometry::l;
    else if (parameter == "d") geo_field = &CavityGeometry::d;
    else if (parameter == "p") geo_field = &CavityGeometry::p;
    else if (parameter == "eps_r") sub_field = &Substrate::eps_r;
    else {
        throw Error(ErrorKind::UnknownParameter,
                    fmt::format("cannot sweep '{}' (expected one of w, l, d, p, eps_r)", parameter));
    }
    if (steps < 2) throw Error(ErrorKind::InvalidArgument, "a sweep needs at least 2 steps");

    std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        // Endpoints are reproduced exactly.
        const double value = (i == steps - 1) ? stop : start + (stop - start) * i / (steps - 1);
        ResonatorDesign point = design;
        if (geo_field) point.geometry.*geo_field = units::from_um(value);
        else point.substrate.*sub_field = value;

        SweepRow& row = rows[static_cast<std::size_t>(i)];
        row.value = value;
        try {
            row.f101 = resonant_frequency(point.substrate, point.geometry);
            row.valid = validate_design(point).all_satisfied();
        } catch (const Error&) {
            row.f101 = std::numeric_limits<double>::quiet_NaN();
            row.valid = false;
        }
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "param_value,f101_GHz,valid\n";
    for (const auto& r : rows) {
        out += fmt::format("{:.9g},{:.9g},{}\n", r.value, units::to_ghz(r.f101), r.valid ? "true" : "false");
    }
    return out;
}

}  // namespace siwkit
