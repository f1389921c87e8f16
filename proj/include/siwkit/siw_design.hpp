#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "siwkit/core_model.hpp"

namespace siwkit {

struct EffectiveDims {
    double w_eff = 0.0;
    double l_eff = 0.0;
};

/// Post-wall correction d²/(0.95 p), identical on both axes.
double via_wall_correction(double d, double p);

EffectiveDims effective_dimensions(const CavityGeometry& geometry);

/// TE101 resonance of the equivalent solid-wall cavity, Hz.
double resonant_frequency(const Substrate& substrate, const CavityGeometry& geometry);

/// Closed-form inverse of resonant_frequency. `aspect` is l_eff / w_eff.
CavityGeometry synthesize_cavity(double target_f0, const Substrate& substrate, double d, double p,
                                 double aspect = 1.0);

struct SweepRow {
    double value = 0.0;  // I/O units: µm for lengths, dimensionless for eps_r
    double f101 = 0.0;   // Hz, NaN when the model cannot be evaluated
    bool valid = false;  // all printed validity rules hold
};

/// Sweeps one of {w, l, d, p, eps_r} over [start, stop] (I/O units) in
/// `steps` evenly spaced samples. Rows are evaluated independently and
/// out-of-domain rows are reported, not refused.
std::vector<SweepRow> parameter_sweep(const ResonatorDesign& design, std::string_view parameter,
                                      double start, double stop, int steps);

/// CSV with header `param_value,f101_GHz,valid`.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace siwkit
