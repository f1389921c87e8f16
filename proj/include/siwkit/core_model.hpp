#pragma once

// Shared physical constants, unit helpers and the resonator domain types.
// Everything is stored in SI (Hz, m). I/O surfaces use GHz and µm and go
// through the helpers in `units`.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace siwkit {

namespace constants {
inline constexpr double c0 = 2.99792458e8;  // m/s, exact
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

namespace units {
inline constexpr double from_ghz(double ghz) { return ghz * 1e9; }
inline constexpr double to_ghz(double hz) { return hz * 1e-9; }
inline constexpr double from_mhz(double mhz) { return mhz * 1e6; }
inline constexpr double to_mhz(double hz) { return hz * 1e-6; }
inline constexpr double from_um(double um) { return um * 1e-6; }
inline constexpr double to_um(double m) { return m * 1e6; }
inline constexpr double from_mm(double mm) { return mm * 1e-3; }
inline constexpr double to_mm(double m) { return m * 1e3; }
}  // namespace units

struct Substrate {
    double eps_r = 1.0;
    double mu_r = 1.0;
    double tan_delta = 0.0;
    double h = 0.0;  // m

    /// Throws Error(InvalidArgument) if any field is out of range.
    void validate() const;

    /// Builds a substrate from I/O units (thickness in µm).
    static Substrate from_io(double eps_r, double mu_r, double tan_delta, double h_um);
};

/// Named substrate presets. "high-resistivity-silicon" is the default.
Substrate substrate_preset(std::string_view name);
std::vector<std::string> substrate_preset_names();
Substrate default_substrate();

/// Via-fenced rectangular cavity. w and l are via-center to via-center.
struct CavityGeometry {
    double w = 0.0;
    double l = 0.0;
    double d = 0.0;  // via diameter
    double p = 0.0;  // via pitch
    double probe_w = 0.0;  // Wp, 0 = unspecified
    double probe_l = 0.0;  // Lp, 0 = unspecified

    void validate() const;

    static CavityGeometry from_um(double w_um, double l_um, double d_um, double p_um,
                                  double probe_w_um = 0.0, double probe_l_um = 0.0);
};

struct ResonatorDesign {
    Substrate substrate;
    CavityGeometry geometry;
    std::optional<double> target_f0;  // Hz

    void validate() const;
};

struct ValidityRule {
    std::string id;
    bool satisfied = false;
    double lhs = 0.0;  // SI
    double rhs = 0.0;  // SI
    std::string message;
    bool conservative = false;  // not part of the printed domain of validity
};

struct ValidityReport {
    double frequency = 0.0;  // frequency at which λ0 was evaluated, Hz
    bool frequency_from_target = false;
    std::vector<ValidityRule> rules;

    /// True when every printed rule holds; conservative rules are included
    /// only on request.
    [[nodiscard]] bool all_satisfied(bool include_conservative = false) const;
    [[nodiscard]] const ValidityRule& rule(std::string_view id) const;
};

namespace rule_ids {
inline constexpr std::string_view pitch_vs_diameter = "p_lt_4d";
inline constexpr std::string_view pitch_vs_wavelength = "p_lt_lambda0_sqrt_er_over_2";
inline constexpr std::string_view pitch_vs_wavelength_conservative = "p_lt_lambda0_over_2_sqrt_er";
}  // namespace rule_ids

/// Evaluates the post-wall model's domain of validity at target_f0, or at the
/// forward-model frequency when no target is set.
ValidityReport validate_design(const ResonatorDesign& design);

}  // namespace siwkit
