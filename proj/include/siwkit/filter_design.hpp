#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "siwkit/core_model.hpp"

namespace siwkit {

enum class ResponseFamily { Butterworth, Chebyshev };

std::string_view to_string(ResponseFamily family) noexcept;
ResponseFamily parse_response_family(std::string_view text);

struct FilterSpec {
    double f0 = 0.0;   // Hz
    double fbw = 0.0;  // fractional bandwidth
    int order = 2;
    ResponseFamily family = ResponseFamily::Butterworth;
    double ripple_db = 0.0;                 // Chebyshev only
    std::optional<double> q_unloaded;       // empty = lossless

    void validate() const;
};

/// Lowpass prototype g0..g(n+1).
std::vector<double> lowpass_prototype(ResponseFamily family, int n, double ripple_db = 0.0);

struct CouplingPlan {
    std::vector<double> g;
    std::vector<double> k;  // k(i,i+1), size n−1
    double qe_in = 0.0;
    double qe_out = 0.0;
    int n = 0;
    std::vector<double> m;  // n×n row-major normalized coupling matrix
    CavityGeometry cavity;  // per-cavity footprint synthesized at f0

    [[nodiscard]] double m_at(int i, int j) const { return m[static_cast<std::size_t>(i) * n + j]; }
};

CouplingPlan coupling_plan(const FilterSpec& spec, const Substrate& substrate, double d, double p);

/// Dissipation estimate 4.343·Σg/(fbw·Qu) dB; 0 when Qu is unbounded.
double midband_insertion_loss(const CouplingPlan& plan, const FilterSpec& spec);

struct ResponseMetrics {
    double midband_il_db = 0.0;  // positive loss at the band center
    double bandwidth_3db = 0.0;  // Hz, relative to the peak |S21|
    double center = 0.0;         // Hz, midpoint of the 3 dB edges
};

struct FilterResponse {
    std::vector<double> freqs;
    std::vector<double> s21_db;
    std::vector<double> s11_db;
    std::vector<double> s12_db;
    ResponseMetrics metrics;
};

struct PointResponse {
    std::complex<double> s11, s21, s12;
};

/// Coupling-matrix evaluation at one frequency.
PointResponse evaluate_coupling_matrix(const CouplingPlan& plan, const FilterSpec& spec, double f);

FilterResponse simulate_response(const CouplingPlan& plan, const FilterSpec& spec,
                                 const std::vector<double>& grid);

/// Default grid: 3 bandwidths either side of f0 (6 in total).
std::vector<double> default_filter_grid(const FilterSpec& spec, std::size_t points = 1201);

struct LayoutSummary {
    double cavity_w = 0.0;
    double cavity_l = 0.0;
    double extent_x = 0.0;  // two cavities side by side, shared wall, plus fence
    double extent_y = 0.0;
};

struct TwoPoleDesign {
    FilterSpec spec;
    CouplingPlan plan;
    FilterResponse response;
    LayoutSummary layout;
};

TwoPoleDesign design_two_pole(double f0, double fbw, ResponseFamily family, double ripple_db,
                              const Substrate& substrate, double d, double p,
                              std::optional<double> q_unloaded);

/// CSV with header `f_GHz,S21_dB,S11_dB`.
std::string response_to_csv(const FilterResponse& response);

/// Structured text: g, k, Qe, m, cavity dims (µm).
std::string plan_to_text(const CouplingPlan& plan, const FilterSpec& spec);

}  // namespace siwkit
