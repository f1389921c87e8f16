#pragma once

// Finite-difference eigenmode oracle for the via-fenced cavity.
//
// TE101 has no variation across the substrate height, so Ey obeys the 2-D
// Helmholtz equation −∇²Ey = k²·Ey with Ey = 0 on every conductor. The
// smallest Dirichlet eigenvalue k² of the 5-point Laplacian gives
// f = c·k / (2π·√(µr·εr)).

#include <cstdint>
#include <string>
#include <vector>

#include "siwkit/core_model.hpp"

namespace siwkit {

struct DiscretizedCavity {
    double dx = 0.0;  // m
    double dy = 0.0;  // m
    int nx = 0;
    int ny = 0;
    std::vector<std::uint8_t> mask;  // row-major, index = j*nx + i; 1 = conductor
    CavityGeometry geometry;          // what was rasterized
    double margin = 0.0;              // outer box offset beyond the via-center rectangle
    int via_count = 0;

    [[nodiscard]] bool masked(int i, int j) const { return mask[static_cast<std::size_t>(j) * nx + i] != 0; }
    [[nodiscard]] std::size_t unknowns() const;
};

struct EigenResult {
    double k_squared = 0.0;  // 1/m²
    double f_oracle = 0.0;   // Hz
    int nx = 0;
    int ny = 0;
    std::vector<double> field;  // normalized Ey, max = 1, zero on masked nodes
    int iterations = 0;
    double residual = 0.0;  // ‖Av − k²v‖ / (k²‖v‖)
};

enum class InnerSolver {
    Cholesky,           // sparse LLT, factorized once and reused every step
    ConjugateGradient,  // incomplete-Cholesky preconditioned CG, no factorization
};

struct SolverOptions {
    double tol = 1e-9;
    int max_iterations = 500;
    InnerSolver inner = InnerSolver::Cholesky;
};

/// Vias on the w×l perimeter, corners included, round(side/p) even intervals
/// per side. The outer Dirichlet box sits one pitch outside the fence.
/// `resolution` is grid nodes per via diameter.
DiscretizedCavity rasterize(const CavityGeometry& geometry, const Substrate& substrate, int resolution);

/// Same outer box as `rasterize` but without the via fence.
DiscretizedCavity rasterize_open_box(const CavityGeometry& geometry, int resolution);

/// Solid-wall rectangle width × length with `intervals` grid intervals along
/// each side; boundary nodes lie on the walls.
DiscretizedCavity rasterize_rectangle(double width, double length, int intervals);

/// Smallest eigenpair by inverse iteration from an all-ones start vector.
EigenResult solve_dominant_mode(const DiscretizedCavity& cavity, const Substrate& substrate,
                                const SolverOptions& options = {});

/// Analytic TE101 of a solid-wall rectangle, Hz.
double analytic_rectangle_frequency(double width, double length, const Substrate& substrate);

/// Plain-text matrix of |Ey|: ny rows of nx space-separated values.
std::string export_field(const EigenResult& result);

struct ConvergencePoint {
    int intervals = 0;
    double f_oracle = 0.0;
    double relative_error = 0.0;
};

/// Solid-wall rectangle runs at each interval count, compared to the analytic value.
std::vector<ConvergencePoint> convergence_study(double width, double length, const Substrate& substrate,
                                                const std::vector<int>& intervals,
                                                const SolverOptions& options = {});

/// Least-squares slope of log(error) against log(grid spacing).
double observed_order(const std::vector<ConvergencePoint>& points);

/// CSV with header `resolution,f_oracle_GHz,error_vs_analytic`.
std::string convergence_to_csv(const std::vector<ConvergencePoint>& points);

}  // namespace siwkit
