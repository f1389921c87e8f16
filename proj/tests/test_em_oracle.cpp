#include <doctest.h>

#include <cmath>
#include <sstream>

#include "siwkit/core_model.hpp"
#include "siwkit/em_oracle.hpp"
#include "siwkit/siw_design.hpp"
#include "test_support.hpp"

using namespace siwkit;
using siwkit::test::error_kind;
using siwkit::test::rel_close;

namespace {

const CavityGeometry reference_geometry = CavityGeometry::from_um(3150, 3150, 200, 250);

// Smallest eigenvalue of the 5-point Dirichlet Laplacian on an N×N-interval rectangle.
double discrete_k2(double width, double length, int intervals) {
    const double pi = std::acos(-1.0);
    const double dx = width / intervals, dy = length / intervals;
    const double sx = std::sin(pi * dx / (2 * width)), sy = std::sin(pi * dy / (2 * length));
    return 4 / (dx * dx) * sx * sx + 4 / (dy * dy) * sy * sy;
}

}  // namespace

TEST_CASE("rectangle matches the exact discrete eigenvalue") {
    const auto sub = default_substrate();
    for (int n : {16, 30, 57}) {
        const auto cav = rasterize_rectangle(2.0e-3, 3.1e-3, n);
        CHECK(cav.unknowns() == static_cast<std::size_t>((n - 1) * (n - 1)));
        const auto r = solve_dominant_mode(cav, sub);
        CHECK(rel_close(r.k_squared, discrete_k2(2.0e-3, 3.1e-3, n), 1e-8));
        CHECK(r.residual <= 1e-9);
    }
}

TEST_CASE("analytic limit on the effective reference square") {
    const auto sub = default_substrate();
    const double w_eff = effective_dimensions(reference_geometry).w_eff;
    const double exact = analytic_rectangle_frequency(w_eff, w_eff, sub);
    CHECK(units::to_ghz(exact) == doctest::Approx(20.6103758).epsilon(1e-8));
    const auto r = solve_dominant_mode(rasterize_rectangle(w_eff, w_eff, 150), sub);
    CHECK(std::abs(r.f_oracle - exact) / exact < 5e-3);
}

TEST_CASE("second-order convergence") {
    const auto sub = default_substrate();
    const auto pts = convergence_study(3.0e-3, 2.0e-3, sub, {20, 40, 80});
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].relative_error < pts[0].relative_error);
    CHECK(pts[2].relative_error < pts[1].relative_error);
    CHECK(pts[0].relative_error / pts[1].relative_error == doctest::Approx(4.0).epsilon(0.05));
    CHECK(observed_order(pts) == doctest::Approx(2.0).epsilon(0.15));
    const auto csv = convergence_to_csv(pts);
    CHECK(csv.rfind("resolution,f_oracle_GHz,error_vs_analytic\n20,", 0) == 0);
}

TEST_CASE("via fence construction") {
    const auto sub = default_substrate();
    const auto cav = rasterize(reference_geometry, sub, 8);
    // round(3150/250) = 13 intervals, 14 centres per side, corners shared
    CHECK(cav.via_count == 4 * 13);
    CHECK(cav.dx == doctest::Approx(25e-6));
    CHECK(cav.margin == doctest::Approx(250e-6));
    CHECK(cav.nx == cav.ny);
    CHECK(static_cast<double>(cav.nx - 1) * cav.dx >= 3650e-6 - 1e-12);

    // a corner via centre is conductor
    const double c = 0.5 * (cav.nx - 1);
    const int ic = static_cast<int>(std::lround(c - 1575e-6 / cav.dx));
    CHECK(cav.masked(ic, ic));
    CHECK_FALSE(cav.masked(cav.nx / 2, cav.ny / 2));

    CHECK(error_kind([&] { rasterize(reference_geometry, sub, 2); }) == ErrorKind::ResolutionTooCoarse);
    CHECK(error_kind([] { rasterize_rectangle(1e-3, 1e-3, 8); }) == ErrorKind::ResolutionTooCoarse);
}

TEST_CASE("d = 0 is the plain outer box") {
    const auto sub = default_substrate();
    const auto g = CavityGeometry::from_um(3150, 3150, 0, 250);
    const auto fenced = rasterize(g, sub, 8);
    const auto open = rasterize_open_box(g, 8);
    CHECK(fenced.via_count == 0);
    CHECK(fenced.mask == open.mask);
}

TEST_CASE("reference geometry: fence, symmetry and domain monotonicity") {
    const auto sub = default_substrate();
    const auto fenced_cav = rasterize(reference_geometry, sub, 8);
    const auto fenced = solve_dominant_mode(fenced_cav, sub);
    const auto open = solve_dominant_mode(rasterize_open_box(reference_geometry, 8), sub);

    CHECK(fenced.k_squared >= open.k_squared);
    const double f_model = resonant_frequency(sub, reference_geometry);
    CHECK(std::abs(fenced.f_oracle - f_model) / f_model < 0.02);
    CHECK(fenced.residual <= 1e-9);

    const int nx = fenced.nx, ny = fenced.ny;
    double max_asym = 0.0, max_masked = 0.0, peak = 0.0;
    int pi = 0, pj = 0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double v = fenced.field[j * nx + i];
            max_asym = std::max(max_asym, std::abs(v - fenced.field[j * nx + (nx - 1 - i)]));
            max_asym = std::max(max_asym, std::abs(v - fenced.field[(ny - 1 - j) * nx + i]));
            if (fenced_cav.masked(i, j)) max_masked = std::max(max_masked, std::abs(v));
            if (v > peak) {
                peak = v;
                pi = i;
                pj = j;
            }
        }
    }
    CHECK(max_asym < 1e-6);
    CHECK(max_masked == 0.0);
    CHECK(peak == doctest::Approx(1.0));
    CHECK(std::abs(pi - nx / 2) <= 1);
    CHECK(std::abs(pj - ny / 2) <= 1);
    // single lobe: no sign change inside the fence
    for (int i = nx / 2 - 50; i <= nx / 2 + 50; ++i) CHECK(fenced.field[(ny / 2) * nx + i] > 0.0);
}

TEST_CASE("swapping w and l leaves the frequency unchanged") {
    const auto sub = default_substrate();
    const auto a = solve_dominant_mode(rasterize(CavityGeometry::from_um(3150, 2500, 200, 250), sub, 6), sub);
    const auto b = solve_dominant_mode(rasterize(CavityGeometry::from_um(2500, 3150, 200, 250), sub, 6), sub);
    CHECK(a.nx == b.ny);
    CHECK(rel_close(a.f_oracle, b.f_oracle, 1e-8));
}

TEST_CASE("inner solvers agree") {
    const auto sub = default_substrate();
    const auto cav = rasterize_rectangle(2e-3, 1.5e-3, 48);
    SolverOptions cg;
    cg.inner = InnerSolver::ConjugateGradient;
    const auto a = solve_dominant_mode(cav, sub);
    const auto b = solve_dominant_mode(cav, sub, cg);
    CHECK(rel_close(a.k_squared, b.k_squared, 1e-9));
    CHECK(b.residual <= cg.tol);

    SolverOptions starved;
    starved.max_iterations = 1;
    starved.tol = 1e-14;
    CHECK(error_kind([&] { solve_dominant_mode(cav, sub, starved); }) == ErrorKind::NoConvergence);
}

TEST_CASE("field export") {
    const auto r = solve_dominant_mode(rasterize_rectangle(1e-3, 1e-3, 20), default_substrate());
    const auto text = export_field(r);
    std::istringstream in(text);
    std::string line;
    int rows = 0;
    double maxv = 0.0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        double v;
        int cols = 0;
        while (ls >> v) {
            ++cols;
            CHECK(v >= 0.0);
            maxv = std::max(maxv, v);
        }
        CHECK(cols == r.nx);
        ++rows;
    }
    CHECK(rows == r.ny);
    CHECK(maxv == doctest::Approx(1.0));
}
