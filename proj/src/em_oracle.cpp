#include "siwkit/em_oracle.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <limits>
#include <numeric>

#include "siwkit/error.hpp"

namespace siwkit {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

constexpr int min_nodes = 16;

DiscretizedCavity make_box(double extent_x, double extent_y, double spacing) {
    DiscretizedCavity cav;
    cav.dx = spacing;
    cav.dy = spacing;
    // Node count rounded up so the box covers the requested extent; the
    // grid is centered on the cavity so both mirror axes pass through it.
    cav.nx = static_cast<int>(std::ceil(extent_x / spacing - 1e-9)) + 1;
    cav.ny = static_cast<int>(std::ceil(extent_y / spacing - 1e-9)) + 1;
    if (cav.nx < min_nodes || cav.ny < min_nodes) {
        throw Error(ErrorKind::ResolutionTooCoarse,
                    fmt::format("grid {}x{} is below the {}-node minimum", cav.nx, cav.ny, min_nodes));
    }
    cav.mask.assign(static_cast<std::size_t>(cav.nx) * cav.ny, 0);
    for (int i = 0; i < cav.nx; ++i) {
        cav.mask[i] = 1;
        cav.mask[static_cast<std::size_t>(cav.ny - 1) * cav.nx + i] = 1;
    }
    for (int j = 0; j < cav.ny; ++j) {
        cav.mask[static_cast<std::size_t>(j) * cav.nx] = 1;
        cav.mask[static_cast<std::size_t>(j) * cav.nx + cav.nx - 1] = 1;
    }
    return cav;
}

// Node coordinate relative to the grid center.
double coord(int index, int count, double spacing) { return (index - 0.5 * (count - 1)) * spacing; }

double grid_spacing(const CavityGeometry& geometry, int resolution) {
    if (resolution < 4) {
        throw Error(ErrorKind::ResolutionTooCoarse,
                    fmt::format("resolution {} is below 4 nodes per via diameter", resolution));
    }
    // Without vias the pitch sets the scale.
    return geometry.d > 0.0 ? geometry.d / resolution : geometry.p / resolution;
}

std::vector<std::pair<double, double>> via_centers(const CavityGeometry& g) {
    std::vector<std::pair<double, double>> centers;
    const int nw = std::max(1, static_cast<int>(std::lround(g.w / g.p)));
    const int nl = std::max(1, static_cast<int>(std::lround(g.l / g.p)));
    const double sw = g.w / nw;
    const double sl = g.l / nl;
    for (int k = 0; k <= nw; ++k) {
        const double x = (k - 0.5 * nw) * sw;
        centers.emplace_back(x, -0.5 * g.l);
        centers.emplace_back(x, 0.5 * g.l);
    }
    for (int k = 1; k < nl; ++k) {
        const double y = (k - 0.5 * nl) * sl;
        centers.emplace_back(-0.5 * g.w, y);
        centers.emplace_back(0.5 * g.w, y);
    }
    return centers;
}

}  // namespace

std::size_t DiscretizedCavity::unknowns() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{0}));
}

DiscretizedCavity rasterize_open_box(const CavityGeometry& geometry, int resolution) {
    geometry.validate();
    const double h = grid_spacing(geometry, resolution);
    auto cav = make_box(geometry.w + 2.0 * geometry.p, geometry.l + 2.0 * geometry.p, h);
    cav.geometry = geometry;
    cav.margin = geometry.p;
    return cav;
}

DiscretizedCavity rasterize(const CavityGeometry& geometry, const Substrate& substrate, int resolution) {
    substrate.validate();
    auto cav = rasterize_open_box(geometry, resolution);
    if (geometry.d <= 0.0) return cav;

    const double r2 = 0.25 * geometry.d * geometry.d;
    const double h = cav.dx;
    for (const auto& [vx, vy] : via_centers(geometry)) {
        const int i0 = std::max(0, static_cast<int>(std::floor((vx - 0.5 * geometry.d) / h + 0.5 * (cav.nx - 1))) - 1);
        const int i1 = std::min(cav.nx - 1, static_cast<int>(std::ceil((vx + 0.5 * geometry.d) / h + 0.5 * (cav.nx - 1))) + 1);
        const int j0 = std::max(0, static_cast<int>(std::floor((vy - 0.5 * geometry.d) / h + 0.5 * (cav.ny - 1))) - 1);
        const int j1 = std::min(cav.ny - 1, static_cast<int>(std::ceil((vy + 0.5 * geometry.d) / h + 0.5 * (cav.ny - 1))) + 1);
        int covered = 0;
        for (int j = j0; j <= j1; ++j) {
            const double dy = coord(j, cav.ny, h) - vy;
            for (int i = i0; i <= i1; ++i) {
                const double dx = coord(i, cav.nx, h) - vx;
                if (dx * dx + dy * dy <= r2) {
                    cav.mask[static_cast<std::size_t>(j) * cav.nx + i] = 1;
                    ++covered;
                }
            }
        }
        if (covered < 4) {
            throw Error(ErrorKind::ResolutionTooCoarse,
                        fmt::format("via at ({:.1f}, {:.1f}) um covers only {} grid nodes", units::to_um(vx),
                                    units::to_um(vy), covered));
        }
        ++cav.via_count;
    }
    return cav;
}

DiscretizedCavity rasterize_rectangle(double width, double length, int intervals) {
    if (!(width > 0.0 && length > 0.0)) throw Error(ErrorKind::InvalidArgument, "rectangle sides must be > 0");
    if (intervals + 1 < min_nodes) {
        throw Error(ErrorKind::ResolutionTooCoarse,
                    fmt::format("{} intervals gives fewer than {} nodes per side", intervals, min_nodes));
    }
    auto cav = make_box(1.0, 1.0, 1.0 / intervals);
    cav.dx = width / intervals;
    cav.dy = length / intervals;
    cav.geometry.w = width;
    cav.geometry.l = length;
    cav.geometry.p = std::max(width, length);  // no fence; keeps the geometry invariant
    return cav;
}

double analytic_rectangle_frequency(double width, double length, const Substrate& substrate) {
    const double kx = constants::pi / width;
    const double ky = constants::pi / length;
    return constants::c0 * std::sqrt(kx * kx + ky * ky) /
           (2.0 * constants::pi * std::sqrt(substrate.mu_r * substrate.eps_r));
}

EigenResult solve_dominant_mode(const DiscretizedCavity& cavity, const Substrate& substrate,
                                const SolverOptions& options) {
    substrate.validate();
    if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "solver tolerance must be > 0");
    const int nx = cavity.nx;
    const int ny = cavity.ny;

    std::vector<int> index(cavity.mask.size(), -1);
    int n = 0;
    for (std::size_t k = 0; k < cavity.mask.size(); ++k) {
        if (!cavity.mask[k]) index[k] = n++;
    }
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "cavity has no interior nodes");

    // Negative 5-point Laplacian; masked neighbours are Dirichlet zeros.
    const double cx = 1.0 / (cavity.dx * cavity.dx);
    const double cy = 1.0 / (cavity.dy * cavity.dy);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * 5);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = index[static_cast<std::size_t>(j) * nx + i];
            if (row < 0) continue;
            triplets.emplace_back(row, row, 2.0 * cx + 2.0 * cy);
            auto couple = [&](int ii, int jj, double c) {
                const int col = index[static_cast<std::size_t>(jj) * nx + ii];
                if (col >= 0) triplets.emplace_back(row, col, -c);
            };
            couple(i - 1, j, cx);
            couple(i + 1, j, cx);
            couple(i, j - 1, cy);
            couple(i, j + 1, cy);
        }
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());

    std::function<Vector(const Vector&, const Vector&)> solve;
    Eigen::SimplicialLLT<SparseMatrix> llt;
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
    if (options.inner == InnerSolver::Cholesky) {
        llt.compute(a);
        if (llt.info() != Eigen::Success) throw Error(ErrorKind::NoConvergence, "sparse Cholesky factorization failed");
        solve = [&](const Vector& rhs, const Vector&) -> Vector { return llt.solve(rhs); };
    } else {
        cg.setTolerance(std::min(1e-3 * options.tol, 1e-12));
        cg.setMaxIterations(10 * n);
        cg.compute(a);
        if (cg.info() != Eigen::Success) {
            throw Error(ErrorKind::NoConvergence, "incomplete Cholesky preconditioner failed");
        }
        solve = [&](const Vector& rhs, const Vector& guess) -> Vector { return cg.solveWithGuess(rhs, guess); };
    }

    Vector v = Vector::Ones(n).normalized();
    double lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < options.max_iterations) {
        ++it;
        v = solve(v, v / std::max(lambda, 1.0)).normalized();
        const Vector av = a * v;
        lambda = v.dot(av);
        residual = (av - lambda * v).norm() / lambda;
        if (residual <= options.tol) break;
    }
    if (residual > options.tol) {
        throw Error(ErrorKind::NoConvergence,
                    fmt::format("inverse iteration stopped after {} steps at residual {:.3e}", it, residual));
    }

    EigenResult result;
    result.k_squared = lambda;
    result.f_oracle = constants::c0 * std::sqrt(lambda) /
                      (2.0 * constants::pi * std::sqrt(substrate.mu_r * substrate.eps_r));
    result.nx = nx;
    result.ny = ny;
    result.iterations = it;
    result.residual = residual;
    result.field.assign(cavity.mask.size(), 0.0);

    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    const double scale = 1.0 / v[peak];
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] >= 0) result.field[k] = v[index[k]] * scale;
    }
    return result;
}

std::string export_field(const EigenResult& result) {
    std::string out;
    out.reserve(result.field.size() * 12);
    for (int j = 0; j < result.ny; ++j) {
        for (int i = 0; i < result.nx; ++i) {
            if (i) out += ' ';
            out += fmt::format("{:.8g}", std::abs(result.field[static_cast<std::size_t>(j) * result.nx + i]));
        }
        out += '\n';
    }
    return out;
}

std::vector<ConvergencePoint> convergence_study(double width, double length, const Substrate& substrate,
                                                const std::vector<int>& intervals, const SolverOptions& options) {
    const double exact = analytic_rectangle_frequency(width, length, substrate);
    std::vector<ConvergencePoint> points;
    for (int n : intervals) {
        const auto res = solve_dominant_mode(rasterize_rectangle(width, length, n), substrate, options);
        points.push_back({n, res.f_oracle, std::abs(res.f_oracle - exact) / exact});
    }
    return points;
}

double observed_order(const std::vector<ConvergencePoint>& points) {
    if (points.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two refinements");
    // Spacing is proportional to 1/intervals.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double x = std::log(1.0 / p.intervals);
        const double y = std::log(p.relative_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string convergence_to_csv(const std::vector<ConvergencePoint>& points) {
    std::string out = "resolution,f_oracle_GHz,error_vs_analytic\n";
    for (const auto& p : points) {
        out += fmt::format("{},{:.9f},{:.6e}\n", p.intervals, units::to_ghz(p.f_oracle), p.relative_error);
    }
    return out;
}

}  // namespace siwkit
