#pragma once

/**
 * @file solver.hpp
 * @brief Pieces shared by the two-step implicit schemes: solver settings,
 *        the (u^{j-1}, u^j) state window, bootstrap of the second level,
 *        three-point stencils, the fixed-point sweep, and the trajectory
 *        driver that records per-step diagnostics.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlsw/cyclic_tridiagonal.hpp"
#include "nlsw/diagnostics.hpp"
#include "nlsw/error.hpp"
#include "nlsw/grid.hpp"
#include "nlsw/model.hpp"
#include "nlsw/problems.hpp"

namespace nlsw {

enum class BootstrapMode { taylor2, exact };

inline std::string to_string(BootstrapMode m) { return m == BootstrapMode::exact ? "exact" : "taylor2"; }

inline BootstrapMode bootstrap_from_string(std::string_view s) {
    if (s == "taylor2") return BootstrapMode::taylor2;
    if (s == "exact") return BootstrapMode::exact;
    throw ConfigError("bootstrap_mode must be 'taylor2' or 'exact', got '" + std::string(s) + "'");
}

struct SolverConfig {
    double fp_tol = 1e-13;
    int fp_max_iter = 100;
    BootstrapMode bootstrap = BootstrapMode::taylor2;
};

inline void validate(const SolverConfig& c) {
    if (!(c.fp_tol > 0.0) || !std::isfinite(c.fp_tol)) throw ConfigError("fp_tol must be positive");
    if (c.fp_max_iter < 1) throw ConfigError("fp_max_iter must be at least 1");
}

struct StateWindow {
    MeshFunction u_prev;  ///< level j-1
    MeshFunction u_cur;   ///< level j
    double t_cur = 0.0;
};

struct StepResult {
    MeshFunction u_next;
    int fp_iters = 0;
};

/// Levels u^0 and u^1.  taylor2: u^1 = u^0 + tau f1 + tau^2/2 u_tt(., 0) with
/// u_tt taken from the PDE and spatial derivatives by periodic central
/// differences.  exact: u^1 sampled from the exact solution at t = tau.
inline std::pair<MeshFunction, MeshFunction> bootstrap(const SpatialFunction& f0, const SpatialFunction& f1,
                                                       const PdeParams& p, const GridSpec& grid,
                                                       BootstrapMode mode,
                                                       const SpaceTimeFunction& exact = {}) {
    MeshFunction u0 = MeshFunction::sample(grid, f0);
    if (mode == BootstrapMode::exact) {
        if (!exact) throw ConfigError("bootstrap mode 'exact' needs an exact solution");
        return {std::move(u0), MeshFunction::sample(grid, [&](double x) { return exact(x, grid.tau); })};
    }
    const MeshFunction v0 = MeshFunction::sample(grid, f1);
    const MeshFunction uxx = apply_difference(Difference::second, u0, grid);
    const MeshFunction ux = apply_difference(Difference::central, u0, grid);
    const MeshFunction vx = apply_difference(Difference::central, v0, grid);
    const Complex i(0.0, 1.0);
    const double tau = grid.tau;
    std::vector<Complex> u1(grid.K);
    for (std::size_t k = 0; k < grid.K; ++k) {
        const Complex u = u0[k];
        const Complex utt = uxx[k] - p.gamma * vx[k] + i * p.alpha * v0[k] + i * p.theta * ux[k] -
                            p.lambda * u - p.beta * std::norm(u) * u;
        u1[k] = u + tau * v0[k] + 0.5 * tau * tau * utt;
    }
    return {std::move(u0), MeshFunction(std::move(u1))};
}

/// Coefficients of u_{k-1}, u_k, u_{k+1} in a constant-coefficient row.
struct Stencil3 {
    Complex lower{}, diag{}, upper{};
};

/// Linear part of a two-step scheme: one stencil per level j+1, j, j-1.
struct LevelStencils {
    Stencil3 next, cur, prev;
};

inline void add_stencil(std::vector<Complex>& out, const Stencil3& s, const MeshFunction& u) {
    const std::size_t n = u.size();
    for (std::size_t k = 0; k < n; ++k) {
        out[k] += s.lower * u[(k + n - 1) % n] + s.diag * u[k] + s.upper * u[(k + 1) % n];
    }
}

/// Solves  S_next u^{j+1} + S_cur u^j + S_prev u^{j-1} + N(u^{j+1}) = 0  by
/// Picard sweeps around the factored constant matrix of S_next.  `nonlinear`
/// writes N(iterate) into its output; it is not called when `linear_only`.
template <class Nonlinear>
StepResult fixed_point_step(const StateWindow& w, const LevelStencils& st, const CyclicTridiagonalSolver& solver,
                            const SolverConfig& cfg, bool linear_only, Nonlinear&& nonlinear) {
    const std::size_t n = w.u_cur.size();
    if (w.u_prev.size() != n || solver.size() != n) throw UsageError("state window does not match the system");

    std::vector<Complex> known(n);
    add_stencil(known, st.cur, w.u_cur);
    add_stencil(known, st.prev, w.u_prev);

    std::vector<Complex> iterate(n), rhs(n), nl(n);
    for (std::size_t k = 0; k < n; ++k) iterate[k] = 2.0 * w.u_cur[k] - w.u_prev[k];

    double last_update = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= cfg.fp_max_iter; ++it) {
        if (!linear_only) {
            std::fill(nl.begin(), nl.end(), Complex{});
            nonlinear(iterate, nl);
        }
        for (std::size_t k = 0; k < n; ++k) rhs[k] = -(known[k] + nl[k]);
        std::vector<Complex> next = solver.solve(rhs);

        double update = 0.0, size = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (!std::isfinite(next[k].real()) || !std::isfinite(next[k].imag())) {
                throw DivergenceError("fixed-point iteration produced a non-finite value", last_update);
            }
            update = std::max(update, std::abs(next[k] - iterate[k]));
            size = std::max(size, std::abs(next[k]));
        }
        iterate = std::move(next);
        last_update = update;
        if (linear_only || update <= cfg.fp_tol * std::max(1.0, size)) {
            return {MeshFunction(std::move(iterate)), it};
        }
    }
    throw StepFailure("fixed-point iteration did not converge in " + std::to_string(cfg.fp_max_iter) +
                          " sweeps (last update " + std::to_string(last_update) + ")",
                      last_update);
}

struct Snapshot {
    long level = 0;
    double t = 0.0;
    MeshFunction u;
};

struct Trajectory {
    std::string scheme;
    BootstrapMode bootstrap = BootstrapMode::taylor2;
    std::vector<Snapshot> snapshots;  ///< levels 0 and 1, then every `stride` steps
    std::vector<DiagnosticsRow> rows;  ///< one per step, J - 1 in total
    MeshFunction u_prev;               ///< level J - 1
    MeshFunction u_final;              ///< level J
    double energy_initial = 0.0;       ///< E^{1/2}
    double mass_initial = 0.0;         ///< Q^{1/2}
    std::optional<double> energy_wang_initial;
    std::optional<double> energy_wang_single_initial;
    long total_fp_iters = 0;
};

inline void require_matching_domain(const ProblemSpec& problem, const GridSpec& grid) {
    if (grid.x_l != problem.x_l || grid.x_r != problem.x_r) {
        throw ConfigError("grid domain does not match problem '" + problem.name + "'");
    }
}

inline GridSpec problem_grid(const ProblemSpec& problem, std::size_t K, std::size_t J,
                             std::optional<double> T = std::nullopt) {
    return build_grid(problem.x_l, problem.x_r, K, T.value_or(problem.default_T), J);
}

/// Bootstraps, then advances J - 1 steps with `step(window) -> StepResult`.
/// `annotate(row, u_prev, u_cur, u_next)` adds scheme-specific columns.
template <class Step, class Annotate>
Trajectory run_two_step(std::string scheme, const ProblemSpec& problem, const GridSpec& grid,
                        const SolverConfig& cfg, std::size_t snapshot_stride, Step&& step, Annotate&& annotate) {
    validate(problem.params);
    validate(cfg);
    require_matching_domain(problem, grid);

    Trajectory tr;
    tr.scheme = std::move(scheme);
    tr.bootstrap = cfg.bootstrap;
    auto [u0, u1] = bootstrap(problem.f0, problem.f1, problem.params, grid, cfg.bootstrap, problem.exact);
    tr.snapshots.push_back({0, 0.0, u0});
    tr.snapshots.push_back({1, grid.time(1), u1});
    tr.energy_initial = mi_energy(u0, u1, problem.params, grid);
    tr.mass_initial = mi_mass(u0, u1, problem.params, grid);

    StateWindow w{std::move(u0), std::move(u1), grid.time(1)};
    tr.rows.reserve(grid.J - 1);
    for (std::size_t j = 1; j < grid.J; ++j) {
        StepResult r;
        try {
            r = step(w);
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.what(), e.last_update(), static_cast<long>(j));
        } catch (const StepFailure& e) {
            throw StepFailure(e.what(), e.last_update(), static_cast<long>(j));
        }
        const double t_next = grid.time(j + 1);

        DiagnosticsRow row;
        row.step = static_cast<long>(j + 1);
        row.t = t_next;
        row.fp_iters = r.fp_iters;
        row.energy_mi = mi_energy(w.u_cur, r.u_next, problem.params, grid);
        row.mass_mi = mi_mass(w.u_cur, r.u_next, problem.params, grid);
        if (problem.has_exact()) {
            const auto exact = MeshFunction::sample(grid, [&](double x) { return problem.exact(x, t_next); });
            const auto m = error_metrics(r.u_next, exact);
            row.err_max = m.err_max;
            row.e_infty_sq = m.e_infty_sq;
            row.mod_err = m.mod_err;
            row.err_re = m.err_re;
        }
        annotate(row, w.u_prev, w.u_cur, r.u_next);
        tr.rows.push_back(row);
        tr.total_fp_iters += r.fp_iters;

        if (snapshot_stride > 0 && j % snapshot_stride == 0) {
            tr.snapshots.push_back({static_cast<long>(j + 1), t_next, r.u_next});
        }
        w.u_prev = std::move(w.u_cur);
        w.u_cur = std::move(r.u_next);
        w.t_cur = t_next;
    }
    tr.u_prev = std::move(w.u_prev);
    tr.u_final = std::move(w.u_cur);
    return tr;
}

}  // namespace nlsw
