#pragma once

/**
 * @file ep_scheme.hpp
 * @brief The energy-preserving three-level comparison scheme, written for the full
 *        coefficient set of the model equation:
 *
 *   dtt u - 1/2 dxx (u^{j+1} + u^{j-1}) - i alpha (u^{j+1} - u^{j-1})/(2 tau)
 *   - i theta/2 d2x (u^{j+1} + u^{j-1}) + gamma d2t d2x u^j + lambda/2 (u^{j+1} + u^{j-1})
 *   + beta/4 (|u^{j+1}|^2 + |u^{j-1}|^2)(u^{j+1} + u^{j-1}) = 0
 *
 * With gamma = theta = lambda = 0 this is the original comparison scheme.
 */

#include <cmath>
#include <vector>

#include "nlsw/cyclic_tridiagonal.hpp"
#include "nlsw/grid.hpp"
#include "nlsw/model.hpp"
#include "nlsw/problems.hpp"
#include "nlsw/solver.hpp"

namespace nlsw {

inline LevelStencils wang_stencils(const PdeParams& p, const GridSpec& grid) {
    const double tau = grid.tau, h = grid.h;
    const Complex i(0.0, 1.0);
    const std::array<double, 3> second{1.0, -2.0, 1.0};
    const std::array<double, 3> centred{1.0, 0.0, -1.0};
    const std::array<double, 3> outer{1.0, 0.0, 1.0};

    std::array<Stencil3, 3> s{};
    for (int n = 0; n < 3; ++n) {
        const Complex xx = -outer[n] / (2.0 * h * h);
        const Complex tx = -i * p.theta * outer[n] / (4.0 * h);
        const Complex gx = p.gamma * centred[n] / (4.0 * tau * h);
        s[n].diag = second[n] / (tau * tau) - 2.0 * xx - i * p.alpha * centred[n] / (2.0 * tau) +
                    0.5 * p.lambda * outer[n];
        s[n].upper = xx + tx + gx;
        s[n].lower = xx - tx - gx;
    }
    return {s[0], s[1], s[2]};
}

/// Level-(j+1) matrix: diagonal 1/tau^2 + 1/h^2 - i alpha/(2 tau) + lambda/2.
inline CyclicTridiagonalSystem assemble_wang(const PdeParams& p, const GridSpec& grid) {
    const Stencil3 s = wang_stencils(p, grid).next;
    return CyclicTridiagonalSystem::constant(grid.K, s.lower, s.diag, s.upper);
}

class WangStepper {
public:
    WangStepper(const PdeParams& p, const GridSpec& grid)
        : params_(p), grid_(grid), stencils_(wang_stencils(p, grid)), solver_(assemble_wang(p, grid)) {
        validate(p);
    }

    StepResult step(const StateWindow& w, const SolverConfig& cfg) const {
        require_on_grid(w.u_prev, grid_);
        require_on_grid(w.u_cur, grid_);
        const double beta = params_.beta;
        const auto nonlinear = [&](const std::vector<Complex>& next, std::vector<Complex>& out) {
            for (std::size_t k = 0; k < next.size(); ++k) {
                out[k] += 0.25 * beta * (std::norm(next[k]) + std::norm(w.u_prev[k])) * (next[k] + w.u_prev[k]);
            }
        };
        return fixed_point_step(w, stencils_, solver_, cfg, beta == 0.0, nonlinear);
    }

private:
    PdeParams params_;
    GridSpec grid_;
    LevelStencils stencils_;
    CyclicTridiagonalSolver solver_;
};

inline StepResult step_wang(const StateWindow& w, const PdeParams& p, const GridSpec& grid,
                            const SolverConfig& cfg) {
    return WangStepper(p, grid).step(w, cfg);
}

struct WangEnergy {
    double derived = 0.0;  ///< two-level quartic, conserved exactly
    double single_level = 0.0;  ///< single-level quartic (beta/2) h sum |u^j|^4
};

/// ||(u^{j+1} - u^j)/tau||^2 + 1/2 (||dx u^{j+1}||^2 + ||dx u^j||^2)
/// + 1/2 (Theta(u^{j+1}) + Theta(u^j)) + lambda/2 (||u^{j+1}||^2 + ||u^j||^2) + quartic,
/// Theta(u) = Re(-i theta <d2x u, u>).
inline WangEnergy energy_wang_pair(const MeshFunction& u_cur, const MeshFunction& u_next, const PdeParams& p,
                                   const GridSpec& grid) {
    require_on_grid(u_cur, grid);
    require_on_grid(u_next, grid);
    const std::size_t n = grid.K;
    const double h = grid.h, tau = grid.tau;
    const Complex i(0.0, 1.0);
    const auto theta_term = [&](const MeshFunction& u) {
        Complex s{};
        for (std::size_t k = 0; k < n; ++k) {
            s += (u[(k + 1) % n] - u[(k + n - 1) % n]) / (2.0 * h) * std::conj(u[k]);
        }
        return (-i * p.theta * h * s).real();
    };
    double kinetic = 0.0, grad = 0.0, mass = 0.0, quart_next = 0.0, quart_cur = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t km = (k + n - 1) % n;
        kinetic += std::norm((u_next[k] - u_cur[k]) / tau);
        grad += std::norm((u_next[k] - u_next[km]) / h) + std::norm((u_cur[k] - u_cur[km]) / h);
        const double mn = std::norm(u_next[k]), mc = std::norm(u_cur[k]);
        mass += mn + mc;
        quart_next += mn * mn;
        quart_cur += mc * mc;
    }
    const double common = h * kinetic + 0.5 * h * grad + 0.5 * (theta_term(u_next) + theta_term(u_cur)) +
                          0.5 * p.lambda * h * mass;
    return {common + 0.25 * p.beta * h * (quart_next + quart_cur), common + 0.5 * p.beta * h * quart_cur};
}

inline double energy_wang(const MeshFunction& u_cur, const MeshFunction& u_next, const PdeParams& p,
                          const GridSpec& grid) {
    return energy_wang_pair(u_cur, u_next, p, grid).derived;
}

/// Rows carry the MI invariants evaluated on the Wang levels plus both Wang energies.
inline Trajectory run_wang(const ProblemSpec& problem, const GridSpec& grid, const SolverConfig& cfg,
                           std::size_t snapshot_stride = 100) {
    const WangStepper stepper(problem.params, grid);
    Trajectory tr = run_two_step(
        "wang", problem, grid, cfg, snapshot_stride, [&](const StateWindow& w) { return stepper.step(w, cfg); },
        [&](DiagnosticsRow& row, const MeshFunction&, const MeshFunction& u0, const MeshFunction& up) {
            const auto e = energy_wang_pair(u0, up, problem.params, grid);
            row.energy_wang = e.derived;
            row.energy_wang_single = e.single_level;
        });
    const auto e0 = energy_wang_pair(tr.snapshots[0].u, tr.snapshots[1].u, problem.params, grid);
    tr.energy_wang_initial = e0.derived;
    tr.energy_wang_single_initial = e0.single_level;
    return tr;
}

}  // namespace nlsw
