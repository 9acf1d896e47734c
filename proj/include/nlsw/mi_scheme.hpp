#pragma once

/**
 * @file mi_scheme.hpp
 * @brief The multisymplectic midpoint (Preissman box) integrator in its
 *        reduced single-field form, advanced as a two-step implicit scheme.
 *
 * Every linear term is a constant three-point stencil on each of the levels
 * j+1, j, j-1, so the level-(j+1) matrix is a constant cyclic tridiagonal
 * system factored once per run.  The cubic term couples the four cell
 * averages u_{k+-1/2}^{j+-1/2} and is handled by Picard sweeps.
 */

#include <cmath>
#include <string>
#include <vector>

#include "nlsw/cyclic_tridiagonal.hpp"
#include "nlsw/diagnostics.hpp"
#include "nlsw/grid.hpp"
#include "nlsw/model.hpp"
#include "nlsw/problems.hpp"
#include "nlsw/solver.hpp"

namespace nlsw {

/// Level-by-level stencils of the linear terms.  Time weights: second
/// difference (1, -2, 1), centred first difference (1, 0, -1), level average
/// (1, 2, 1) for levels (j+1, j, j-1).
inline LevelStencils mi_stencils(const PdeParams& p, const GridSpec& grid) {
    const double tau = grid.tau, h = grid.h;
    const Complex i(0.0, 1.0);
    const std::array<double, 3> second{1.0, -2.0, 1.0};
    const std::array<double, 3> centred{1.0, 0.0, -1.0};
    const std::array<double, 3> average{1.0, 2.0, 1.0};

    std::array<Stencil3, 3> s{};
    for (int n = 0; n < 3; ++n) {
        // 1/2 (dtt u_{k+1/2} + dtt u_{k-1/2}): spatial weights (1/2, 1, 1/2)
        const Complex tt = second[n] / (2.0 * tau * tau);
        // -1/2 (dxx u^{j+1/2} + dxx u^{j-1/2}) = -1/4 dxx (u^{j+1} + 2u^j + u^{j-1})
        const Complex xx = -average[n] / (4.0 * h * h);
        // -i alpha/2 (d2t u_{k+1/2} + d2t u_{k-1/2})
        const Complex at = -i * p.alpha * centred[n] / (4.0 * tau);
        // -i theta/2 (d2x u^{j+1/2} + d2x u^{j-1/2})
        const Complex tx = -i * p.theta * average[n] / (8.0 * h);
        // gamma d2t d2x u
        const Complex gx = p.gamma * centred[n] / (4.0 * tau * h);
        // lambda/4 times the four cell averages
        const Complex lm = p.lambda * average[n] / 8.0;

        s[n].diag = tt + (-2.0) * xx + at + lm;
        s[n].upper = 0.5 * tt + xx + 0.5 * at + tx + gx + 0.5 * lm;
        s[n].lower = 0.5 * tt + xx + 0.5 * at - tx - gx + 0.5 * lm;
    }
    return {s[0], s[1], s[2]};
}

/// Constant level-(j+1) system: diagonal 1/(2tau^2) + 1/(2h^2) - i alpha/(4tau) + lambda/8.
inline CyclicTridiagonalSystem assemble_linear(const PdeParams& p, const GridSpec& grid) {
    const Stencil3 s = mi_stencils(p, grid).next;
    return CyclicTridiagonalSystem::constant(grid.K, s.lower, s.diag, s.upper);
}

/// Cubic term beta/4 [|A_k|^2 A_k + |B_k|^2 B_k + |A_{k-1}|^2 A_{k-1} + |B_{k-1}|^2 B_{k-1}]
/// where A, B are the cell averages of the (j, j+1) and (j-1, j) slabs.
class MiNonlinearity {
public:
    MiNonlinearity(const StateWindow& w, double beta) : beta_(beta), n_(w.u_cur.size()) {
        lower_slab_.resize(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t kp = (k + 1) % n_;
            lower_slab_[k] = cubic(0.25 * (w.u_prev[k] + w.u_prev[kp] + w.u_cur[k] + w.u_cur[kp]));
        }
        cur_ = &w.u_cur;
    }

    void operator()(const std::vector<Complex>& next, std::vector<Complex>& out) const {
        std::vector<Complex> cell(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t kp = (k + 1) % n_;
            cell[k] = cubic(0.25 * ((*cur_)[k] + (*cur_)[kp] + next[k] + next[kp])) + lower_slab_[k];
        }
        for (std::size_t k = 0; k < n_; ++k) {
            out[k] += 0.25 * beta_ * (cell[k] + cell[(k + n_ - 1) % n_]);
        }
    }

private:
    static Complex cubic(Complex z) { return std::norm(z) * z; }

    double beta_;
    std::size_t n_;
    std::vector<Complex> lower_slab_;
    const MeshFunction* cur_ = nullptr;
};

/// Holds the factored level-(j+1) matrix for one parameter set and grid.
class MiStepper {
public:
    MiStepper(const PdeParams& p, const GridSpec& grid)
        : params_(p), grid_(grid), stencils_(mi_stencils(p, grid)), solver_(assemble_linear(p, grid)) {
        validate(p);
    }

    StepResult step(const StateWindow& w, const SolverConfig& cfg) const {
        require_on_grid(w.u_prev, grid_);
        require_on_grid(w.u_cur, grid_);
        const MiNonlinearity nonlinear(w, params_.beta);
        return fixed_point_step(w, stencils_, solver_, cfg, params_.beta == 0.0, nonlinear);
    }

    const CyclicTridiagonalSolver& solver() const noexcept { return solver_; }

private:
    PdeParams params_;
    GridSpec grid_;
    LevelStencils stencils_;
    CyclicTridiagonalSolver solver_;
};

/// One step of the scheme from the window (u^{j-1}, u^j).  `sys` must be
/// assemble_linear(params, grid).
inline StepResult step_mi(const StateWindow& w, const CyclicTridiagonalSystem& sys, const PdeParams& p,
                          const GridSpec& grid, const SolverConfig& cfg) {
    validate(p);
    require_on_grid(w.u_prev, grid);
    require_on_grid(w.u_cur, grid);
    const CyclicTridiagonalSolver solver(sys);
    const MiNonlinearity nonlinear(w, p.beta);
    return fixed_point_step(w, mi_stencils(p, grid), solver, cfg, p.beta == 0.0, nonlinear);
}

/// Integrates `problem` over the grid; rows carry E, Q, their identity gaps
/// and, when an exact solution exists, the error metrics.
inline Trajectory run_mi(const ProblemSpec& problem, const GridSpec& grid, const SolverConfig& cfg,
                         std::size_t snapshot_stride = 100) {
    const MiStepper stepper(problem.params, grid);
    const IdentityConstants constants = identity_validation().validated;
    return run_two_step(
        "mi", problem, grid, cfg, snapshot_stride, [&](const StateWindow& w) { return stepper.step(w, cfg); },
        [&](DiagnosticsRow& row, const MeshFunction& um, const MeshFunction& u0, const MeshFunction& up) {
            const auto gaps = theorem_identity_gaps(um, u0, up, problem.params, grid, constants);
            row.energy_gap = gaps.energy_gap;
            row.mass_gap = gaps.mass_gap;
        });
}

}  // namespace nlsw
