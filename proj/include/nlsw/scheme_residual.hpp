#pragma once

/**
 * @file scheme_residual.hpp
 * @brief Direct term-by-term evaluation of the reduced multisymplectic box
 *        scheme at every node k for three consecutive levels:
 *
 *   1/2 (dtt u_{k+1/2} + dtt u_{k-1/2}) - 1/2 (dxx u_k^{j+1/2} + dxx u_k^{j-1/2})
 *   - i alpha/2 (d2t u_{k+1/2} + d2t u_{k-1/2}) - i theta/2 (d2x u_k^{j+1/2} + d2x u_k^{j-1/2})
 *   + gamma d2t d2x u_k + lambda/4 [four cell averages] + beta/4 [|.|^2 . of the four cell averages]
 *
 * Nothing here shares code with the assembled stencils of mi_scheme.hpp; it
 * is the reference the stepper is checked against.
 */

#include <vector>

#include "nlsw/grid.hpp"
#include "nlsw/model.hpp"

namespace nlsw {

inline std::vector<Complex> mi_scheme_residual(const MeshFunction& u_prev, const MeshFunction& u_cur,
                                               const MeshFunction& u_next, const PdeParams& p,
                                               const GridSpec& grid) {
    require_on_grid(u_prev, grid);
    require_on_grid(u_cur, grid);
    require_on_grid(u_next, grid);
    const std::size_t n = grid.K;
    const double tau = grid.tau;
    const Complex i(0.0, 1.0);

    const MeshFunction a = 0.5 * (u_cur + u_next);  // u^{j+1/2}
    const MeshFunction b = 0.5 * (u_prev + u_cur);  // u^{j-1/2}
    const auto half = [&](const MeshFunction& u) { return apply_difference(Difference::half_average, u, grid); };
    const auto second = [&](const MeshFunction& u) { return apply_difference(Difference::second, u, grid); };
    const auto central = [&](const MeshFunction& u) { return apply_difference(Difference::central, u, grid); };

    const MeshFunction Hp = half(u_next), H0 = half(u_cur), Hm = half(u_prev);
    const MeshFunction A = half(a), B = half(b);
    const MeshFunction dxx_a = second(a), dxx_b = second(b);
    const MeshFunction d2x_a = central(a), d2x_b = central(b);
    const MeshFunction d2x_next = central(u_next), d2x_prev = central(u_prev);

    const auto cubic = [](Complex z) { return std::norm(z) * z; };

    std::vector<Complex> r(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t km = (k + n - 1) % n;
        const Complex dtt_r = (Hp[k] - 2.0 * H0[k] + Hm[k]) / (tau * tau);
        const Complex dtt_l = (Hp[km] - 2.0 * H0[km] + Hm[km]) / (tau * tau);
        const Complex d2t_r = (Hp[k] - Hm[k]) / (2.0 * tau);
        const Complex d2t_l = (Hp[km] - Hm[km]) / (2.0 * tau);
        const Complex d2t_d2x = (d2x_next[k] - d2x_prev[k]) / (2.0 * tau);

        r[k] = 0.5 * (dtt_r + dtt_l) - 0.5 * (dxx_a[k] + dxx_b[k]) - 0.5 * i * p.alpha * (d2t_r + d2t_l) -
               0.5 * i * p.theta * (d2x_a[k] + d2x_b[k]) + p.gamma * d2t_d2x +
               0.25 * p.lambda * (A[k] + A[km] + B[k] + B[km]) +
               0.25 * p.beta * (cubic(A[k]) + cubic(B[k]) + cubic(A[km]) + cubic(B[km]));
    }
    return r;
}

}  // namespace nlsw
