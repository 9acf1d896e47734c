#pragma once

/**
 * @file model.hpp
 * @brief The wave-operator Schrodinger equation
 *
 *     u_tt - u_xx + gamma u_tx - i alpha u_t - i theta u_x + lambda u + beta |u|^2 u = 0
 *
 * with periodic boundary conditions, its first-order multisymplectic form
 * M z_t + K z_x = grad S(z) over z = (phi, psi, v, w, f, g), and the local
 * energy / momentum densities and fluxes of that form.
 */

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nlsw/error.hpp"
#include "nlsw/grid.hpp"

namespace nlsw {

struct PdeParams {
    double alpha = 0.0;   ///< coefficient of -i u_t
    double gamma = 0.0;   ///< coefficient of u_tx
    double theta = 0.0;   ///< coefficient of -i u_x
    double lambda = 0.0;  ///< linear potential
    double beta = 0.0;    ///< cubic coefficient
};

/// Rejects non-finite coefficients and |gamma| = 2, where the elimination of
/// the auxiliary z components degenerates (1 - gamma^2/4 = 0).
inline void validate(const PdeParams& p) {
    for (double c : {p.alpha, p.gamma, p.theta, p.lambda, p.beta}) {
        if (!std::isfinite(c)) throw ConfigError("pde parameters must be finite");
    }
    if (std::abs(1.0 - 0.25 * p.gamma * p.gamma) < 1e-12) {
        throw ConfigError("|gamma| = 2 makes the multisymplectic z-form degenerate (1 - gamma^2/4 = 0)");
    }
}

/// Left-hand side of the PDE at (x, t) for a smooth space-time function,
/// derivatives by fourth-order central differences with step `step`.
template <class F>
Complex continuous_residual(F&& u, const PdeParams& p, double x, double t, double step = 1e-4) {
    const double d = step;
    static constexpr std::array<double, 5> first{1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
    static constexpr std::array<double, 5> second{-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0,
                                                  -1.0 / 12.0};
    Complex ut{}, utt{}, ux{}, uxx{}, utx{};
    for (int a = 0; a < 5; ++a) {
        const double s = (a - 2) * d;
        const Complex along_t = Complex(u(x, t + s));
        const Complex along_x = Complex(u(x + s, t));
        ut += first[a] * along_t;
        utt += second[a] * along_t;
        ux += first[a] * along_x;
        uxx += second[a] * along_x;
        if (first[a] == 0.0) continue;
        for (int b = 0; b < 5; ++b) {
            if (first[b] == 0.0) continue;
            utx += first[a] * first[b] * Complex(u(x + (b - 2) * d, t + s));
        }
    }
    ut /= d;
    ux /= d;
    utt /= d * d;
    uxx /= d * d;
    utx /= d * d;
    const Complex u0 = Complex(u(x, t));
    const Complex i(0.0, 1.0);
    return utt - uxx + p.gamma * utx - i * p.alpha * ut - i * p.theta * ux + p.lambda * u0 +
           p.beta * std::norm(u0) * u0;
}

/// One point z = (phi, psi, v, w, f, g): u = phi + i psi, u_t = v + i w, u_x = f + i g.
using ZPoint = std::array<double, 6>;

inline double hamiltonian_S(const ZPoint& z, const PdeParams& p) {
    const auto [phi, psi, v, w, f, g] = z;
    const double r2 = phi * phi + psi * psi;
    return -0.5 * (p.lambda * r2 + 0.5 * p.beta * r2 * r2 + v * v + w * w - (f * f + g * g) +
                   p.gamma * (v * f + w * g));
}

inline ZPoint grad_S(const ZPoint& z, const PdeParams& p) {
    const auto [phi, psi, v, w, f, g] = z;
    const double r2 = phi * phi + psi * psi;
    return {-p.lambda * phi - p.beta * r2 * phi,
            -p.lambda * psi - p.beta * r2 * psi,
            -v - 0.5 * p.gamma * f,
            -w - 0.5 * p.gamma * g,
            f - 0.5 * p.gamma * v,
            g - 0.5 * p.gamma * w};
}

using Matrix6 = std::array<std::array<double, 6>, 6>;

struct StructureMatrices {
    Matrix6 M{};
    Matrix6 K{};
};

inline StructureMatrices structure_matrices(const PdeParams& p) {
    const double a = p.alpha, hg = 0.5 * p.gamma, th = p.theta;
    StructureMatrices s;
    s.M = {{{0, a, 1, 0, hg, 0},
            {-a, 0, 0, 1, 0, hg},
            {-1, 0, 0, 0, 0, 0},
            {0, -1, 0, 0, 0, 0},
            {-hg, 0, 0, 0, 0, 0},
            {0, -hg, 0, 0, 0, 0}}};
    s.K = {{{0, th, hg, 0, -1, 0},
            {-th, 0, 0, hg, 0, -1},
            {-hg, 0, 0, 0, 0, 0},
            {0, -hg, 0, 0, 0, 0},
            {1, 0, 0, 0, 0, 0},
            {0, 1, 0, 0, 0, 0}}};
    return s;
}

/// Energy density/flux (E, F) and momentum density/flux (I, G) at one point.
/// E_t + F_x = 0 and I_t + G_x = 0 along smooth solutions.
struct LocalDensities {
    double E = 0.0;
    double F = 0.0;
    double I = 0.0;
    double G = 0.0;
};

inline LocalDensities local_densities(const ZPoint& z, const PdeParams& p) {
    const auto [phi, psi, v, w, f, g] = z;
    const double r2 = phi * phi + psi * psi;
    const double vv = v * v + w * w;
    const double ff = f * f + g * g;
    LocalDensities d;
    d.E = 0.5 * (p.lambda * r2 + 0.5 * p.beta * r2 * r2 + vv + ff + p.theta * (phi * g - psi * f));
    // -Re(u_x conj u_t) + gamma/2 |u_t|^2 + theta/2 Im(u conj u_t)
    d.F = -(f * v + g * w) + 0.5 * p.gamma * vv - 0.5 * p.theta * (phi * w - psi * v);
    d.I = 0.5 * p.alpha * (phi * g - psi * f) - (f * v + g * w) - 0.5 * p.gamma * ff;
    d.G = -0.5 * p.lambda * r2 - 0.25 * p.beta * r2 * r2 + 0.5 * (vv + ff) -
          0.5 * p.alpha * (phi * w - psi * v);
    return d;
}

/// The six real component fields of z on the spatial nodes of one time level.
struct ZField {
    std::vector<double> phi, psi, v, w, f, g;

    std::size_t size() const noexcept { return phi.size(); }
    ZPoint at(std::size_t k) const { return {phi[k], psi[k], v[k], w[k], f[k], g[k]}; }

    static ZField from_complex(const std::vector<Complex>& u, const std::vector<Complex>& ut,
                               const std::vector<Complex>& ux) {
        if (u.size() != ut.size() || u.size() != ux.size()) {
            throw UsageError("z-field components have different lengths");
        }
        ZField z;
        const std::size_t n = u.size();
        for (auto* c : {&z.phi, &z.psi, &z.v, &z.w, &z.f, &z.g}) c->resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            z.phi[k] = u[k].real();
            z.psi[k] = u[k].imag();
            z.v[k] = ut[k].real();
            z.w[k] = ut[k].imag();
            z.f[k] = ux[k].real();
            z.g[k] = ux[k].imag();
        }
        return z;
    }
};

/// z at level j from three consecutive levels: u = u_cur, u_t by the central
/// time difference, u_x by the central space difference.
inline ZField reconstruct_z(const MeshFunction& u_prev, const MeshFunction& u_cur, const MeshFunction& u_next,
                            const GridSpec& grid) {
    require_on_grid(u_prev, grid);
    require_on_grid(u_cur, grid);
    require_on_grid(u_next, grid);
    const std::size_t n = grid.K;
    std::vector<Complex> ut(n), ux(n);
    for (std::size_t k = 0; k < n; ++k) {
        ut[k] = (u_next[k] - u_prev[k]) / (2.0 * grid.tau);
    }
    ux = apply_difference(Difference::central, u_cur, grid).vector();
    return ZField::from_complex(u_cur.vector(), ut, ux);
}

struct LocalLawResidual {
    std::vector<double> energy_res;
    std::vector<double> momentum_res;
};

/// Centred space-time divergence of (E, F) and (I, G) at the middle level of
/// three consecutive z fields.
inline LocalLawResidual local_law_residual(const ZField& z_prev, const ZField& z_cur, const ZField& z_next,
                                           const PdeParams& p, const GridSpec& grid) {
    const std::size_t n = z_cur.size();
    if (z_prev.size() != n || z_next.size() != n) {
        throw UsageError("local_law_residual: z fields have different lengths");
    }
    LocalLawResidual r;
    r.energy_res.resize(n);
    r.momentum_res.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto dn = local_densities(z_next.at(k), p);
        const auto dp = local_densities(z_prev.at(k), p);
        const auto dr = local_densities(z_cur.at((k + 1) % n), p);
        const auto dl = local_densities(z_cur.at((k + n - 1) % n), p);
        r.energy_res[k] = (dn.E - dp.E) / (2.0 * grid.tau) + (dr.F - dl.F) / (2.0 * grid.h);
        r.momentum_res[k] = (dn.I - dp.I) / (2.0 * grid.tau) + (dr.G - dl.G) / (2.0 * grid.h);
    }
    return r;
}

}  // namespace nlsw
