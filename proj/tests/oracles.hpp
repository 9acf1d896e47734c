#pragma once

// Reference implementations used only by the tests.  They share no code with
// the library beyond the basic types.

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "nlsw/grid.hpp"
#include "nlsw/model.hpp"

namespace oracle {

using nlsw::Complex;
using Dense = std::vector<std::vector<Complex>>;

// Gaussian elimination with partial pivoting.
inline std::vector<Complex> dense_solve(Dense a, std::vector<Complex> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) == 0.0) throw std::runtime_error("dense oracle: singular");
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Complex> x(n);
    for (std::size_t r = n; r-- > 0;) {
        Complex s = b[r];
        for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
        x[r] = s / a[r][r];
    }
    return x;
}

inline Dense dense_cyclic(const std::vector<Complex>& lo, const std::vector<Complex>& d,
                          const std::vector<Complex>& up) {
    const std::size_t n = d.size();
    Dense a(n, std::vector<Complex>(n));
    for (std::size_t k = 0; k < n; ++k) {
        a[k][k] += d[k];
        a[k][(k + n - 1) % n] += lo[k];
        a[k][(k + 1) % n] += up[k];
    }
    return a;
}

inline std::vector<Complex> random_field(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    std::vector<Complex> v(n);
    for (auto& z : v) z = Complex(d(rng), d(rng));
    return v;
}

// Box-scheme residual at node k written out from the cell values
// u(j, k) with j in {-1, 0, 1}: every term is the average over the four
// cells touching node k of its midpoint-box approximation.
inline std::vector<Complex> mi_residual(const std::vector<Complex>& um, const std::vector<Complex>& u0,
                                        const std::vector<Complex>& up, const nlsw::PdeParams& p, double h,
                                        double tau) {
    const std::size_t n = u0.size();
    const Complex I(0.0, 1.0);
    const std::vector<const std::vector<Complex>*> lv{&um, &u0, &up};
    auto U = [&](int j, long k) { return (*lv[j + 1])[static_cast<std::size_t>((k % long(n) + long(n)) % long(n))]; };
    // cell (jj, kk): time slab [jj, jj+1], space cell [kk, kk+1]
    auto mid = [&](int jj, long kk) { return 0.25 * (U(jj, kk) + U(jj, kk + 1) + U(jj + 1, kk) + U(jj + 1, kk + 1)); };
    std::vector<Complex> r(n);
    for (long k = 0; k < long(n); ++k) {
        // second time difference on half nodes k-1/2 and k+1/2
        auto half = [&](int j, long kk) { return 0.5 * (U(j, kk) + U(j, kk + 1)); };
        const Complex utt = 0.5 * ((half(1, k) - 2.0 * half(0, k) + half(-1, k)) +
                                   (half(1, k - 1) - 2.0 * half(0, k - 1) + half(-1, k - 1))) / (tau * tau);
        auto avg_t = [&](int jj, long kk) { return 0.5 * (U(jj, kk) + U(jj + 1, kk)); };
        const Complex uxx = 0.5 * ((avg_t(0, k + 1) - 2.0 * avg_t(0, k) + avg_t(0, k - 1)) +
                                   (avg_t(-1, k + 1) - 2.0 * avg_t(-1, k) + avg_t(-1, k - 1))) / (h * h);
        const Complex ut = 0.5 * ((half(1, k) - half(-1, k)) + (half(1, k - 1) - half(-1, k - 1))) / (2.0 * tau);
        const Complex ux = 0.5 * ((avg_t(0, k + 1) - avg_t(0, k - 1)) + (avg_t(-1, k + 1) - avg_t(-1, k - 1))) / (2.0 * h);
        const Complex utx = ((U(1, k + 1) - U(1, k - 1)) - (U(-1, k + 1) - U(-1, k - 1))) / (4.0 * tau * h);
        Complex lin{}, cub{};
        for (int jj : {-1, 0}) {
            for (long kk : {k - 1, k}) {
                const Complex m = mid(jj, kk);
                lin += 0.25 * m;
                cub += 0.25 * std::norm(m) * m;
            }
        }
        r[static_cast<std::size_t>(k)] = utt - uxx + p.gamma * utx - I * p.alpha * ut - I * p.theta * ux +
                                         p.lambda * lin + p.beta * cub;
    }
    return r;
}

inline std::vector<Complex> wang_residual(const std::vector<Complex>& um, const std::vector<Complex>& u0,
                                          const std::vector<Complex>& up, const nlsw::PdeParams& p, double h,
                                          double tau) {
    const std::size_t n = u0.size();
    const Complex I(0.0, 1.0);
    std::vector<Complex> r(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t kp = (k + 1) % n, km = (k + n - 1) % n;
        const Complex s = up[k] + um[k];
        const Complex sxx = (up[kp] + um[kp] - 2.0 * s + up[km] + um[km]) / (h * h);
        const Complex sx = (up[kp] + um[kp] - up[km] - um[km]) / (2.0 * h);
        const Complex utx = ((up[kp] - up[km]) - (um[kp] - um[km])) / (4.0 * tau * h);
        r[k] = (up[k] - 2.0 * u0[k] + um[k]) / (tau * tau) - 0.5 * sxx - I * p.alpha * (up[k] - um[k]) / (2.0 * tau) -
               0.5 * I * p.theta * sx + p.gamma * utx + 0.5 * p.lambda * s +
               0.25 * p.beta * (std::norm(up[k]) + std::norm(um[k])) * s;
    }
    return r;
}

inline double max_abs(const std::vector<Complex>& v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace oracle
