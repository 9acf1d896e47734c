#pragma once

/**
 * @file grid.hpp
 * @brief Uniform periodic space-time mesh, complex mesh functions and the
 *        finite-difference quotients, half-point averages and discrete norms
 *        used by every scheme in the library.
 *
 * Spatial indexing is always modulo K.  Fields that live on half nodes are
 * stored with the same length K: entry k holds the value at x_{k+1/2}, so
 * the last entry couples nodes K-1 and 0.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlsw/error.hpp"

namespace nlsw {

using Complex = std::complex<double>;

/// Uniform partition x_k = x_l + k h, t_j = j tau of [x_l, x_r] x [0, T].
struct GridSpec {
    double x_l = 0.0;
    double x_r = 1.0;
    std::size_t K = 4;
    double T = 1.0;
    std::size_t J = 2;
    double h = 0.25;
    double tau = 0.5;

    double node(std::size_t k) const { return x_l + static_cast<double>(k) * h; }
    double time(std::size_t j) const { return static_cast<double>(j) * tau; }
    double length() const { return x_r - x_l; }
};

inline GridSpec build_grid(double x_l, double x_r, std::size_t K, double T, std::size_t J) {
    if (!std::isfinite(x_l) || !std::isfinite(x_r) || !(x_r > x_l)) {
        throw ConfigError("grid: domain requires finite x_l < x_r");
    }
    if (K < 4) {
        throw ConfigError("grid: K must be at least 4 (the stencil needs three distinct neighbours)");
    }
    if (!std::isfinite(T) || !(T > 0.0)) {
        throw ConfigError("grid: final time T must be positive");
    }
    if (J < 2) {
        throw ConfigError("grid: J must be at least 2 (two-step schemes)");
    }
    GridSpec g;
    g.x_l = x_l;
    g.x_r = x_r;
    g.K = K;
    g.T = T;
    g.J = J;
    g.h = (x_r - x_l) / static_cast<double>(K);
    g.tau = T / static_cast<double>(J);
    return g;
}

/// Complex field on the K spatial nodes of one time level.  All entries are
/// finite; construction from non-finite data throws.
class MeshFunction {
public:
    MeshFunction() = default;

    explicit MeshFunction(std::vector<Complex> values) : values_(std::move(values)) {
        for (const Complex& z : values_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw NonFiniteError("mesh function contains a non-finite entry");
            }
        }
    }

    static MeshFunction zeros(std::size_t n) { return MeshFunction(std::vector<Complex>(n)); }

    template <class F>
    static MeshFunction sample(const GridSpec& grid, F&& f) {
        std::vector<Complex> v(grid.K);
        for (std::size_t k = 0; k < grid.K; ++k) {
            v[k] = Complex(f(grid.node(k)));
        }
        return MeshFunction(std::move(v));
    }

    std::size_t size() const noexcept { return values_.size(); }
    const Complex& operator[](std::size_t k) const { return values_[k]; }

    /// Periodic access; any integer index is reduced modulo size().
    const Complex& wrap(std::ptrdiff_t k) const {
        const auto n = static_cast<std::ptrdiff_t>(values_.size());
        std::ptrdiff_t r = k % n;
        if (r < 0) r += n;
        return values_[static_cast<std::size_t>(r)];
    }

    std::span<const Complex> values() const noexcept { return values_; }
    const std::vector<Complex>& vector() const noexcept { return values_; }

    friend MeshFunction operator+(const MeshFunction& a, const MeshFunction& b) {
        require_same_size(a, b);
        std::vector<Complex> v(a.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
        return MeshFunction(std::move(v));
    }
    friend MeshFunction operator-(const MeshFunction& a, const MeshFunction& b) {
        require_same_size(a, b);
        std::vector<Complex> v(a.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] - b[k];
        return MeshFunction(std::move(v));
    }
    friend MeshFunction operator*(Complex c, const MeshFunction& a) {
        std::vector<Complex> v(a.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * a[k];
        return MeshFunction(std::move(v));
    }

    static void require_same_size(const MeshFunction& a, const MeshFunction& b) {
        if (a.size() != b.size()) {
            throw UsageError("mesh functions have different lengths");
        }
    }

private:
    std::vector<Complex> values_;
};

inline void require_on_grid(const MeshFunction& u, const GridSpec& grid) {
    if (u.size() != grid.K) {
        throw UsageError("mesh function length " + std::to_string(u.size()) +
                         " does not match grid K = " + std::to_string(grid.K));
    }
}

enum class Difference {
    forward,       ///< (u_{k+1} - u_k)/h at node k
    backward,      ///< (u_k - u_{k-1})/h at node k
    central,       ///< (u_{k+1} - u_{k-1})/(2h) at node k
    second,        ///< (u_{k+1} - 2u_k + u_{k-1})/h^2 at node k
    half_average,  ///< (u_k + u_{k+1})/2 at half node k+1/2
    half_forward,  ///< (u_{k+1} - u_k)/h at half node k+1/2
};

inline Difference difference_from_string(std::string_view name) {
    if (name == "forward") return Difference::forward;
    if (name == "backward") return Difference::backward;
    if (name == "central") return Difference::central;
    if (name == "second") return Difference::second;
    if (name == "half_average") return Difference::half_average;
    if (name == "half_forward") return Difference::half_forward;
    throw UsageError("unknown difference kind '" + std::string(name) + "'");
}

inline MeshFunction apply_difference(Difference kind, const MeshFunction& u, const GridSpec& grid) {
    require_on_grid(u, grid);
    const std::size_t n = u.size();
    const double h = grid.h;
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex um = u[(k + n - 1) % n];
        const Complex u0 = u[k];
        const Complex up = u[(k + 1) % n];
        switch (kind) {
            case Difference::forward:
            case Difference::half_forward: out[k] = (up - u0) / h; break;
            case Difference::backward: out[k] = (u0 - um) / h; break;
            case Difference::central: out[k] = (up - um) / (2.0 * h); break;
            case Difference::second: out[k] = (up - 2.0 * u0 + um) / (h * h); break;
            case Difference::half_average: out[k] = 0.5 * (u0 + up); break;
        }
    }
    return MeshFunction(std::move(out));
}

/// <u, v> = h sum_k u_k conj(v_k).
inline Complex inner_product(const MeshFunction& u, const MeshFunction& v, const GridSpec& grid) {
    MeshFunction::require_same_size(u, v);
    Complex s{};
    for (std::size_t k = 0; k < u.size(); ++k) s += u[k] * std::conj(v[k]);
    return grid.h * s;
}

struct Norms {
    double l2 = 0.0;            ///< ||u||
    double half_l2 = 0.0;       ///< ||u||_{1/2}, over half-point averages
    double max = 0.0;           ///< ||u||_inf
    double quartic_half = 0.0;  ///< h sum_k |u_{k+1/2}|^4
};

inline Norms norms(const MeshFunction& u, const GridSpec& grid) {
    const std::size_t n = u.size();
    double sq = 0.0, half_sq = 0.0, quart = 0.0, mx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::norm(u[k]);
        sq += a;
        mx = std::max(mx, std::abs(u[k]));
        const double b = std::norm(0.5 * (u[k] + u[(k + 1) % n]));
        half_sq += b;
        quart += b * b;
    }
    return Norms{std::sqrt(grid.h * sq), std::sqrt(grid.h * half_sq), mx, grid.h * quart};
}

}  // namespace nlsw
