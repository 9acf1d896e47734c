#pragma once

/**
 * @file cyclic_tridiagonal.hpp
 * @brief Complex periodic (cyclic) tridiagonal systems
 *
 *     lower[k] x_{k-1} + diag[k] x_k + upper[k] x_{k+1} = rhs[k],   indices mod K,
 *
 * solved in O(K) by Thomas elimination on the system with its corners
 * removed, plus a Sherman-Morrison rank-one correction for the corners.
 * The factorisation is reusable: the implicit schemes factor their constant
 * matrix once per run and solve once per fixed-point sweep.
 */

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "nlsw/error.hpp"

namespace nlsw {

struct CyclicTridiagonalSystem {
    std::vector<std::complex<double>> lower;  ///< lower[k] multiplies x_{k-1 mod K}
    std::vector<std::complex<double>> diag;
    std::vector<std::complex<double>> upper;  ///< upper[k] multiplies x_{k+1 mod K}

    std::size_t size() const noexcept { return diag.size(); }

    /// System with the same (lower, diag, upper) triple in every row.
    static CyclicTridiagonalSystem constant(std::size_t n, std::complex<double> lo, std::complex<double> d,
                                            std::complex<double> up) {
        return {std::vector<std::complex<double>>(n, lo), std::vector<std::complex<double>>(n, d),
                std::vector<std::complex<double>>(n, up)};
    }
};

/// y = A x.
inline std::vector<std::complex<double>> apply(const CyclicTridiagonalSystem& sys,
                                               std::span<const std::complex<double>> x) {
    const std::size_t n = sys.size();
    if (x.size() != n) throw UsageError("cyclic tridiagonal apply: size mismatch");
    std::vector<std::complex<double>> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        y[k] = sys.lower[k] * x[(k + n - 1) % n] + sys.diag[k] * x[k] + sys.upper[k] * x[(k + 1) % n];
    }
    return y;
}

class CyclicTridiagonalSolver {
public:
    /// A pivot (or the corner-correction denominator) smaller than this
    /// fraction of the magnitudes it was formed from is treated as zero.
    static constexpr double relative_pivot_tol = 64.0 * std::numeric_limits<double>::epsilon();

    explicit CyclicTridiagonalSolver(CyclicTridiagonalSystem sys) : sys_(std::move(sys)) {
        const std::size_t n = sys_.size();
        if (n < 4 || sys_.lower.size() != n || sys_.upper.size() != n) {
            throw UsageError("cyclic tridiagonal system needs three sequences of equal length >= 4");
        }
        top_right_ = sys_.lower[0];
        bottom_left_ = sys_.upper[n - 1];
        shift_ = -sys_.diag[0];
        if (shift_ == 0.0) shift_ = 1.0;

        // Thomas coefficients of the corner-free matrix T = A - u v^T.
        std::vector<std::complex<double>> d = sys_.diag;
        d[0] -= shift_;
        d[n - 1] -= bottom_left_ * top_right_ / shift_;
        cprime_.resize(n);
        inv_pivot_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const std::complex<double> elim = k == 0 ? 0.0 : sys_.lower[k] * cprime_[k - 1];
            const std::complex<double> pivot = d[k] - elim;
            const double scale = std::abs(d[k]) + std::abs(elim);
            if (!(std::abs(pivot) > relative_pivot_tol * scale)) {
                throw SingularSystemError("cyclic tridiagonal system is singular (pivot collapse at row " +
                                          std::to_string(k) + ")");
            }
            inv_pivot_[k] = 1.0 / pivot;
            cprime_[k] = k + 1 < n ? sys_.upper[k] * inv_pivot_[k] : 0.0;
        }

        std::vector<std::complex<double>> u(n);
        u[0] = shift_;
        u[n - 1] = bottom_left_;
        z_ = thomas(u);
        const std::complex<double> corner = top_right_ / shift_ * z_[n - 1];
        denom_ = 1.0 + z_[0] + corner;
        if (!(std::abs(denom_) > relative_pivot_tol * (1.0 + std::abs(z_[0]) + std::abs(corner)))) {
            throw SingularSystemError("cyclic tridiagonal system is singular (corner correction)");
        }
    }

    std::size_t size() const noexcept { return sys_.size(); }
    const CyclicTridiagonalSystem& system() const noexcept { return sys_; }

    std::vector<std::complex<double>> solve(std::span<const std::complex<double>> rhs) const {
        const std::size_t n = size();
        if (rhs.size() != n) throw UsageError("cyclic tridiagonal solve: rhs size mismatch");
        std::vector<std::complex<double>> y = thomas(rhs);
        const std::complex<double> factor = (y[0] + top_right_ / shift_ * y[n - 1]) / denom_;
        for (std::size_t k = 0; k < n; ++k) y[k] -= factor * z_[k];
        return y;
    }

private:
    std::vector<std::complex<double>> thomas(std::span<const std::complex<double>> r) const {
        const std::size_t n = size();
        std::vector<std::complex<double>> x(n);
        x[0] = r[0] * inv_pivot_[0];
        for (std::size_t k = 1; k < n; ++k) {
            x[k] = (r[k] - sys_.lower[k] * x[k - 1]) * inv_pivot_[k];
        }
        for (std::size_t k = n - 1; k-- > 0;) {
            x[k] -= cprime_[k] * x[k + 1];
        }
        return x;
    }

    CyclicTridiagonalSystem sys_;
    std::complex<double> top_right_{}, bottom_left_{}, shift_{}, denom_{};
    std::vector<std::complex<double>> cprime_, inv_pivot_, z_;
};

inline std::vector<std::complex<double>> solve_cyclic_tridiagonal(const CyclicTridiagonalSystem& sys,
                                                                  std::span<const std::complex<double>> rhs) {
    return CyclicTridiagonalSolver(sys).solve(rhs);
}

}  // namespace nlsw
