// Randomized property suites, 100 trials each.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlsw/cyclic_tridiagonal.hpp"
#include "nlsw/grid.hpp"
#include "nlsw/mi_scheme.hpp"
#include "nlsw/model.hpp"
#include "oracles.hpp"

using namespace nlsw;

namespace {

constexpr int trials = 100;

struct Draw {
    std::mt19937_64 rng;
    explicit Draw(unsigned long long seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); }
    MeshFunction field(std::size_t n, double scale = 1.0) { return MeshFunction(oracle::random_field(rng, n, scale)); }
    PdeParams params(double beta_max = 2.0) {
        return {uniform(-1.5, 1.5), uniform(-1.5, 1.5), uniform(-1.5, 1.5), uniform(-1.0, 3.0), uniform(-beta_max, beta_max)};
    }
};

}  // namespace

TEST(Properties, SummationByParts) {
    Draw d(101);
    for (int t = 0; t < trials; ++t) {
        const auto K = d.size(4, 40);
        const auto g = build_grid(0.0, d.uniform(0.5, 10.0), K, 1.0, 4);
        const auto u = d.field(K), v = d.field(K);
        const auto fwd = [&](const MeshFunction& w) { return apply_difference(Difference::forward, w, g); };
        const auto bwd = [&](const MeshFunction& w) { return apply_difference(Difference::backward, w, g); };
        const auto cen = [&](const MeshFunction& w) { return apply_difference(Difference::central, w, g); };
        const auto sec = [&](const MeshFunction& w) { return apply_difference(Difference::second, w, g); };
        const double scale = 1.0 / (g.h * g.h);
        // <D+ u, v> = -<u, D- v>
        EXPECT_NEAR(std::abs(inner_product(fwd(u), v, g) + inner_product(u, bwd(v), g)), 0.0, 1e-12 * scale);
        // <D0 u, v> = -<u, D0 v>, so <D0 u, u> is imaginary
        EXPECT_NEAR(std::abs(inner_product(cen(u), v, g) + inner_product(u, cen(v), g)), 0.0, 1e-12 * scale);
        EXPECT_NEAR(inner_product(cen(u), u, g).real(), 0.0, 1e-12 * scale);
        // <D+D- u, u> = -||D+ u||^2
        const double n = norms(fwd(u), g).l2;
        EXPECT_NEAR(std::abs(inner_product(sec(u), u, g) + n * n), 0.0, 1e-11 * scale);
        // half-point central quotient is skew as well: sum over half nodes of A conj(D A) is imaginary
        const auto A = apply_difference(Difference::half_average, u, g);
        const auto DA = apply_difference(Difference::forward, A, g);
        const auto bDA = apply_difference(Difference::backward, A, g);
        EXPECT_NEAR(std::abs(inner_product(A, 0.5 * (DA + bDA), g).real()), 0.0, 1e-12 * scale);
    }
}

TEST(Properties, GradientOfHamiltonian) {
    Draw d(202);
    for (int t = 0; t < trials; ++t) {
        const auto p = d.params();
        ZPoint z;
        for (auto& c : z) c = d.uniform(-1.0, 1.0);
        const auto g = grad_S(z, p);
        for (int i = 0; i < 6; ++i) {
            ZPoint zp = z, zm = z;
            zp[i] += 1e-5;
            zm[i] -= 1e-5;
            EXPECT_NEAR((hamiltonian_S(zp, p) - hamiltonian_S(zm, p)) / 2e-5, g[i], 1e-6);
        }
    }
}

TEST(Properties, CyclicSolverAgainstDense) {
    Draw d(303);
    for (int t = 0; t < trials; ++t) {
        const auto K = d.size(4, 60);
        const auto p = d.params();
        // time steps from h/100 to 10h, the range the benchmarks use
        const double L = d.uniform(1.0, 10.0);
        const auto J = d.size(10, 200);
        const auto g = build_grid(0.0, L, K, L / K * std::pow(10.0, d.uniform(-2.0, 1.0)) * J, J);
        const auto sys = assemble_linear(p, g);
        const auto rhs = oracle::random_field(d.rng, K);
        const auto x = solve_cyclic_tridiagonal(sys, rhs);
        const auto ref = oracle::dense_solve(oracle::dense_cyclic(sys.lower, sys.diag, sys.upper), rhs);
        double scale = 0.0;
        for (const auto& z : ref) scale = std::max(scale, std::abs(z));
        for (std::size_t k = 0; k < K; ++k) EXPECT_NEAR(std::abs(x[k] - ref[k]), 0.0, 1e-12 * std::max(1.0, scale));
    }
}

TEST(Properties, GaugeCovarianceOfMiStep) {
    Draw d(404);
    SolverConfig cfg;
    cfg.fp_tol = 1e-15;
    for (int t = 0; t < trials; ++t) {
        const auto K = d.size(4, 32);
        const auto p = d.params();
        const auto g = build_grid(0.0, d.uniform(1.0, 6.0), K, 0.5, 50);
        const MiStepper st(p, g);
        const auto um = d.field(K, 0.5), u0 = d.field(K, 0.5);
        const Complex c = std::polar(1.0, d.uniform(0.0, 6.3));
        const auto a = st.step({um, u0, 0.0}, cfg).u_next;
        const auto b = st.step({c * um, c * u0, 0.0}, cfg).u_next;
        for (std::size_t k = 0; k < K; ++k) EXPECT_NEAR(std::abs(b[k] - c * a[k]), 0.0, 1e-12);
    }
}

TEST(Properties, AcceptedStepsSolveTheScheme) {
    Draw d(505);
    for (int t = 0; t < trials; ++t) {
        const auto K = d.size(4, 32);
        const auto p = d.params();
        const auto g = build_grid(0.0, d.uniform(1.0, 6.0), K, 0.5, 50);
        const auto um = d.field(K, 0.5), u0 = d.field(K, 0.5);
        const auto r = MiStepper(p, g).step({um, u0, 0.0}, SolverConfig{});
        const auto res = oracle::mi_residual(um.vector(), u0.vector(), r.u_next.vector(), p, g.h, g.tau);
        // residual relative to the size of the individual terms (1/tau^2 scale)
        EXPECT_LT(oracle::max_abs(res), 1e-9 / (g.tau * g.tau));
    }
}
