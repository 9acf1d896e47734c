#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlsw/mi_scheme.hpp"
#include "oracles.hpp"

using namespace nlsw;

namespace {

const PdeParams general{0.6, -0.8, 0.45, 1.1, 1.7};

StateWindow random_window(std::mt19937_64& rng, std::size_t K, double scale) {
    return {MeshFunction(oracle::random_field(rng, K, scale)), MeshFunction(oracle::random_field(rng, K, scale)), 0.0};
}

}  // namespace

TEST(MiStencils, LevelNextDiagonal) {
    const auto g = build_grid(0.0, 1.0, 10, 1.0, 50);
    const auto sys = assemble_linear(general, g);
    const Complex i(0.0, 1.0);
    const Complex diag = 1.0 / (2 * g.tau * g.tau) + 1.0 / (2 * g.h * g.h) - i * general.alpha / (4 * g.tau) +
                         general.lambda / 8.0;
    const Complex upper = 1.0 / (4 * g.tau * g.tau) - 1.0 / (4 * g.h * g.h) - i * general.alpha / (8 * g.tau) -
                          i * general.theta / (8 * g.h) + general.gamma / (4 * g.tau * g.h) + general.lambda / 16.0;
    EXPECT_NEAR(std::abs(sys.diag[3] - diag), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(sys.upper[3] - upper), 0.0, 1e-9);
}

TEST(MiStep, ZeroDataStaysZero) {
    const auto g = build_grid(0.0, 1.0, 8, 1.0, 10);
    const MiStepper st(general, g);
    const auto r = st.step({MeshFunction::zeros(8), MeshFunction::zeros(8), 0.0}, SolverConfig{});
    for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(r.u_next[k], Complex{});
}

TEST(MiStep, SolvesTheSchemeAtEveryNode) {
    std::mt19937_64 rng(5);
    const auto g = build_grid(0.0, 3.0, 12, 0.5, 50);
    const MiStepper st(general, g);
    for (int trial = 0; trial < 5; ++trial) {
        const auto w = random_window(rng, 12, 0.5);
        const auto r = st.step(w, SolverConfig{});
        const auto res = oracle::mi_residual(w.u_prev.vector(), w.u_cur.vector(), r.u_next.vector(), general, g.h, g.tau);
        EXPECT_LT(oracle::max_abs(res), 1e-8);
        EXPECT_LT(oracle::max_abs(mi_scheme_residual(w.u_prev, w.u_cur, r.u_next, general, g)), 1e-8);
    }
}

TEST(MiStep, LibraryResidualMatchesOracle) {
    std::mt19937_64 rng(9);
    const auto g = build_grid(-1.0, 2.0, 9, 0.5, 7);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = oracle::random_field(rng, 9), b = oracle::random_field(rng, 9), c = oracle::random_field(rng, 9);
        const auto lib = mi_scheme_residual(MeshFunction(a), MeshFunction(b), MeshFunction(c), general, g);
        const auto ref = oracle::mi_residual(a, b, c, general, g.h, g.tau);
        for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(std::abs(lib[k] - ref[k]), 0.0, 1e-10 * (1 + std::abs(ref[k])));
    }
}

TEST(MiStep, LinearProblemTakesOneSweep) {
    std::mt19937_64 rng(1);
    const auto g = build_grid(0.0, 1.0, 16, 1.0, 20);
    const PdeParams lin{-1.0, 1.0, -1.0, 3.0, 0.0};
    const auto w = random_window(rng, 16, 1.0);
    const auto r = step_mi(w, assemble_linear(lin, g), lin, g, SolverConfig{});
    EXPECT_EQ(r.fp_iters, 1);
    EXPECT_LT(oracle::max_abs(oracle::mi_residual(w.u_prev.vector(), w.u_cur.vector(), r.u_next.vector(), lin, g.h,
                                                  g.tau)),
              1e-9);
}

TEST(MiStep, NonConvergenceIsReported) {
    std::mt19937_64 rng(2);
    const auto g = build_grid(0.0, 1.0, 8, 1.0, 10);
    SolverConfig cfg;
    cfg.fp_max_iter = 1;
    const MiStepper st(general, g);
    try {
        st.step(random_window(rng, 8, 1.0), cfg);
        FAIL() << "expected StepFailure";
    } catch (const StepFailure& e) {
        EXPECT_GT(e.last_update(), 0.0);
    }
}

TEST(MiStep, BlowUpIsReported) {
    std::mt19937_64 rng(3);
    const auto g = build_grid(0.0, 1.0, 8, 10.0, 10);
    const MiStepper st(PdeParams{0, 0, 0, 0, 1.0}, g);
    EXPECT_THROW(st.step(random_window(rng, 8, 1e3), SolverConfig{}), StepFailure);
}

TEST(MiStep, WindowSizeMustMatch) {
    const auto g = build_grid(0.0, 1.0, 8, 1.0, 10);
    const MiStepper st(general, g);
    EXPECT_THROW(st.step({MeshFunction::zeros(7), MeshFunction::zeros(7), 0.0}, SolverConfig{}), UsageError);
}

TEST(RunMi, RowAndSnapshotCounts) {
    const auto p = builtin_problem("nonlinear_plane");
    const auto g = problem_grid(p, 32, 57, 0.5);
    const auto tr = run_mi(p, g, SolverConfig{}, 10);
    EXPECT_EQ(tr.rows.size(), 56u);
    EXPECT_EQ(tr.snapshots.size(), 56u / 10 + 2);
    EXPECT_EQ(tr.rows.front().step, 2);
    EXPECT_EQ(tr.rows.back().step, 57);
    EXPECT_DOUBLE_EQ(tr.rows.back().t, 0.5);
    for (const auto& r : tr.rows) {
        ASSERT_TRUE(r.energy_gap && r.mass_gap && r.err_max);
        EXPECT_LT(std::abs(*r.energy_gap), 1e-10 * std::abs(r.energy_mi));
        EXPECT_LT(std::abs(*r.mass_gap), 1e-9 * std::abs(r.mass_mi));
    }
}

TEST(RunMi, SecondOrderInSpaceAndTime) {
    // Simultaneous refinement of h and tau on the linear plane wave.
    const auto p = builtin_problem("linear_plane");
    std::vector<std::pair<double, double>> samples;
    for (std::size_t K : {16u, 32u, 64u}) {
        const auto g = problem_grid(p, K, 4 * K, 0.5);
        const auto tr = run_mi(p, g, SolverConfig{}, 0);
        samples.emplace_back(g.h, *tr.rows.back().err_max);
    }
    EXPECT_NEAR(convergence_order(samples), 2.0, 0.2);
}

TEST(RunMi, DomainMismatchRejected) {
    const auto p = builtin_problem("linear_plane");
    EXPECT_THROW(run_mi(p, build_grid(0.0, 1.0, 8, 1.0, 10), SolverConfig{}), ConfigError);
}
