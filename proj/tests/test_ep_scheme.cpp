#include <gtest/gtest.h>

#include <random>

#include "nlsw/ep_scheme.hpp"
#include "oracles.hpp"

using namespace nlsw;

namespace {

const PdeParams general{0.6, -0.8, 0.45, 1.1, 1.7};

}

TEST(WangStencils, LevelNextDiagonal) {
    const auto g = build_grid(0.0, 1.0, 10, 1.0, 50);
    const PdeParams p{-1.0, 0.0, 0.0, 0.0, 2.0};
    const auto sys = assemble_wang(p, g);
    const Complex i(0.0, 1.0);
    EXPECT_NEAR(std::abs(sys.diag[0] - (1.0 / (g.tau * g.tau) + 1.0 / (g.h * g.h) + i / (2 * g.tau))), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(sys.upper[0] + 1.0 / (2 * g.h * g.h)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(sys.lower[0] + 1.0 / (2 * g.h * g.h)), 0.0, 1e-12);
}

TEST(WangStep, ZeroDataStaysZero) {
    const auto g = build_grid(0.0, 1.0, 8, 1.0, 10);
    const auto r = step_wang({MeshFunction::zeros(8), MeshFunction::zeros(8), 0.0}, general, g, SolverConfig{});
    for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(r.u_next[k], Complex{});
}

TEST(WangStep, SolvesTheSchemeAtEveryNode) {
    std::mt19937_64 rng(8);
    const auto g = build_grid(0.0, 3.0, 12, 0.5, 50);
    const WangStepper st(general, g);
    for (int trial = 0; trial < 5; ++trial) {
        const StateWindow w{MeshFunction(oracle::random_field(rng, 12, 0.5)),
                            MeshFunction(oracle::random_field(rng, 12, 0.5)), 0.0};
        const auto r = st.step(w, SolverConfig{});
        EXPECT_LT(oracle::max_abs(oracle::wang_residual(w.u_prev.vector(), w.u_cur.vector(), r.u_next.vector(),
                                                        general, g.h, g.tau)),
                  1e-8);
    }
}

TEST(EnergyWang, ZeroAndLinearAgreement) {
    const auto g = build_grid(0.0, 1.0, 8, 1.0, 10);
    const auto z = MeshFunction::zeros(8);
    EXPECT_EQ(energy_wang(z, z, general, g), 0.0);
    std::mt19937_64 rng(4);
    const MeshFunction a(oracle::random_field(rng, 8)), b(oracle::random_field(rng, 8));
    const auto e = energy_wang_pair(a, b, PdeParams{0.3, 0.2, 0.1, 1.0, 0.0}, g);
    EXPECT_EQ(e.derived, e.single_level);
}

TEST(EnergyWang, ConservedWithAllCoefficients) {
    std::mt19937_64 rng(6);
    const auto g = build_grid(0.0, 2.0, 16, 1.0, 200);
    const WangStepper st(general, g);
    StateWindow w{MeshFunction(oracle::random_field(rng, 16, 0.4)), MeshFunction(oracle::random_field(rng, 16, 0.4)), 0.0};
    const double e0 = energy_wang(w.u_prev, w.u_cur, general, g);
    for (int j = 0; j < 200; ++j) {
        auto r = st.step(w, SolverConfig{});
        w.u_prev = std::move(w.u_cur);
        w.u_cur = std::move(r.u_next);
        EXPECT_NEAR(energy_wang(w.u_prev, w.u_cur, general, g), e0, 1e-11 * std::abs(e0));
    }
}

TEST(RunWang, ConvergesOnLinearPlaneWave) {
    const auto p = builtin_problem("linear_plane");
    std::vector<std::pair<double, double>> samples;
    for (std::size_t K : {16u, 32u, 64u}) {
        const auto g = problem_grid(p, K, 4 * K, 0.5);
        samples.emplace_back(g.h, *run_wang(p, g, SolverConfig{}, 0).rows.back().err_max);
    }
    EXPECT_NEAR(convergence_order(samples), 2.0, 0.2);
}

TEST(RunWang, RowsCarryBothEnergies) {
    const auto p = builtin_problem("plane_beta2");
    const auto g = problem_grid(p, 64, 100, 0.5);
    const auto tr = run_wang(p, g, SolverConfig{}, 0);
    ASSERT_TRUE(tr.energy_wang_initial.has_value());
    for (const auto& r : tr.rows) {
        ASSERT_TRUE(r.energy_wang && r.energy_wang_single);
        EXPECT_FALSE(r.energy_gap.has_value());
        EXPECT_NEAR(*r.energy_wang, *tr.energy_wang_initial, 1e-11 * *tr.energy_wang_initial);
    }
}
