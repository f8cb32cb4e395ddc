#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dislokon/oracle.hpp"

using namespace dislokon;

namespace {

constexpr double kPi = std::numbers::pi;

// Frozen 1F1 roots for m = 1, omega = 0.05, r0 = 10, |l_eff| = 0.3.
const std::vector<double> kHardwallRoots = {
    0.09718729827053184, 0.3777668504543487, 0.8520832891125346, 1.5233931817478554, 2.391995712529773,
    3.4579537528449267,  4.721287246401804,  6.182004166973487,  7.840108219202673,  9.6956013173118,
    11.7484845323553,    13.998758501973374, 16.446423625166293,
};

PhysicalParams hardwall_reference() {
    PhysicalParams p;
    p.b0 = 0.05;
    p.phi_b = -0.3 * 2.0 * kPi; // l = 0 -> l_eff = 0.3
    p.r0 = 10.0;
    return p;
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no dislokon::Error thrown";
    return ErrorKind::InvalidParams;
}

struct EnvGuard {
    explicit EnvGuard(const char* value) {
        if (value)
            setenv("DISLOKON_GRID_N", value, 1);
        else
            unsetenv("DISLOKON_GRID_N");
    }
    ~EnvGuard() { unsetenv("DISLOKON_GRID_N"); }
};

} // namespace

TEST(RadialSolver, FreeBoxAtHalfIntegerAngularMomentum) {
    // |l| = 1/2 removes the centrifugal term: u'' + tau u = 0 on (0, 1).
    const RadialEigenproblem box{0.5, 0.0, 0.0, 1.0, 2000, 1.0};
    const auto taus = solve_radial(box, 4);
    for (int n = 0; n < 4; ++n) {
        const double expected = std::pow((n + 1) * kPi, 2);
        EXPECT_NEAR(taus[static_cast<std::size_t>(n)], expected, 1e-5 * expected);
    }
}

TEST(RadialSolver, OscillatorLevelsAcrossAngularMomentum) {
    for (int s = 0; s <= 3; ++s) {
        const auto prob = confined_problem(s, 1.0, 0.0, 2.0 * (s + 1), 1, 4000);
        const auto fine = prob.with_grid(8000);
        const double tc = solve_radial(prob, 1)[0];
        const double tf = solve_radial(fine, 1)[0];
        const double best = richardson(tc, prob.spacing(), tf, fine.spacing());
        EXPECT_NEAR(best, 2.0 * (s + 1), 1e-8) << s;
    }
}

TEST(RadialSolver, OscillatorRadialLadder) {
    const auto prob = confined_problem(0.0, 1.0, 0.0, 14.0, 4, 4000);
    const auto taus = solve_radial(prob, 4);
    for (int n = 0; n < 4; ++n)
        EXPECT_NEAR(taus[static_cast<std::size_t>(n)], 2.0 * (2 * n + 1), 1e-4) << n;
}

TEST(RadialSolver, SecondOrderConvergenceAndRichardsonGain) {
    for (double s : {0.25, 0.75, 2.0}) {
        const double exact = 2.0 * (s + 1.0);
        const auto prob = confined_problem(s, 1.0, 0.0, exact, 1, 1000);
        const auto fine = prob.with_grid(2000);
        const auto finer = prob.with_grid(4000);
        const double t1 = solve_radial(prob, 1)[0];
        const double t2 = solve_radial(fine, 1)[0];
        const double t4 = solve_radial(finer, 1)[0];
        const double ratio = (t1 - exact) / (t2 - exact);
        EXPECT_GT(ratio, 3.5) << s;
        EXPECT_LT(ratio, 4.5) << s;
        const double extrapolated = richardson(t2, fine.spacing(), t4, finer.spacing());
        EXPECT_LT(std::abs(extrapolated - exact) * 5.0, std::abs(t4 - exact)) << s;
    }
}

TEST(RadialSolver, NodeCountMatchesStateIndex) {
    const auto prob = confined_problem(1.3, 0.25, 0.0, 10.0, 5, 3000);
    const auto taus = solve_radial(prob, 5);
    for (std::size_t k = 0; k < taus.size(); ++k) {
        const auto u = radial_eigenvector(prob, taus[k]);
        EXPECT_EQ(count_nodes(u), static_cast<int>(k));
        EXPECT_LE(tail_fraction(u), kTailLimit);
    }
}

TEST(RadialSolver, ShiftCheckRaisesGridTooCoarse) {
    const auto prob = confined_problem(0.1, 1.0, 0.0, 2.2, 1, 500);
    EXPECT_EQ(kind_of([&] { solve_radial(prob, 1, 1e-12); }), ErrorKind::GridTooCoarse);
    EXPECT_NO_THROW(solve_radial(prob, 1, 1e-3));
}

TEST(RadialSolver, RejectsTinyGrids) {
    RadialEigenproblem prob{0.0, 1.0, 0.0, std::nullopt, 100, 8.0};
    EXPECT_EQ(kind_of([&] { solve_radial(prob, 1); }), ErrorKind::GridTooCoarse);
    prob.grid_n = 600;
    prob.r_max = -1.0;
    EXPECT_EQ(kind_of([&] { solve_radial(prob, 1); }), ErrorKind::InvalidParams);
}

TEST(HardwallExact, FrozenRoots) {
    const auto p = hardwall_reference();
    const auto roots = hardwall_exact(p, {0, 0, 0.0}, static_cast<int>(kHardwallRoots.size()));
    ASSERT_EQ(roots.size(), kHardwallRoots.size());
    for (std::size_t i = 0; i < roots.size(); ++i)
        EXPECT_NEAR(roots[i], kHardwallRoots[i], 1e-9 * kHardwallRoots[i]) << i;
}

TEST(HardwallExact, AgreesWithFiniteDifferences) {
    const auto p = hardwall_reference();
    const QuantumNumbers qn{0, 0, 0.0};
    const auto prob = hardwall_problem(p, qn, 4000);
    const auto fine = prob.with_grid(8000);
    const auto tc = solve_radial(prob, 6);
    const auto tf = solve_radial(fine, 6);
    for (std::size_t i = 0; i < 6; ++i) {
        const double best = richardson(tc[i], prob.spacing(), tf[i], fine.spacing());
        EXPECT_NEAR(best, kHardwallRoots[i], 1e-4 * kHardwallRoots[i]) << i;
    }
}

TEST(HardwallExact, WideWallRecoversLandau) {
    PhysicalParams p;
    p.b0 = 1.0;
    p.r0 = 30.0;
    for (int l : {0, 1, 3}) {
        const QuantumNumbers qn{0, l, 0.0};
        const auto roots = hardwall_exact(p, qn, 3);
        for (int n = 0; n < 3; ++n) {
            QuantumNumbers level = qn;
            level.n_radial = n;
            EXPECT_NEAR(roots[static_cast<std::size_t>(n)], landau_spectral(p, level), 1e-8) << l << ' ' << n;
        }
    }
}

TEST(HardwallExact, CosineFormWithinFivePercentOnceDeep) {
    const auto p = hardwall_reference();
    const auto roots = hardwall_exact(p, {0, 0, 0.0}, 13);
    double previous = std::numeric_limits<double>::infinity();
    for (int n = 0; n < 13; ++n) {
        const auto level = energy_hardwall_approx(p, {n, 0, 0.0});
        const double exact = roots[static_cast<std::size_t>(n)];
        const double gap = std::abs(level.spectral - exact) / exact;
        EXPECT_LT(gap, previous) << n;
        previous = gap;
        if (exact / (2.0 * p.m * derived_scales(p).varpi) >= 10.0) {
            EXPECT_LT(gap, 0.05) << n;
        }
    }
}

TEST(HardwallExact, WiderWallMissesFivePercentAtRatioTen) {
    auto p = hardwall_reference();
    p.r0 = 20.0;
    const auto roots = hardwall_exact(p, {0, 0, 0.0}, 9);
    const double two_m_varpi = 2.0 * p.m * derived_scales(p).varpi;
    EXPECT_LT(roots[5] / two_m_varpi, 10.0);
    EXPECT_GT(roots[6] / two_m_varpi, 10.0);
    EXPECT_NEAR(roots[6], 1.259294204610636, 1e-9);
    EXPECT_NEAR(hardwall_spectral_approx(p, {6, 0, 0.0}) / roots[6], 1.0 - 0.0671523306161, 1e-9);
    EXPECT_LT(hardwall_spectral_approx(p, {8, 0, 0.0}) / roots[8], 1.0);
    EXPECT_NEAR(roots[8], 2.0386691512818436, 1e-9);
}

TEST(HardwallExact, NeedsWallAndField) {
    PhysicalParams p;
    p.b0 = 1.0;
    EXPECT_EQ(kind_of([&] { hardwall_exact(p, {0, 0, 0.0}, 1); }), ErrorKind::MissingWall);
    p.b0 = 0.0;
    p.r0 = 5.0;
    EXPECT_THROW(hardwall_exact(p, {0, 0, 0.0}, 1), Error);
}

TEST(VerifyScenario, LandauMatchesTightly) {
    PhysicalParams p;
    p.b0 = 1.0;
    p.chi = 0.3;
    p.phi_b = 0.6 * 2.0 * kPi;
    for (int n = 0; n < 3; ++n) {
        const auto report = verify_scenario(p, {n, 2, 1.0}, Scenario::landau, 1e-4, 4000);
        EXPECT_LT(report.rel_err, 1e-7) << n;
        EXPECT_NEAR(report.numeric_e, report.closed_form_e, 1e-7 * report.closed_form_e);
        ASSERT_TRUE(report.richardson_tau);
    }
}

TEST(VerifyScenario, KleinGordonOscillatorLandau) {
    PhysicalParams p;
    p.b0 = 0.7;
    p.omega0 = 0.4;
    const auto report = verify_scenario(p, {1, -1, 0.5}, Scenario::landau, 1e-4, 4000);
    EXPECT_LT(report.rel_err, 1e-7);
}

TEST(VerifyScenario, LinearGroundStateWithinOnePermille) {
    for (double omega0 : {0.0, 0.2}) {
        PhysicalParams p;
        p.nu = 1.0;
        p.omega0 = omega0;
        const auto report = verify_scenario(p, {1, 1, 0.0}, Scenario::linear, 1e-3, 4000);
        EXPECT_LT(report.rel_err, 1e-3) << omega0;
        EXPECT_NEAR(report.cyclotron, frequency_n1(p, {1, 1, 0.0}), 1e-15);
    }
}

TEST(VerifyScenario, HardwallMismatchCarriesReport) {
    auto p = hardwall_reference();
    try {
        verify_scenario(p, {0, 0, 0.0}, Scenario::hardwall, 1e-4, 2000);
        FAIL() << "cosine form should miss the lowest level";
    } catch (const MismatchError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MismatchBeyondTolerance);
        ASSERT_TRUE(e.report().exact_tau);
        EXPECT_NEAR(*e.report().exact_tau, kHardwallRoots[0], 1e-9);
        EXPECT_GT(e.report().rel_err, 0.1);
    }
}

TEST(VerifyScenario, CoarseGridIsRejected) {
    PhysicalParams p;
    p.b0 = 1.0;
    EXPECT_EQ(kind_of([&] { verify_scenario(p, {0, 0, 0.0}, Scenario::landau, 1e-4, 499); }),
              ErrorKind::GridTooCoarse);
    EXPECT_EQ(kind_of([&] { verify_scenario(p, {0, 0, 0.1}, Scenario::landau, 1e-9, 500); }),
              ErrorKind::GridTooCoarse);
}

TEST(GridSize, EnvironmentOverride) {
    {
        EnvGuard env(nullptr);
        EXPECT_EQ(default_grid_n(), kDefaultGridN);
    }
    {
        EnvGuard env("1200");
        EXPECT_EQ(default_grid_n(), 1200);
    }
    {
        EnvGuard env("12x");
        EXPECT_THROW(default_grid_n(), Error);
    }
}
