#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "semsched/errors.hpp"
#include "semsched/kernels.hpp"
#include "semsched/oracle.hpp"
#include "test_support.hpp"

using namespace semsched;
using namespace semsched::testsupport;

TEST_CASE("lyapunov solve: hand-checked diagonal case") {
    const auto sigma = lyapunov_solve(demo_system_2());
    CHECK(sigma(0, 0) == doctest::Approx(17.5).epsilon(1e-12));
    CHECK(sigma(1, 1) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(sigma(0, 1) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(sigma(1, 0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("lyapunov solve: scalar case") {
    const auto sigma = lyapunov_solve(scalar_system(-0.5, 1.0));
    CHECK(sigma(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lyapunov solve rejects resonant drift") {
    Eigen::MatrixXd a(2, 2), d(2, 2);
    a << 1.0, 0.0, 0.0, -1.0;
    d << 1.0, 0.0, 0.0, 1.0;
    CHECK_THROWS_AS((void)lyapunov_solve(make_system(a, d)), SingularSystemError);
}

TEST_CASE("oracle triangle: sigma == -upsilon on random systems") {
    Rng rng(321);
    for (int i = 0; i < 30; ++i) {
        const auto sys = random_system(rng, 1 + i % 5, i % 2 == 0);
        const auto k = compute_kernels(spectral_decompose(sys), sys);
        const auto sigma = lyapunov_solve(sys);
        const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
        CHECK((sigma + k.upsilon.real()).cwiseAbs().maxCoeff() / scale < 1e-8);
    }
}

TEST_CASE("quadrature: scalar closed form and degenerate interval") {
    const auto sys = scalar_system(-0.5, 1.0);
    CHECK(quadrature_L(sys, 0.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(quadrature_L(sys, 2.5, 2.5) == 0.0);
}

TEST_CASE("quadrature is additive over split points") {
    Rng rng(11);
    for (int i = 0; i < 6; ++i) {
        const auto sys = random_system(rng, 1 + i % 3, i % 2 == 0);
        const double a = rng.uniform();
        const double b = a + rng.uniform() * 2.0;
        const double c = b + rng.uniform() * 2.0;
        const double whole = quadrature_L(sys, a, c);
        const double split = quadrature_L(sys, a, b) + quadrature_L(sys, b, c);
        CHECK(whole == doctest::Approx(split).epsilon(1e-9));
    }
}

TEST_CASE("trajectory oracle: no deliveries saturates at the Lyapunov trace") {
    const auto sys = scalar_system(-0.5, 1.0);
    TrajectoryConfig tc;
    tc.horizon = 400.0;
    tc.step = 0.02;
    tc.trials = 24;
    tc.seed = 7;
    const auto mc = monte_carlo_mse({sys}, {}, tc);
    // time average over [0, T] of 1 - e^{-t} is 1 - (1 - e^{-T})/T
    const double expected = 1.0 - (1.0 - std::exp(-tc.horizon)) / tc.horizon;
    CHECK(std::abs(mc.mse[0] - expected) < 3.0 * mc.stderr_mse[0] + 0.01);
}

TEST_CASE("trajectory oracle: aging ramp integrates to the closed form") {
    const auto sys = scalar_system(-0.5, 1.0);
    // variance at age t is 1 - e^{-t}; its time average over [0, 1] is e^{-1}
    TrajectoryConfig tc;
    tc.horizon = 1.0;
    tc.step = 0.01;
    tc.trials = 4000;
    tc.seed = 12;
    tc.check_step = false;
    const auto mc = monte_carlo_mse({sys}, {}, tc);
    CHECK(std::abs(mc.mse[0] - std::exp(-1.0)) < 3.0 * mc.stderr_mse[0] + 0.005);
    CHECK(instantaneous_mse(compute_kernels(spectral_decompose(sys), sys), 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("trajectory oracle converges under step halving") {
    const auto sys = demo_system_2();
    TrajectoryConfig tc;
    tc.horizon = 60.0;
    tc.step = 0.02;
    tc.trials = 12;
    tc.seed = 3;
    tc.check_step = true;  // throws StepTooCoarseError on divergence
    CHECK_NOTHROW((void)monte_carlo_mse({sys}, {}, tc));
}

TEST_CASE("trajectory oracle: serial and parallel paths are identical") {
    const auto sys = demo_system_2();
    std::vector<DeliveryEvent> trace;
    for (int i = 0; i < 20; ++i)
        trace.push_back({0, 2.0 * i, 2.0 * i + 1.0});
    TrajectoryConfig tc;
    tc.horizon = 42.0;
    tc.step = 0.05;
    tc.trials = 6;
    tc.seed = 9;
    tc.check_step = false;
    const auto serial = monte_carlo_mse({sys}, trace, tc, ExecPolicy::Serial);
    const auto parallel = monte_carlo_mse({sys}, trace, tc, ExecPolicy::Parallel);
    CHECK(serial.mse == parallel.mse);
    CHECK(serial.stderr_mse == parallel.stderr_mse);
}
