#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "helmholtz/radial_ivp.hpp"

#include "../support/oracles.hpp"

using namespace helmholtz;

namespace {

const NonlinearitySpec g2 = NonlinearitySpec::defocusing_power(1.0, 4.0);
const NonlinearitySpec lin = NonlinearitySpec::linear_helmholtz(1.0);

SolveConfig config(int N, double alpha, double r_max) {
    SolveConfig cfg;
    cfg.N = N;
    cfg.alpha = alpha;
    cfg.r_max = r_max;
    return cfg;
}

}  // namespace

TEST_CASE("series start matches the Taylor expansion") {
    const SolveConfig cfg = config(3, 0.5, 10.0);
    const auto y = taylor_start<double>(g2, cfg);
    const double g0 = 0.5 - 0.125;
    CHECK(y(0) == doctest::Approx(0.5 - g0 * 1e-8 / 6.0).epsilon(1e-15));
    CHECK(y(1) == doctest::Approx(-g0 * 1e-4 / 3.0).epsilon(1e-15));
}

TEST_CASE("sinc solution in three dimensions") {
    const Trajectory traj = integrate(lin, config(3, 2.0, 60.0));
    CHECK(traj.terminated_by == Termination::ReachedRmax);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double r = traj.r[i];
        CHECK(std::abs(traj.u(i) - 2.0 * std::sin(r) / r) <= 1e-8 * (1.0 + r));
    }
    for (std::size_t n = 1; n <= traj.zeros.size(); ++n)
        CHECK(traj.zeros[n - 1] == doctest::Approx(n * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("dense output between nodes") {
    const Trajectory traj = integrate(lin, config(3, 1.0, 30.0));
    double worst = 0.0;
    for (double r = 0.01; r < 30.0; r += 0.0137) {
        const auto y = traj.evaluate(r);
        worst = std::max(worst, std::abs(y(0) - std::sin(r) / r));
        worst = std::max(worst, std::abs(y(1) - (r * std::cos(r) - std::sin(r)) / (r * r)));
    }
    CHECK(worst <= 1e-9);
    CHECK_THROWS_AS(traj.evaluate(31.0), OutOfRange);
    CHECK_THROWS_AS(traj.evaluate(0.0), OutOfRange);
}

TEST_CASE("J0 in two dimensions") {
    const Trajectory traj = integrate(lin, config(2, 1.0, 40.0));
    for (std::size_t i = 0; i < traj.size(); i += 7) {
        CHECK(std::abs(traj.u(i) - oracle::bessel_j0(traj.r[i])) <= 1e-8);
        CHECK(std::abs(traj.du(i) - oracle::bessel_j0_prime(traj.r[i])) <= 1e-8);
    }
    CHECK(traj.zeros.front() == doctest::Approx(oracle::bessel_j0_first_zero()).epsilon(1e-10));
}

TEST_CASE("cosine in one dimension") {
    const Trajectory traj = integrate(lin, config(1, 1.0, 40.0));
    for (std::size_t i = 0; i < traj.size(); ++i) CHECK(std::abs(traj.u(i) - std::cos(traj.r[i])) <= 1e-8);
}

TEST_CASE("events are refined and alternate") {
    const Trajectory traj = integrate(g2, config(3, 0.6, 100.0));
    for (double z : traj.zeros) CHECK(std::abs(traj.evaluate(z)(0)) <= 1e-10);
    for (const auto& c : traj.criticals) CHECK(std::abs(c.du) <= 1e-10);
    const auto ev = traj.events();
    REQUIRE(ev.size() > 10);
    for (std::size_t i = 1; i < ev.size(); ++i) {
        CHECK(ev[i].r > ev[i - 1].r);
        CHECK((ev[i].kind == EventKind::Zero) != (ev[i - 1].kind == EventKind::Zero));
    }
}

TEST_CASE("sign symmetry alpha -> -alpha") {
    const Trajectory a = integrate(g2, config(3, 0.7, 80.0));
    const Trajectory b = integrate(g2, config(3, -0.7, 80.0));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.r[i] == b.r[i]);
        CHECK(a.u(i) == -b.u(i));
    }
    REQUIRE(a.zeros.size() == b.zeros.size());
    for (std::size_t i = 0; i < a.zeros.size(); ++i) CHECK(a.zeros[i] == doctest::Approx(b.zeros[i]).epsilon(1e-14));
}

TEST_CASE("equilibria are returned exactly") {
    const Trajectory zero = integrate(g2, config(3, 0.0, 50.0));
    CHECK(zero.equilibrium);
    const Trajectory top = integrate(g2, config(3, 1.0, 50.0));
    CHECK(top.equilibrium);
    for (std::size_t i = 0; i < top.size(); ++i) CHECK(top.u(i) == 1.0);
    CHECK(top.zeros.empty());
}

TEST_CASE("blow-up above alpha0") {
    const Trajectory traj = integrate(g2, config(3, 1.5, 50.0));
    CHECK(traj.terminated_by == Termination::Blowup);
    CHECK(traj.r_end() < 5.0);
    CHECK(traj.zeros.empty());
}

TEST_CASE("long double instantiation agrees") {
    const SolveConfig cfg = config(3, 0.5, 40.0);
    const Trajectory d = integrate(g2, cfg);
    const auto ld = integrate<long double>(g2, cfg);
    REQUIRE(ld.zeros.size() == d.zeros.size());
    for (std::size_t i = 0; i < d.zeros.size(); ++i)
        CHECK(static_cast<double>(ld.zeros[i]) == doctest::Approx(d.zeros[i]).epsilon(1e-8));
}

TEST_CASE("invalid configurations") {
    CHECK_THROWS_AS(integrate(g2, config(0, 0.5, 10.0)), InvalidConfig);
    CHECK_THROWS_AS(integrate(g2, config(3, 0.5, 1e-5)), InvalidConfig);
    SolveConfig cfg = config(3, 0.5, 10.0);
    cfg.rtol = 1e-16;
    CHECK_THROWS_AS(integrate(g2, cfg), InvalidConfig);
    cfg = config(3, std::nan(""), 10.0);
    CHECK_THROWS_AS(integrate(g2, cfg), InvalidConfig);
}
