#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "helmholtz/diagnostics.hpp"

using namespace helmholtz;

namespace {

const NonlinearitySpec g1 = NonlinearitySpec::saturable(0.25, 2.0);
const NonlinearitySpec g2 = NonlinearitySpec::defocusing_power(1.0, 4.0);
const NonlinearitySpec g3 = NonlinearitySpec::focusing_power(1.0, 4.0);

SolveConfig config(int N, double alpha, double r_max) {
    SolveConfig cfg;
    cfg.N = N;
    cfg.alpha = alpha;
    cfg.r_max = r_max;
    return cfg;
}

}  // namespace

TEST_CASE("Z is non-increasing for random center values") {
    std::mt19937_64 rng(2024);
    for (const auto& spec : {g1, g2}) {
        const double a0 = compute_alpha0(spec);
        std::uniform_real_distribution<double> dist(-a0, a0);
        for (int N : {2, 3, 5}) {
            for (int i = 0; i < 8; ++i) {
                const double a = dist(rng);
                const Trajectory traj = integrate(spec, config(N, a, 150.0));
                const ZMonotoneReport z = check_Z_monotone(compute_monitors(traj, spec, N), N);
                CHECK(z.pass);
            }
        }
    }
}

TEST_CASE("Z is conserved in one dimension") {
    const Trajectory traj = integrate(g2, config(1, 0.8, 100.0));
    const ZMonotoneReport z = check_Z_monotone(compute_monitors(traj, g2, 1), 1);
    CHECK(z.conservation);
    CHECK(z.pass);
}

TEST_CASE("monitor series definitions") {
    const Trajectory traj = integrate(g2, config(3, 0.5, 20.0));
    const MonitorSeries mon = compute_monitors(traj, g2, 3);
    for (std::size_t i = 0; i < traj.size(); i += 13) {
        const double r = traj.r[i];
        const double u = traj.u(i);
        const double du = traj.du(i);
        CHECK(mon.Z[i] == doctest::Approx(du * du + 2 * eval_G(g2, r, u)));
        CHECK(mon.v[i] == doctest::Approx(r * u));
        CHECK(mon.dv[i] == doctest::Approx(u + r * du));
        CHECK(mon.psi[i] == doctest::Approx(mon.dv[i] * mon.dv[i] + 2 * r * r * eval_G(g2, r, u)));
    }
}

TEST_CASE("oscillation chain and sup bounds") {
    for (const auto& spec : {g1, g2}) {
        const Trajectory traj = integrate(spec, config(3, 0.5, 200.0));
        const ChainReport rep = check_oscillation_chain(traj, spec);
        CHECK(rep.pass);
        CHECK(rep.chain.size() >= 20);
        CHECK(rep.sup_u_ok);
        CHECK(rep.sup_du_ok);
        CHECK(rep.chain.front() == doctest::Approx(2 * eval_G(spec, 0.0, 0.5)));
    }
    const Trajectory flat = integrate(g2, config(3, 0.0, 10.0));
    CHECK_THROWS_AS(check_oscillation_chain(flat, g2), TooFewEvents);
}

TEST_CASE("decay fit") {
    const Trajectory traj = integrate(g2, config(3, 0.5, 1000.0));
    const DecayFit fit = fit_decay_exponent(traj, 3, 100.0, -1.0, &g2);
    CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(0.01));
    CHECK(fit.c_low > 0.0);
    CHECK(fit.C_high >= fit.c_low);
    REQUIRE(fit.triple_low);
    CHECK(*fit.triple_low > 0.0);
    CHECK(*fit.triple_high >= *fit.triple_low);
    CHECK_THROWS_AS(fit_decay_exponent(traj, 3, 0.5), InsufficientRange);
    CHECK_THROWS_AS(fit_decay_exponent(traj, 3, 990.0), InsufficientRange);
}

TEST_CASE("psi stays bounded") {
    const Trajectory traj = integrate(g3, config(3, 1.0, 1000.0));
    const PsiReport rep = check_psi_bounded(compute_monitors(traj, g3, 3), 100.0);
    CHECK(rep.pass);
    CHECK(rep.ratio <= 1.5);
    CHECK_THROWS_AS(check_psi_bounded(compute_monitors(traj, g3, 3), 200.0), InsufficientRange);
}

TEST_CASE("classification tree") {
    auto verdict = [](const NonlinearitySpec& spec, int N, double a, double r_max = 200.0) {
        const SolveConfig cfg = config(N, a, r_max);
        return classify(integrate(spec, cfg), spec, cfg).verdict;
    };
    CHECK(verdict(g2, 3, 0.0) == Verdict::ConstantZero);
    CHECK(verdict(g2, 3, 1.0) == Verdict::ConstantAlpha0);
    CHECK(verdict(g2, 3, -1.0) == Verdict::ConstantAlpha0);
    CHECK(verdict(g2, 3, 1.2) == Verdict::Blowup);
    CHECK(verdict(g2, 3, 0.5) == Verdict::OscillatingLocalized);
    CHECK(verdict(g2, 1, 0.5) == Verdict::Periodic);
    CHECK(verdict(g2, 3, 0.5, 5.0) == Verdict::Undetermined);
    CHECK(verdict(g3, 2, 3.0) == Verdict::OscillatingLocalized);
}

TEST_CASE("period of the harmonic oscillator") {
    const Trajectory traj = integrate(NonlinearitySpec::linear_helmholtz(1.0), config(1, 1.0, 100.0));
    CHECK(estimate_period(traj) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-10));
    const Trajectory damped = integrate(g2, config(3, 0.5, 100.0));
    CHECK_THROWS_AS(estimate_period(damped), NotPeriodic);
}

TEST_CASE("period grows with amplitude for the defocusing cubic") {
    auto period = [](double a) { return estimate_period(integrate(g2, config(1, a, 200.0))); };
    CHECK(period(0.9) > 2 * std::numbers::pi);
    CHECK(period(0.9) > period(0.5));
    CHECK(period(1e-3) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-5));
}

TEST_CASE("antisymmetry about zeros in one dimension") {
    for (double a : {0.3, 0.7, 0.95}) {
        const Trajectory traj = integrate(g2, config(1, a, 60.0));
        CHECK(antisymmetry_defect(traj) <= 1e-8);
    }
}

TEST_CASE("Sturm coefficient stays positive") {
    for (const auto& spec : {g1, g2}) {
        const double a0 = compute_alpha0(spec);
        for (int N : {2, 3}) {
            const Trajectory traj = integrate(spec, config(N, 0.5 * a0, 100.0));
            const auto c = sturm_coefficient_min(traj, spec);
            REQUIRE(c);
            CHECK(*c > 0.0);
        }
        // N = 4 carries -3/(4 r^2), which g(u)/u ~ g'(0) dominates only further out.
        const Trajectory traj = integrate(spec, config(4, 0.5 * a0, 100.0));
        const auto c = sturm_coefficient_min(traj, spec, 3.0);
        REQUIRE(c);
        CHECK(*c > 0.0);
    }
}
