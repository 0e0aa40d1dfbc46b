#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "helmholtz/continuum.hpp"

using namespace helmholtz;

namespace {

const NonlinearitySpec g1 = NonlinearitySpec::saturable(0.25, 2.0);
const NonlinearitySpec g2 = NonlinearitySpec::defocusing_power(1.0, 4.0);
const NonlinearitySpec g3 = NonlinearitySpec::focusing_power(1.0, 4.0);

SolveConfig config(double r_max = 200.0) {
    SolveConfig cfg;
    cfg.r_max = r_max;
    return cfg;
}

}  // namespace

TEST_CASE("default alphas cluster at both ends of (0, alpha0)") {
    const auto a = default_alphas(1.0);
    REQUIRE(a.size() == 33);
    CHECK(a.front() == doctest::Approx(1e-3));
    CHECK(a.back() == doctest::Approx(1 - 1e-3));
    CHECK(a[16] == doctest::Approx(0.5));
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] > a[i - 1]);
}

TEST_CASE("sweep verdicts across the threshold") {
    const SweepResult res = sweep_alpha(g2, 3, {0.9, 0.1, 0.5, 0.0, 1.1, 1.5, 0.3, 0.7}, config());
    REQUIRE(res.rows.size() == 8);
    for (std::size_t i = 1; i < res.rows.size(); ++i) CHECK(res.rows[i].alpha > res.rows[i - 1].alpha);
    for (const auto& row : res.rows) {
        CHECK(row.error.empty());
        if (row.alpha == 0.0) {
            CHECK(row.verdict == Verdict::ConstantZero);
            CHECK_FALSE(row.first_zero);
        } else if (row.alpha < 1.0) {
            CHECK(row.verdict == Verdict::OscillatingLocalized);
            CHECK(std::abs(row.sup_u - row.alpha) <= 1e-8);
            CHECK(row.sup_du <= std::sqrt(2 * eval_G(g2, 0.0, row.alpha)) + 1e-8);
            REQUIRE(row.decay_exponent);
            CHECK(*row.decay_exponent == doctest::Approx(-1.0).epsilon(0.05));
        } else {
            CHECK(row.verdict == Verdict::Blowup);
        }
    }
    REQUIRE(res.first_zero_lipschitz);
    CHECK(*res.first_zero_lipschitz < 10.0);
}

TEST_CASE("sweep over -alpha mirrors the sweep over alpha") {
    const std::vector<double> alphas{0.2, 0.4, 0.6, 0.8};
    std::vector<double> neg;
    for (double a : alphas) neg.push_back(-a);
    const SweepResult pos = sweep_alpha(g1, 2, alphas, config());
    const SweepResult mir = sweep_alpha(g1, 2, neg, config());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const auto& p = pos.rows[i];
        const auto& m = mir.rows[alphas.size() - 1 - i];
        CHECK(m.alpha == -p.alpha);
        CHECK(m.verdict == p.verdict);
        CHECK(m.zero_count == p.zero_count);
        CHECK(*m.first_zero == doctest::Approx(*p.first_zero).epsilon(1e-14));
        CHECK(m.sup_du == p.sup_du);
    }
}

TEST_CASE("parallel sweep equals the serial sweep") {
    const auto alphas = default_alphas(1.0, 12);
    const SweepResult a = sweep_alpha(g2, 3, alphas, config(), 1);
    const SweepResult b = sweep_alpha(g2, 3, alphas, config(), 4);
    CHECK(a.spec_digest == b.spec_digest);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        CHECK(a.rows[i].first_zero == b.rows[i].first_zero);
        CHECK(a.rows[i].Z_final == b.rows[i].Z_final);
    }
}

TEST_CASE("spec digest identifies spec and settings") {
    const std::string d = spec_digest(g2, 3, config());
    CHECK(d.size() == 16);
    CHECK(d == spec_digest(g2, 3, config()));
    CHECK(d != spec_digest(g2, 2, config()));
    CHECK(d != spec_digest(g1, 3, config()));
    CHECK(d != spec_digest(g2, 3, config(100.0)));
}

TEST_CASE("threshold bracket contains the closed-form alpha0") {
    const ThresholdBracket br = bracket_threshold(g2, 3, config(100.0));
    CHECK(br.lo <= 1.0);
    CHECK(br.hi >= 1.0);
    CHECK(br.hi - br.lo <= 1e-6);
    CHECK(br.agrees);
    const ThresholdBracket b1 = bracket_threshold(g1, 2, config(100.0));
    CHECK(b1.lo <= std::sqrt(2.0) + 1e-12);
    CHECK(b1.hi >= std::sqrt(2.0) - 1e-12);
}

TEST_CASE("no bracket without a blow-up regime") {
    CHECK_THROWS_AS(bracket_threshold(g3, 3, config(100.0)), NoBracket);
}

TEST_CASE("first zero increases with alpha") {
    const FirstZeroReport rep = first_zero_monotonicity(g2, 3, {0.1, 0.5, 0.9}, config(50.0));
    CHECK(rep.strictly_increasing);
    CHECK_FALSE(rep.offending);
    const FirstZeroReport small = first_zero_monotonicity(g2, 3, {1e-4}, config(10.0));
    CHECK(small.first_zeros[0] == doctest::Approx(std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("first zero is constant for the linear equation") {
    const FirstZeroReport rep =
        first_zero_monotonicity(NonlinearitySpec::linear_helmholtz(1.0), 3, {0.1, 1.0, 10.0}, config(10.0));
    CHECK_FALSE(rep.strictly_increasing);
    for (double z : rep.first_zeros) CHECK(z == doctest::Approx(std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("first-zero monotonicity needs g(z)/z nonincreasing") {
    CHECK_THROWS_AS(first_zero_monotonicity(g3, 3, {0.5, 1.0}, config(50.0)), HypothesesFail);
}
