#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "helmholtz/domain_approx.hpp"

#include "../support/oracles.hpp"

using namespace helmholtz;

namespace {

const NonlinearitySpec g2 = NonlinearitySpec::defocusing_power(1.0, 4.0);

}  // namespace

TEST_CASE("mesh volume and symmetry") {
    for (int N : {1, 2, 3, 4}) {
        const RadialMesh mesh = assemble(N, 2.0, 128);
        CHECK(mesh.volume() == doctest::Approx(ball_volume(N, 2.0)).epsilon(1e-12));
        const Eigen::MatrixXd S(mesh.stiffness);
        CHECK((S - S.transpose()).norm() == 0.0);
    }
    CHECK(ball_volume(3, 2.0) == doctest::Approx(4.0 * std::numbers::pi * 8.0 / 3.0));
    CHECK(ball_volume(1, 2.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(assemble(3, 1.0, 63), InvalidConfig);
    CHECK_THROWS_AS(assemble(0, 1.0, 64), InvalidConfig);
    CHECK_THROWS_AS(assemble(3, -1.0, 64), InvalidConfig);
}

TEST_CASE("first eigenvalue oracles") {
    CHECK(lambda1(assemble(3, std::numbers::pi, 512)) == doctest::Approx(1.0).epsilon(1e-3));
    const double j01 = oracle::bessel_j0_first_zero();
    CHECK(j01 == doctest::Approx(2.404825557695773).epsilon(1e-14));
    CHECK(lambda1(assemble(2, 1.0, 512)) == doctest::Approx(j01 * j01).epsilon(1e-2 / (j01 * j01)));
    const double R = 1.5;
    const double ref = std::pow(std::numbers::pi / (2 * R), 2);
    CHECK(std::abs(lambda1(assemble(1, R, 512)) - ref) <= 1e-3);
}

TEST_CASE("eigenpair residual and eigenvector") {
    const EigenPair e = first_eigenpair(assemble(3, 2.0, 256));
    CHECK(e.residual <= 1e-10);
    CHECK(e.vector.maxCoeff() == 1.0);
    CHECK(e.vector.minCoeff() > 0.0);
}

TEST_CASE("eigenvalue scales like R^-2") {
    for (int N : {1, 2, 3}) {
        const double a = lambda1(assemble(N, 1.0, 300));
        const double b = lambda1(assemble(N, 2.0, 300));
        CHECK(std::abs(b - a / 4) <= 1e-10);
    }
}

TEST_CASE("subcritical ball gives the zero minimizer") {
    const MinimizerResult res = minimize_energy(assemble(3, 2.0, 256), g2);
    CHECK(res.converged);
    CHECK(res.energy == 0.0);
    CHECK(res.u.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nontrivial minimizer on R = 8") {
    const RadialMesh mesh = assemble(3, 8.0, 1024);
    const MinimizerResult res = minimize_energy(mesh, g2);
    CHECK(res.converged);
    CHECK(res.energy < 0.0);
    CHECK(res.u.minCoeff() > 0.0);
    CHECK(res.u.maxCoeff() < 1.0);
    CHECK(res.el_residual <= 1e-6);
    CHECK(res.energy_nonincreasing);
    for (std::size_t i = 1; i < res.energy_history.size(); ++i)
        CHECK(res.energy_history[i] <= res.energy_history[i - 1]);
    CHECK(res.energy == doctest::Approx(discrete_energy(mesh, g2, res.u)));
    // the minimizer is radially decreasing
    for (Eigen::Index i = 1; i < res.u.size(); ++i) CHECK(res.u(i) <= res.u(i - 1));

    const MinimizerResult fine = minimize_energy(assemble(3, 8.0, 8192), g2);
    CHECK(std::abs(fine.u_center - res.u_center) <= 1e-3);
}

TEST_CASE("mesh convergence of the center value is second order") {
    std::vector<double> uc;
    for (int m : {128, 256, 512, 1024}) uc.push_back(minimize_energy(assemble(3, 5.0, m), g2).u_center);
    const double r1 = (uc[1] - uc[0]) / (uc[2] - uc[1]);
    const double r2 = (uc[2] - uc[1]) / (uc[3] - uc[2]);
    CHECK(r1 == doctest::Approx(4.0).epsilon(0.1));
    CHECK(r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("nontrivial minimizer exactly when g'(0) > lambda1") {
    // lambda1(B_R) = (pi/R)^2 in three dimensions, critical radius pi
    for (double R : {2.5, 2.9, 3.05, 3.3, 3.6, 4.0}) {
        const RadialMesh mesh = assemble(3, R, 512);
        const MinimizerResult res = minimize_energy(mesh, g2);
        CAPTURE(R);
        if (res.lambda1 < 1.0) {
            CHECK(res.u_center > 1e-3);
            CHECK(res.energy < 0.0);
        } else {
            CHECK(res.u.cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("minimizer rejects unsuitable specs") {
    const RadialMesh mesh = assemble(3, 4.0, 128);
    CHECK_THROWS_AS(minimize_energy(mesh, NonlinearitySpec::focusing_power(1.0, 4.0)), HypothesesFail);
    const auto na = NonlinearitySpec::defocusing_power(CoefficientFn::exp_approach(1.0, 1.0, 1.0),
                                                       CoefficientFn::constant(-1.0), 4.0);
    CHECK_THROWS_AS(minimize_energy(mesh, na), HypothesesFail);
    CHECK_THROWS_AS(minimize_energy(mesh, g2, Eigen::VectorXd::Zero(5)), InvalidConfig);
}

TEST_CASE("explicit start is clamped into the box") {
    const RadialMesh mesh = assemble(3, 6.0, 256);
    const MinimizerResult a = minimize_energy(mesh, g2, Eigen::VectorXd::Constant(256, 5.0));
    const MinimizerResult b = minimize_energy(mesh, g2);
    CHECK(a.converged);
    CHECK(a.u.maxCoeff() <= 1.0);
    CHECK(a.u_center == doctest::Approx(b.u_center).epsilon(1e-6));
}

TEST_CASE("domain study trends") {
    const DomainStudy s = domain_limit_study(g2, 3, {4.0, 8.0, 16.0}, 64.0, 2);
    REQUIRE(s.rows.size() == 3);
    CHECK(s.u_center_increasing);
    CHECK(s.energy_decreasing_negative);
    CHECK(s.norms_increasing);
    CHECK(s.alpha0 == 1.0);
    CHECK_THROWS_AS(domain_limit_study(g2, 3, {2.0, 8.0}, 64.0), InvalidConfig);
}
