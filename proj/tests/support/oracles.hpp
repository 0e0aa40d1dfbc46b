#pragma once

// Reference values computed independently of the library.

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

/// J0 by its power series in 100-digit arithmetic, accurate for r <= 100.
inline double bessel_j0(double r) {
    using big = boost::multiprecision::cpp_bin_float_100;
    const big x2 = big(r) * big(r) / 4;
    big term = 1;
    big sum = 1;
    for (int k = 1; k < 400; ++k) {
        term *= -x2 / (big(k) * big(k));
        sum += term;
        if (abs(term) < big("1e-60")) break;
    }
    return static_cast<double>(sum);
}

/// -J1, the derivative of J0, by its series.
inline double bessel_j0_prime(double r) {
    using big = boost::multiprecision::cpp_bin_float_100;
    const big x2 = big(r) * big(r) / 4;
    big term = big(r) / 2;
    big sum = term;
    for (int k = 1; k < 400; ++k) {
        term *= -x2 / (big(k) * big(k + 1));
        sum += term;
        if (abs(term) < big("1e-60")) break;
    }
    return -static_cast<double>(sum);
}

/// First positive zero of J0 by TOMS 748 on [2, 3].
inline double bessel_j0_first_zero() {
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve([](double x) { return bessel_j0(x); }, 2.0, 3.0, tol, iters);
    return 0.5 * (a + b);
}

/// Period of u'' + u - u^3 = 0 with u(0) = alpha, u'(0) = 0:
/// T = 4 int_0^alpha dz / sqrt(2 (G(alpha) - G(z))), G(z) = z^2/2 - z^4/4.
/// With z = alpha sin(t) the integrand becomes 4 / sqrt(1 - alpha^2 (1 + sin^2 t) / 2).
inline double cubic_period(double alpha) {
    auto f = [alpha](double t) {
        const double s = std::sin(t);
        return 4.0 / std::sqrt(1.0 - alpha * alpha * (1.0 + s * s) / 2.0);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 15, 1e-14);
}

}  // namespace oracle
