#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "helmholtz/errors.hpp"

namespace helmholtz {

enum class CoefficientFamily { Constant, ExpApproach, RationalApproach };

enum class Monotonicity { Constant, Nondecreasing, Nonincreasing, None };

const char* to_string(CoefficientFamily family);
const char* to_string(Monotonicity m);

/// Radial coefficient c(r) = c_inf + a*decay(r) with decay(r) = exp(-b r)
/// (ExpApproach) or (1+r)^(-gamma) (RationalApproach). `rate` holds b or gamma.
struct CoefficientFn {
    CoefficientFamily family = CoefficientFamily::Constant;
    double c_inf = 0.0;
    double a = 0.0;
    double rate = 1.0;

    static CoefficientFn constant(double c) { return {CoefficientFamily::Constant, c, 0.0, 1.0}; }
    static CoefficientFn exp_approach(double c_inf, double a, double b) {
        return {CoefficientFamily::ExpApproach, c_inf, a, b};
    }
    static CoefficientFn rational_approach(double c_inf, double a, double gamma) {
        return {CoefficientFamily::RationalApproach, c_inf, a, gamma};
    }

    template <typename Scalar>
    Scalar decay(Scalar r) const {
        using std::exp;
        using std::pow;
        switch (family) {
            case CoefficientFamily::Constant: return Scalar(0);
            case CoefficientFamily::ExpApproach: return exp(-Scalar(rate) * r);
            case CoefficientFamily::RationalApproach: return pow(Scalar(1) + r, -Scalar(rate));
        }
        return Scalar(0);
    }

    template <typename Scalar>
    Scalar value(Scalar r) const {
        if (family == CoefficientFamily::Constant) return Scalar(c_inf);
        return Scalar(c_inf) + Scalar(a) * decay(r);
    }

    template <typename Scalar>
    Scalar derivative(Scalar r) const {
        using std::pow;
        switch (family) {
            case CoefficientFamily::Constant: return Scalar(0);
            case CoefficientFamily::ExpApproach: return -Scalar(a) * Scalar(rate) * decay(r);
            case CoefficientFamily::RationalApproach:
                return -Scalar(a) * Scalar(rate) * pow(Scalar(1) + r, -Scalar(rate) - Scalar(1));
        }
        return Scalar(0);
    }

    double limit() const { return c_inf; }
    bool is_constant() const { return family == CoefficientFamily::Constant || a == 0.0; }

    /// Monotonicity implied by the family and the sign of `a`.
    Monotonicity monotonicity() const;

    /// Throws InvalidSpec for non-finite values or a non-positive rate.
    void check() const;

    bool operator==(const CoefficientFn&) const = default;
};

enum class Family {
    Saturable,        // g1: -lambda z + z/(s + z^2)
    DefocusingPower,  // g2: k^2 z + Q |z|^{p-2} z with Q_inf < 0
    FocusingPower,    // g3: k^2 z + Q |z|^{p-2} z with Q_inf >= 0
    ConcaveConvex,    // lambda |z|^{q-2} z + mu |z|^{p-2} z
    LinearHelmholtz,  // k^2 z
    PureDamping,      // -z
};

const char* to_string(Family family);
std::optional<Family> family_from_string(const std::string& name);

/// One entry of the closed nonlinearity catalog. Only the fields used by
/// `family` are meaningful; the factories below fill them consistently.
struct NonlinearitySpec {
    Family family = Family::LinearHelmholtz;
    CoefficientFn lambda = CoefficientFn::constant(0.0);  // Saturable
    CoefficientFn s = CoefficientFn::constant(1.0);       // Saturable
    CoefficientFn k = CoefficientFn::constant(1.0);       // power families, LinearHelmholtz
    CoefficientFn Q = CoefficientFn::constant(-1.0);      // power families (signed)
    double p = 4.0;                                       // power families, ConcaveConvex
    double q = 1.5;                                       // ConcaveConvex
    double cc_lambda = 1.0;                               // ConcaveConvex
    double mu = 0.0;                                      // ConcaveConvex

    static NonlinearitySpec saturable(CoefficientFn lambda, CoefficientFn s);
    static NonlinearitySpec saturable(double lambda, double s) {
        return saturable(CoefficientFn::constant(lambda), CoefficientFn::constant(s));
    }
    static NonlinearitySpec defocusing_power(CoefficientFn k, CoefficientFn Q, double p);
    static NonlinearitySpec defocusing_power(double k, double p) {
        return defocusing_power(CoefficientFn::constant(k), CoefficientFn::constant(-1.0), p);
    }
    static NonlinearitySpec focusing_power(CoefficientFn k, CoefficientFn Q, double p);
    static NonlinearitySpec focusing_power(double k, double p) {
        return focusing_power(CoefficientFn::constant(k), CoefficientFn::constant(1.0), p);
    }
    static NonlinearitySpec concave_convex(double lambda, double mu, double q, double p);
    static NonlinearitySpec linear_helmholtz(double k);
    static NonlinearitySpec pure_damping();

    bool autonomous() const;

    /// Family constraints (p > 2, s > 0, 1 < q < 2 < p, ...). Throws InvalidSpec.
    void check() const;

    bool operator==(const NonlinearitySpec&) const = default;
};

/// The autonomous spec obtained by replacing every coefficient with its limit.
NonlinearitySpec limit_spec(const NonlinearitySpec& spec);

namespace detail {

// |z|^{e} z, exactly odd in z.
template <typename Scalar>
Scalar signed_power(Scalar z, double e) {
    using std::abs;
    using std::pow;
    if (z == Scalar(0)) return Scalar(0);
    return pow(abs(z), Scalar(e)) * z;
}

}  // namespace detail

template <typename Scalar>
Scalar eval_g(const NonlinearitySpec& spec, Scalar r, Scalar z) {
    switch (spec.family) {
        case Family::Saturable: {
            const Scalar lam = spec.lambda.value(r);
            const Scalar s = spec.s.value(r);
            return -lam * z + z / (s + z * z);
        }
        case Family::DefocusingPower:
        case Family::FocusingPower: {
            const Scalar k = spec.k.value(r);
            return k * k * z + spec.Q.value(r) * detail::signed_power(z, spec.p - 2.0);
        }
        case Family::ConcaveConvex:
            return Scalar(spec.cc_lambda) * detail::signed_power(z, spec.q - 2.0) +
                   Scalar(spec.mu) * detail::signed_power(z, spec.p - 2.0);
        case Family::LinearHelmholtz: {
            const Scalar k = spec.k.value(r);
            return k * k * z;
        }
        case Family::PureDamping: return -z;
    }
    return Scalar(0);
}

/// Primitive in z with G(r, 0) = 0.
template <typename Scalar>
Scalar eval_G(const NonlinearitySpec& spec, Scalar r, Scalar z) {
    using std::abs;
    using std::log1p;
    using std::pow;
    const Scalar z2 = z * z;
    switch (spec.family) {
        case Family::Saturable: {
            const Scalar lam = spec.lambda.value(r);
            const Scalar s = spec.s.value(r);
            return -lam * z2 / Scalar(2) + log1p(z2 / s) / Scalar(2);
        }
        case Family::DefocusingPower:
        case Family::FocusingPower: {
            const Scalar k = spec.k.value(r);
            return k * k * z2 / Scalar(2) + spec.Q.value(r) * pow(abs(z), Scalar(spec.p)) / Scalar(spec.p);
        }
        case Family::ConcaveConvex:
            return Scalar(spec.cc_lambda) * pow(abs(z), Scalar(spec.q)) / Scalar(spec.q) +
                   Scalar(spec.mu) * pow(abs(z), Scalar(spec.p)) / Scalar(spec.p);
        case Family::LinearHelmholtz: {
            const Scalar k = spec.k.value(r);
            return k * k * z2 / Scalar(2);
        }
        case Family::PureDamping: return -z2 / Scalar(2);
    }
    return Scalar(0);
}

/// dg/dz. Infinite at z = 0 for the concave-convex family.
template <typename Scalar>
Scalar eval_dg_dz(const NonlinearitySpec& spec, Scalar r, Scalar z) {
    using std::abs;
    using std::pow;
    switch (spec.family) {
        case Family::Saturable: {
            const Scalar lam = spec.lambda.value(r);
            const Scalar s = spec.s.value(r);
            const Scalar d = s + z * z;
            return -lam + (s - z * z) / (d * d);
        }
        case Family::DefocusingPower:
        case Family::FocusingPower: {
            const Scalar k = spec.k.value(r);
            return k * k + spec.Q.value(r) * Scalar(spec.p - 1.0) * pow(abs(z), Scalar(spec.p - 2.0));
        }
        case Family::ConcaveConvex:
            if (z == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
            return Scalar(spec.cc_lambda * (spec.q - 1.0)) * pow(abs(z), Scalar(spec.q - 2.0)) +
                   Scalar(spec.mu * (spec.p - 1.0)) * pow(abs(z), Scalar(spec.p - 2.0));
        case Family::LinearHelmholtz: {
            const Scalar k = spec.k.value(r);
            return k * k;
        }
        case Family::PureDamping: return Scalar(-1);
    }
    return Scalar(0);
}

/// dg/dr; zero for autonomous families.
template <typename Scalar>
Scalar eval_dg_dr(const NonlinearitySpec& spec, Scalar r, Scalar z) {
    switch (spec.family) {
        case Family::Saturable: {
            const Scalar s = spec.s.value(r);
            const Scalar d = s + z * z;
            return -spec.lambda.derivative(r) * z - spec.s.derivative(r) * z / (d * d);
        }
        case Family::DefocusingPower:
        case Family::FocusingPower:
        case Family::LinearHelmholtz: {
            const Scalar k = spec.k.value(r);
            Scalar out = Scalar(2) * k * spec.k.derivative(r) * z;
            if (spec.family != Family::LinearHelmholtz)
                out += spec.Q.derivative(r) * detail::signed_power(z, spec.p - 2.0);
            return out;
        }
        default: return Scalar(0);
    }
}

/// dG/dr.
template <typename Scalar>
Scalar eval_dG_dr(const NonlinearitySpec& spec, Scalar r, Scalar z) {
    using std::abs;
    using std::pow;
    const Scalar z2 = z * z;
    switch (spec.family) {
        case Family::Saturable: {
            const Scalar s = spec.s.value(r);
            return -spec.lambda.derivative(r) * z2 / Scalar(2) -
                   spec.s.derivative(r) * z2 / (Scalar(2) * s * (s + z2));
        }
        case Family::DefocusingPower:
        case Family::FocusingPower:
        case Family::LinearHelmholtz: {
            const Scalar k = spec.k.value(r);
            Scalar out = k * spec.k.derivative(r) * z2;
            if (spec.family != Family::LinearHelmholtz)
                out += spec.Q.derivative(r) * pow(abs(z), Scalar(spec.p)) / Scalar(spec.p);
            return out;
        }
        default: return Scalar(0);
    }
}

inline double eval_g(const NonlinearitySpec& spec, double r, double z) { return eval_g<double>(spec, r, z); }
inline double eval_G(const NonlinearitySpec& spec, double r, double z) { return eval_G<double>(spec, r, z); }

/// First positive zero of z -> g(r, z) from the closed forms; +infinity when
/// g(r, .) stays positive. Throws HypothesesFail if g'(r, 0) <= 0.
double compute_alpha0(const NonlinearitySpec& spec, double r = 0.0);

/// Bracketing + bisection route to the same root, used as a cross-check and
/// for families without a closed form. Throws NoSignChange when g(r, .) > 0 on
/// (0, z_max].
double numeric_alpha0(const NonlinearitySpec& spec, double r = 0.0, double z_max = 1e6);

enum class CheckStatus { Pass, Fail, NotApplicable };
const char* to_string(CheckStatus status);

struct SlopeCheck {
    CheckStatus status = CheckStatus::NotApplicable;
    double min_slope = 0.0;  // min over sampled r of g'(r, 0)
    double max_slope = 0.0;
};

struct SignChangeCheck {
    CheckStatus status = CheckStatus::NotApplicable;
    double alpha0 = 0.0;  // may be +infinity
};

struct CoefficientCheck {
    std::string name;
    Monotonicity required = Monotonicity::None;
    Monotonicity declared = Monotonicity::None;
    bool numeric_agrees = true;
    CheckStatus status = CheckStatus::NotApplicable;
};

/// The window [-alpha_lower, alpha_upper] together with growth constants
/// lambda z^2 <= g_inf(z) z <= g(r, z) z <= Lambda z^2.
struct GrowthWindow {
    double reference_alpha = 0.0;
    double alpha_lower = 0.0;
    double alpha_upper = 0.0;
    double lambda = 0.0;
    double Lambda = 0.0;
    bool holds = false;
};

struct HypothesisReport {
    CheckStatus oddness = CheckStatus::NotApplicable;
    SlopeCheck positive_slope_at_zero;
    SignChangeCheck sign_change;
    std::vector<CoefficientCheck> coefficients;
    CheckStatus coefficient_monotonicity = CheckStatus::NotApplicable;
    CheckStatus radial_sign = CheckStatus::NotApplicable;  // g_r(r,z) z <= 0
    std::optional<GrowthWindow> growth_window;
    std::vector<std::string> notes;

    bool all_pass() const;
};

struct SampleGrid {
    int r_count = 512;
    double r_max = 1e3;
    int z_count = 512;
};

HypothesisReport validate_spec(const NonlinearitySpec& spec, const SampleGrid& grid = {});

/// Growth window of the nonautonomous theory for a given center value alpha,
/// with alpha_lower = alpha_upper chosen so that G_inf(alpha_upper) = G(0, alpha).
/// Empty when alpha lies outside the admissible interval.
std::optional<GrowthWindow> growth_window(const NonlinearitySpec& spec, double alpha, const SampleGrid& grid = {});

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return lo < x && x < hi; }
    bool is_real_line() const { return std::isinf(lo) && std::isinf(hi); }
};

/// Open interval I of center values containing 0 for which the continuum of
/// oscillating solutions exists: (-alpha0, alpha0) in the autonomous case,
/// otherwise the component of {alpha : G(0, alpha) < sup G_inf} around 0.
Interval admissible_interval(const NonlinearitySpec& spec);

}  // namespace helmholtz
