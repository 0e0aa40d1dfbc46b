#include "helmholtz/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace helmholtz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> radial_samples(const SampleGrid& grid) {
    // r = 0 followed by log-spaced radii in [1e-3, r_max].
    std::vector<double> rs;
    rs.reserve(static_cast<std::size_t>(grid.r_count));
    rs.push_back(0.0);
    const int n = std::max(grid.r_count - 1, 1);
    const double lo = std::log(1e-3);
    const double hi = std::log(grid.r_max);
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? 1.0 : static_cast<double>(i) / (n - 1);
        rs.push_back(std::exp(lo + t * (hi - lo)));
    }
    return rs;
}

std::vector<double> window_samples(double z_hi, int count) {
    std::vector<double> zs;
    zs.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) zs.push_back(z_hi * static_cast<double>(i) / count);
    return zs;
}

Monotonicity numeric_monotonicity(const CoefficientFn& c, const std::vector<double>& rs) {
    bool up = false;
    bool down = false;
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const double d = c.value(rs[i]) - c.value(rs[i - 1]);
        if (d > 0.0) up = true;
        if (d < 0.0) down = true;
    }
    if (up && down) return Monotonicity::None;
    if (up) return Monotonicity::Nondecreasing;
    if (down) return Monotonicity::Nonincreasing;
    return Monotonicity::Constant;
}

bool satisfies(Monotonicity declared, Monotonicity required) {
    if (required == Monotonicity::None) return true;
    if (declared == Monotonicity::Constant) return true;
    return declared == required;
}

// sup of G_inf over the real line: G_inf(alpha0_inf), or +infinity.
double sup_G_inf(const NonlinearitySpec& base) {
    const double a0 = compute_alpha0(base, 0.0);
    if (std::isinf(a0)) return kInf;
    return eval_G(base, 0.0, a0);
}

// Smallest z > 0 with f(z) >= 0 for increasing-from-negative f, searched on a
// geometric grid and refined by bisection. Returns +infinity if none <= z_max.
template <typename F>
double first_crossing(F f, double z_start, double z_max) {
    double lo = 0.0;
    double hi = z_start;
    while (f(hi) < 0.0) {
        lo = hi;
        hi *= 1.02;
        if (hi > z_max) return kInf;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

}  // namespace

const char* to_string(CoefficientFamily family) {
    switch (family) {
        case CoefficientFamily::Constant: return "constant";
        case CoefficientFamily::ExpApproach: return "exp_approach";
        case CoefficientFamily::RationalApproach: return "rational_approach";
    }
    return "?";
}

const char* to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::Constant: return "constant";
        case Monotonicity::Nondecreasing: return "nondecreasing";
        case Monotonicity::Nonincreasing: return "nonincreasing";
        case Monotonicity::None: return "none";
    }
    return "?";
}

const char* to_string(Family family) {
    switch (family) {
        case Family::Saturable: return "saturable";
        case Family::DefocusingPower: return "defocusing_power";
        case Family::FocusingPower: return "focusing_power";
        case Family::ConcaveConvex: return "concave_convex";
        case Family::LinearHelmholtz: return "linear_helmholtz";
        case Family::PureDamping: return "pure_damping";
    }
    return "?";
}

std::optional<Family> family_from_string(const std::string& name) {
    for (Family f : {Family::Saturable, Family::DefocusingPower, Family::FocusingPower, Family::ConcaveConvex,
                     Family::LinearHelmholtz, Family::PureDamping}) {
        if (name == to_string(f)) return f;
    }
    if (name == "g1") return Family::Saturable;
    if (name == "g2") return Family::DefocusingPower;
    if (name == "g3") return Family::FocusingPower;
    if (name == "g4") return Family::ConcaveConvex;
    return std::nullopt;
}

const char* to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::NotApplicable: return "n/a";
    }
    return "?";
}

Monotonicity CoefficientFn::monotonicity() const {
    if (is_constant()) return Monotonicity::Constant;
    // Both decay factors are strictly decreasing, so c' has the sign of -a.
    return a > 0.0 ? Monotonicity::Nonincreasing : Monotonicity::Nondecreasing;
}

void CoefficientFn::check() const {
    if (!std::isfinite(c_inf) || !std::isfinite(a) || !std::isfinite(rate))
        throw InvalidSpec("coefficient has non-finite parameters");
    if (family != CoefficientFamily::Constant && !(rate > 0.0))
        throw InvalidSpec("coefficient decay rate must be positive");
}

NonlinearitySpec NonlinearitySpec::saturable(CoefficientFn lambda, CoefficientFn s) {
    NonlinearitySpec spec;
    spec.family = Family::Saturable;
    spec.lambda = lambda;
    spec.s = s;
    spec.check();
    return spec;
}

NonlinearitySpec NonlinearitySpec::defocusing_power(CoefficientFn k, CoefficientFn Q, double p) {
    NonlinearitySpec spec;
    spec.family = Family::DefocusingPower;
    spec.k = k;
    spec.Q = Q;
    spec.p = p;
    spec.check();
    return spec;
}

NonlinearitySpec NonlinearitySpec::focusing_power(CoefficientFn k, CoefficientFn Q, double p) {
    NonlinearitySpec spec;
    spec.family = Family::FocusingPower;
    spec.k = k;
    spec.Q = Q;
    spec.p = p;
    spec.check();
    return spec;
}

NonlinearitySpec NonlinearitySpec::concave_convex(double lambda, double mu, double q, double p) {
    NonlinearitySpec spec;
    spec.family = Family::ConcaveConvex;
    spec.cc_lambda = lambda;
    spec.mu = mu;
    spec.q = q;
    spec.p = p;
    spec.check();
    return spec;
}

NonlinearitySpec NonlinearitySpec::linear_helmholtz(double k) {
    NonlinearitySpec spec;
    spec.family = Family::LinearHelmholtz;
    spec.k = CoefficientFn::constant(k);
    spec.check();
    return spec;
}

NonlinearitySpec NonlinearitySpec::pure_damping() {
    NonlinearitySpec spec;
    spec.family = Family::PureDamping;
    return spec;
}

bool NonlinearitySpec::autonomous() const {
    switch (family) {
        case Family::Saturable: return lambda.is_constant() && s.is_constant();
        case Family::DefocusingPower:
        case Family::FocusingPower: return k.is_constant() && Q.is_constant();
        case Family::LinearHelmholtz: return k.is_constant();
        default: return true;
    }
}

void NonlinearitySpec::check() const {
    switch (family) {
        case Family::Saturable:
            lambda.check();
            s.check();
            // s is monotone, so its extreme values sit at r = 0 and r = infinity.
            if (!(s.value(0.0) > 0.0) || !(s.limit() > 0.0)) throw InvalidSpec("saturable: s must be positive");
            break;
        case Family::DefocusingPower:
        case Family::FocusingPower:
            k.check();
            Q.check();
            if (!(p > 2.0) || !std::isfinite(p)) throw InvalidSpec("power family: p must satisfy p > 2");
            if (k.limit() == 0.0) throw InvalidSpec("power family: k_inf must be nonzero");
            if (family == Family::DefocusingPower && !(Q.limit() < 0.0))
                throw InvalidSpec("defocusing_power: Q_inf must be negative");
            if (family == Family::FocusingPower && !(Q.limit() >= 0.0))
                throw InvalidSpec("focusing_power: Q_inf must be nonnegative");
            break;
        case Family::ConcaveConvex:
            if (!(cc_lambda > 0.0) || !std::isfinite(cc_lambda))
                throw InvalidSpec("concave_convex: lambda must be positive");
            if (!std::isfinite(mu)) throw InvalidSpec("concave_convex: mu must be finite");
            if (!(1.0 < q && q < 2.0 && 2.0 < p && std::isfinite(p)))
                throw InvalidSpec("concave_convex: need 1 < q < 2 < p");
            break;
        case Family::LinearHelmholtz:
            k.check();
            if (!k.is_constant() || !(k.limit() > 0.0)) throw InvalidSpec("linear_helmholtz: k must be a positive constant");
            break;
        case Family::PureDamping: break;
    }
}

NonlinearitySpec limit_spec(const NonlinearitySpec& spec) {
    NonlinearitySpec out = spec;
    out.lambda = CoefficientFn::constant(spec.lambda.limit());
    out.s = CoefficientFn::constant(spec.s.limit());
    out.k = CoefficientFn::constant(spec.k.limit());
    out.Q = CoefficientFn::constant(spec.Q.limit());
    return out;
}

double compute_alpha0(const NonlinearitySpec& spec, double r) {
    const double slope = eval_dg_dz(spec, r, 0.0);
    if (!(slope > 0.0)) {
        std::ostringstream os;
        os << "g'(" << r << ", 0) = " << slope << " is not positive";
        throw HypothesesFail(os.str());
    }
    switch (spec.family) {
        case Family::Saturable: {
            const double lam = spec.lambda.value(r);
            if (lam <= 0.0) return kInf;
            return std::sqrt(1.0 / lam - spec.s.value(r));
        }
        case Family::DefocusingPower:
        case Family::FocusingPower: {
            const double Q = spec.Q.value(r);
            if (Q >= 0.0) return kInf;
            const double k = spec.k.value(r);
            return std::pow(k * k / -Q, 1.0 / (spec.p - 2.0));
        }
        case Family::ConcaveConvex:
            if (spec.mu >= 0.0) return kInf;
            return std::pow(spec.cc_lambda / -spec.mu, 1.0 / (spec.p - spec.q));
        case Family::LinearHelmholtz: return kInf;
        case Family::PureDamping: break;
    }
    return numeric_alpha0(spec, r);
}

double numeric_alpha0(const NonlinearitySpec& spec, double r, double z_max) {
    if (!(eval_g(spec, r, 1e-8) > 0.0)) throw HypothesesFail("g(r, z) is not positive near z = 0+");
    double lo = 1e-8;
    double hi = 1e-6;
    while (eval_g(spec, r, hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > z_max) {
            std::ostringstream os;
            os << "g(" << r << ", .) > 0 on (0, " << z_max << "]";
            throw NoSignChange(os.str());
        }
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (eval_g(spec, r, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

bool HypothesisReport::all_pass() const {
    if (oddness != CheckStatus::Pass) return false;
    if (positive_slope_at_zero.status != CheckStatus::Pass) return false;
    if (sign_change.status != CheckStatus::Pass) return false;
    if (coefficient_monotonicity == CheckStatus::Fail) return false;
    if (radial_sign == CheckStatus::Fail) return false;
    if (growth_window && !growth_window->holds) return false;
    return true;
}

std::optional<GrowthWindow> growth_window(const NonlinearitySpec& spec, double alpha, const SampleGrid& grid) {
    const NonlinearitySpec base = limit_spec(spec);
    if (!(eval_dg_dz(base, 0.0, 0.0) > 0.0)) return std::nullopt;
    const double target = eval_G(spec, 0.0, alpha);
    const double sup = sup_G_inf(base);
    if (!(target < sup)) return std::nullopt;

    const double a0_inf = compute_alpha0(base, 0.0);
    auto excess = [&](double z) { return eval_G(base, 0.0, z) - target; };
    double a_star = 0.0;
    if (target > 0.0) {
        a_star = first_crossing(excess, 1e-8, std::isinf(a0_inf) ? 1e8 : a0_inf);
        if (std::isinf(a_star)) return std::nullopt;
    }
    if (!(a_star > 0.0)) return std::nullopt;

    GrowthWindow w;
    w.reference_alpha = alpha;
    w.alpha_lower = a_star;
    w.alpha_upper = a_star;
    switch (spec.family) {
        case Family::DefocusingPower:
        case Family::FocusingPower: {
            const double k_inf = spec.k.limit();
            const double k0 = spec.k.value(0.0);
            const double tail = std::pow(a_star, spec.p - 2.0);
            w.lambda = k_inf * k_inf + std::min(spec.Q.limit(), 0.0) * tail;
            w.Lambda = k0 * k0 + std::abs(spec.Q.value(0.0)) * tail;
            break;
        }
        case Family::Saturable:
            w.lambda = -spec.lambda.limit() + 1.0 / (spec.s.limit() + a_star * a_star);
            w.Lambda = -spec.lambda.value(0.0) + 1.0 / spec.s.value(0.0);
            break;
        default: {
            double lo = kInf;
            double hi = -kInf;
            for (double z : window_samples(a_star, grid.z_count)) {
                const double ratio = eval_g(spec, 0.0, z) / z;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            w.lambda = lo;
            w.Lambda = hi;
            break;
        }
    }

    bool holds = w.lambda > 0.0;
    const double tol = 1e-12;
    const auto rs = radial_samples(grid);
    for (double z : window_samples(a_star, grid.z_count)) {
        const double z2 = z * z;
        const double ginf = eval_g(base, 0.0, z) * z;
        if (w.lambda * z2 > ginf * (1.0 + tol)) holds = false;
        for (double r : rs) {
            const double gz = eval_g(spec, r, z) * z;
            if (ginf > gz * (1.0 + tol) + tol * z2) holds = false;
            if (gz > w.Lambda * z2 * (1.0 + tol)) holds = false;
        }
        if (!holds) break;
    }
    w.holds = holds;
    return w;
}

namespace {

HypothesisReport run_checks(const NonlinearitySpec& spec, const SampleGrid& grid, bool with_growth) {
    HypothesisReport rep;
    try {
        spec.check();
    } catch (const InvalidSpec& e) {
        rep.oddness = CheckStatus::Fail;
        rep.positive_slope_at_zero.status = CheckStatus::Fail;
        rep.sign_change.status = CheckStatus::Fail;
        rep.notes.push_back(std::string("invalid parameters: ") + e.what());
        return rep;
    }

    const auto rs = radial_samples(grid);
    const bool autonomous = spec.autonomous();
    const NonlinearitySpec base = autonomous ? spec : limit_spec(spec);

    // Slope at the origin.
    {
        double lo = kInf;
        double hi = -kInf;
        for (double r : rs) {
            const double d = eval_dg_dz(spec, r, 0.0);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        rep.positive_slope_at_zero = {lo > 0.0 ? CheckStatus::Pass : CheckStatus::Fail, lo, hi};
        if (spec.family == Family::PureDamping) {
            rep.notes.emplace_back(
                "non-existence regime: g(z) z < 0 for every z != 0, so there is no nontrivial localized "
                "or oscillating solution");
        }
        if (spec.family == Family::ConcaveConvex)
            rep.notes.emplace_back("g'(0) = +infinity: the sublinear term |z|^{q-2} z dominates near 0");
    }

    // Sign change and the root property.
    double window = 10.0;
    if (rep.positive_slope_at_zero.status == CheckStatus::Pass) {
        const double a0 = compute_alpha0(base, 0.0);
        rep.sign_change.alpha0 = a0;
        bool ok = true;
        if (std::isfinite(a0)) {
            window = 2.0 * a0;
            const double scale = std::abs(eval_dg_dz(base, 0.0, a0)) * a0 + 1.0;
            if (std::abs(eval_g(base, 0.0, a0)) > 1e-10 * scale) ok = false;
            for (double z : window_samples(a0, grid.z_count)) {
                if (z < a0 * (1.0 - 1e-9) && !(eval_g(base, 0.0, z) > 0.0)) ok = false;
                const double beyond = a0 + z;
                if (beyond > a0 * (1.0 + 1e-9) && !(eval_g(base, 0.0, beyond) < 0.0)) ok = false;
            }
        } else {
            for (double z : window_samples(window, grid.z_count))
                if (!(eval_g(base, 0.0, z) > 0.0)) ok = false;
        }
        rep.sign_change.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        if (!ok) rep.notes.emplace_back("root property of alpha0 failed on the sample grid");
    } else {
        rep.sign_change.status = CheckStatus::Fail;
        rep.sign_change.alpha0 = std::numeric_limits<double>::quiet_NaN();
        rep.notes.emplace_back("g'(0) > 0 fails: no positivity region around z = 0");
    }

    // Oddness, exact on sampled (r, z).
    {
        bool odd = true;
        for (double r : rs) {
            for (double z : window_samples(window, grid.z_count)) {
                if (eval_g(spec, r, -z) != -eval_g(spec, r, z)) {
                    odd = false;
                    break;
                }
            }
            if (!odd) break;
        }
        rep.oddness = odd ? CheckStatus::Pass : CheckStatus::Fail;
    }

    // Coefficient monotonicity.
    auto add_coefficient = [&](const char* name, const CoefficientFn& c, Monotonicity required) {
        CoefficientCheck cc;
        cc.name = name;
        cc.required = required;
        cc.declared = c.monotonicity();
        cc.numeric_agrees = numeric_monotonicity(c, rs) == cc.declared;
        cc.status = satisfies(cc.declared, required) && cc.numeric_agrees ? CheckStatus::Pass : CheckStatus::Fail;
        if (cc.status == CheckStatus::Fail) {
            std::ostringstream os;
            os << "coefficient " << name << " is " << to_string(cc.declared) << ", required "
               << to_string(required);
            if (!cc.numeric_agrees) os << " (numeric sign check disagrees with the declared flag)";
            rep.notes.push_back(os.str());
        }
        rep.coefficients.push_back(cc);
    };
    switch (spec.family) {
        case Family::Saturable:
            add_coefficient("lambda", spec.lambda, Monotonicity::Nondecreasing);
            add_coefficient("s", spec.s, Monotonicity::Nondecreasing);
            break;
        case Family::DefocusingPower:
        case Family::FocusingPower:
            add_coefficient("k", spec.k, Monotonicity::Nonincreasing);
            add_coefficient("Q", spec.Q, Monotonicity::Nonincreasing);
            if (spec.k.value(0.0) <= 0.0 || spec.k.limit() <= 0.0)
                rep.notes.emplace_back("k should be positive so that k^2 inherits its monotonicity");
            break;
        case Family::LinearHelmholtz: add_coefficient("k", spec.k, Monotonicity::Constant); break;
        default: break;
    }
    rep.coefficient_monotonicity = CheckStatus::Pass;
    for (const auto& c : rep.coefficients)
        if (c.status == CheckStatus::Fail) rep.coefficient_monotonicity = CheckStatus::Fail;
    if (spec.family == Family::DefocusingPower || spec.family == Family::FocusingPower) {
        if (spec.k.value(0.0) <= 0.0 || spec.k.limit() <= 0.0) rep.coefficient_monotonicity = CheckStatus::Fail;
    }

    // g_r(r, z) z <= 0.
    if (autonomous) {
        rep.radial_sign = CheckStatus::NotApplicable;
    } else {
        bool ok = true;
        for (double r : rs) {
            for (double z : window_samples(window, grid.z_count)) {
                const double scale = std::abs(eval_g(spec, r, z) * z) + z * z;
                if (eval_dg_dr(spec, r, z) * z > 1e-14 * scale) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        rep.radial_sign = ok ? CheckStatus::Pass : CheckStatus::Fail;
        if (!ok) rep.notes.emplace_back("g_r(r, z) z <= 0 fails on the sample grid");
    }

    // Growth window at a reference center value.
    if (with_growth && !autonomous && rep.coefficient_monotonicity == CheckStatus::Pass &&
        rep.positive_slope_at_zero.status == CheckStatus::Pass) {
        try {
            const Interval I = admissible_interval(spec);
            const double ref = std::isfinite(I.hi) ? 0.5 * I.hi : 1.0;
            rep.growth_window = growth_window(spec, ref, grid);
            std::ostringstream os;
            os << "growth window evaluated at reference alpha = " << ref;
            rep.notes.push_back(os.str());
        } catch (const Error& e) {
            rep.notes.push_back(std::string("growth window unavailable: ") + e.what());
        }
    }
    return rep;
}

}  // namespace

HypothesisReport validate_spec(const NonlinearitySpec& spec, const SampleGrid& grid) {
    return run_checks(spec, grid, true);
}

Interval admissible_interval(const NonlinearitySpec& spec) {
    spec.check();
    if (spec.autonomous()) {
        const double a0 = compute_alpha0(spec, 0.0);
        return {-a0, a0};
    }
    SampleGrid coarse;
    coarse.z_count = 64;
    const HypothesisReport rep = run_checks(spec, coarse, false);
    if (rep.coefficient_monotonicity == CheckStatus::Fail || rep.radial_sign == CheckStatus::Fail ||
        rep.positive_slope_at_zero.status == CheckStatus::Fail) {
        std::string msg = "hypotheses of the nonautonomous theory fail";
        for (const auto& n : rep.notes) msg += "; " + n;
        throw HypothesesFail(msg);
    }
    const NonlinearitySpec base = limit_spec(spec);
    const double sup = sup_G_inf(base);
    if (std::isinf(sup)) return {};
    const double hi = first_crossing([&](double a) { return eval_G(spec, 0.0, a) - sup; }, 1e-6, 1e8);
    return {-hi, hi};
}

}  // namespace helmholtz
