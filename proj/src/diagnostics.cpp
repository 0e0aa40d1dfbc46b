#include "helmholtz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace helmholtz {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::ConstantZero: return "ConstantZero";
        case Verdict::ConstantAlpha0: return "ConstantAlpha0";
        case Verdict::OscillatingLocalized: return "OscillatingLocalized";
        case Verdict::Periodic: return "Periodic";
        case Verdict::Blowup: return "Blowup";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

MonitorSeries compute_monitors(const Trajectory& traj, const NonlinearitySpec& spec, int N) {
    MonitorSeries mon;
    mon.N = N;
    mon.zero_count = traj.zeros.size();
    const std::size_t n = traj.size();
    mon.r.resize(n);
    mon.Z.resize(n);
    mon.psi.resize(n);
    mon.v.resize(n);
    mon.dv.resize(n);
    const double half = 0.5 * (N - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = traj.r[i];
        const double u = traj.u(i);
        const double du = traj.du(i);
        const double G = eval_G(spec, r, u);
        const double scale = std::pow(r, half);
        mon.r[i] = r;
        mon.Z[i] = du * du + 2.0 * G;
        mon.v[i] = scale * u;
        mon.dv[i] = half * std::pow(r, half - 1.0) * u + scale * du;
        mon.psi[i] = mon.dv[i] * mon.dv[i] + 2.0 * std::pow(r, N - 1.0) * G;
    }
    return mon;
}

ZMonotoneReport check_Z_monotone(const MonitorSeries& mon, int N) {
    ZMonotoneReport rep;
    if (mon.Z.empty()) {
        rep.pass = true;
        return rep;
    }
    rep.conservation = N == 1;
    rep.tolerance = 1e-8 * (1.0 + std::abs(mon.Z.front()));
    double worst = 0.0;
    if (rep.conservation) {
        for (double z : mon.Z) worst = std::max(worst, std::abs(z - mon.Z.front()));
    } else {
        for (std::size_t i = 1; i < mon.Z.size(); ++i) worst = std::max(worst, mon.Z[i] - mon.Z[i - 1]);
    }
    rep.max_violation = worst;
    rep.pass = worst <= rep.tolerance;
    return rep;
}

ChainReport check_oscillation_chain(const Trajectory& traj, const NonlinearitySpec& spec, std::size_t max_events) {
    auto events = traj.events();
    if (max_events > 0 && events.size() > max_events) events.resize(max_events);
    if (events.size() < 3) throw TooFewEvents("oscillation chain needs at least three events");

    ChainReport rep;
    const double alpha = traj.alpha;
    rep.chain.push_back(2.0 * eval_G(spec, 0.0, alpha));
    rep.alternating = true;
    bool expect_zero = true;
    for (const auto& e : events) {
        const bool is_zero = e.kind == EventKind::Zero;
        if (is_zero != expect_zero) rep.alternating = false;
        expect_zero = !is_zero;
        if (is_zero)
            rep.chain.push_back(e.du * e.du);
        else
            rep.chain.push_back(2.0 * eval_G(spec, e.r, e.u));
    }

    rep.min_relative_drop = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rep.chain.size(); ++i) {
        const double prev = rep.chain[i - 1];
        const double drop = prev > 0.0 ? (prev - rep.chain[i]) / prev : -1.0;
        rep.min_relative_drop = std::min(rep.min_relative_drop, drop);
    }
    rep.strictly_decreasing = rep.min_relative_drop > 1e-9;

    for (std::size_t i = 0; i < traj.size(); ++i) {
        rep.sup_u = std::max(rep.sup_u, std::abs(traj.u(i)));
        rep.sup_du = std::max(rep.sup_du, std::abs(traj.du(i)));
    }
    rep.du_bound = std::sqrt(std::max(0.0, 2.0 * eval_G(spec, 0.0, alpha)));
    rep.sup_u_ok = std::abs(rep.sup_u - std::abs(alpha)) <= 1e-8;
    rep.sup_du_ok = rep.sup_du <= rep.du_bound + 1e-8;
    rep.pass = rep.strictly_decreasing && rep.alternating && rep.sup_u_ok && rep.sup_du_ok;
    return rep;
}

DecayFit fit_decay_exponent(const Trajectory& traj, int N, double r_lo, double r_hi, const NonlinearitySpec* spec) {
    if (r_lo < 1.0) throw InsufficientRange("decay fit requires r_lo >= 1");
    if (r_hi <= 0.0) r_hi = traj.r_end();
    std::vector<double> rs;
    std::vector<double> amps;
    for (const auto& c : traj.criticals) {
        if (c.r < r_lo || c.r > r_hi) continue;
        rs.push_back(c.r);
        amps.push_back(std::abs(c.u));
    }
    if (rs.size() < 10) throw InsufficientRange("decay fit needs at least ten envelope points beyond r_lo");

    const auto m = static_cast<Eigen::Index>(rs.size());
    Eigen::MatrixXd A(m, 2);
    Eigen::VectorXd b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = std::log(rs[static_cast<std::size_t>(i)]);
        b(i) = std::log(amps[static_cast<std::size_t>(i)]);
    }
    const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);

    DecayFit fit;
    fit.exponent = coef(1);
    fit.r_lo = r_lo;
    fit.r_hi = r_hi;
    fit.points = rs.size();
    fit.residual = std::sqrt((A * coef - b).squaredNorm() / static_cast<double>(m));

    const double theory = 0.5 * (1.0 - N);
    fit.c_low = std::numeric_limits<double>::infinity();
    fit.C_high = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double scaled = amps[i] * std::pow(rs[i], -theory);
        fit.c_low = std::min(fit.c_low, scaled);
        fit.C_high = std::max(fit.C_high, scaled);
    }

    if (spec) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double r = traj.r[i];
            if (r < r_lo || r > r_hi) continue;
            const double u = traj.u(i);
            const double du = traj.du(i);
            const double ddu = -(N - 1.0) / r * du - eval_g(*spec, r, u);
            const double scaled = (std::abs(u) + std::abs(du) + std::abs(ddu)) * std::pow(r, -theory);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        fit.triple_low = lo;
        fit.triple_high = hi;
    }
    return fit;
}

PsiReport check_psi_bounded(const MonitorSeries& mon, double r_star) {
    if (mon.zero_count == 0) throw InsufficientRange("psi check needs an oscillating trajectory");
    if (mon.r.empty() || mon.r.back() < 10.0 * r_star)
        throw InsufficientRange("psi check needs r_max >= 10 r_star");
    PsiReport rep;
    rep.psi_min = std::numeric_limits<double>::infinity();
    rep.psi_max = 0.0;
    const double decade = mon.r.back() / 10.0;
    double dec_min = std::numeric_limits<double>::infinity();
    double dec_max = 0.0;
    for (std::size_t i = 0; i < mon.r.size(); ++i) {
        if (mon.r[i] < r_star) continue;
        rep.psi_min = std::min(rep.psi_min, mon.psi[i]);
        rep.psi_max = std::max(rep.psi_max, mon.psi[i]);
        if (mon.r[i] >= decade) {
            dec_min = std::min(dec_min, mon.psi[i]);
            dec_max = std::max(dec_max, mon.psi[i]);
        }
    }
    rep.ratio = dec_min > 0.0 ? dec_max / dec_min : std::numeric_limits<double>::infinity();
    rep.pass = rep.psi_min > 0.0 && rep.ratio <= 1.5;
    return rep;
}

namespace {

struct Spacing {
    double mean = 0.0;
    double spread = 0.0;  // (max - min) / mean
};

std::optional<Spacing> zero_spacing(const Trajectory& traj) {
    if (traj.zeros.size() < 2) return std::nullopt;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 1; i < traj.zeros.size(); ++i) {
        const double d = traj.zeros[i] - traj.zeros[i - 1];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    Spacing s;
    s.mean = (traj.zeros.back() - traj.zeros.front()) / static_cast<double>(traj.zeros.size() - 1);
    s.spread = (hi - lo) / s.mean;
    return s;
}

}  // namespace

double estimate_period(const Trajectory& traj) {
    if (traj.zeros.size() < 4) throw NotPeriodic("period estimate needs at least four zeros");
    const auto s = zero_spacing(traj);
    if (!(s->spread < 1e-8)) throw NotPeriodic("zero spacings are not constant");
    return 2.0 * s->mean;
}

Classification classify(const Trajectory& traj, const NonlinearitySpec& spec, const SolveConfig& cfg) {
    Classification c;
    c.zero_count = traj.zeros.size();
    c.critical_count = traj.criticals.size();
    const double alpha = cfg.alpha;

    if (std::abs(alpha) <= cfg.atol) {
        c.verdict = Verdict::ConstantZero;
        return c;
    }
    if (spec.autonomous()) {
        try {
            const double a0 = compute_alpha0(spec, 0.0);
            if (std::isfinite(a0) && std::abs(std::abs(alpha) - a0) <= 1e-12) {
                c.verdict = Verdict::ConstantAlpha0;
                return c;
            }
        } catch (const HypothesesFail& e) {
            c.notes.push_back(e.what());
        }
    }
    if (traj.terminated_by == Termination::Blowup) {
        c.verdict = Verdict::Blowup;
        return c;
    }
    if (traj.terminated_by == Termination::StepFailure) c.notes.push_back("integration stopped early: " + traj.note);

    if (c.zero_count < 4) {
        c.notes.push_back("fewer than four zeros on the computed range");
        c.verdict = Verdict::Undetermined;
        return c;
    }

    const auto spacing = zero_spacing(traj);
    c.spacing_spread = spacing->spread;
    if (cfg.N == 1) {
        if (spacing->spread < 1e-8) {
            c.period = 2.0 * spacing->mean;
            c.verdict = Verdict::Periodic;
        } else {
            c.notes.push_back("zero spacings are not constant to 1e-8");
            c.verdict = Verdict::Undetermined;
        }
        return c;
    }

    const auto zrep = check_Z_monotone(compute_monitors(traj, spec, cfg.N), cfg.N);
    c.z_margin = zrep.max_violation;
    bool envelope_ok = traj.criticals.size() >= 2;
    if (envelope_ok) {
        for (std::size_t i = 1; i < traj.criticals.size(); ++i)
            if (std::abs(traj.criticals[i].u) > std::abs(traj.criticals[i - 1].u)) envelope_ok = false;
        c.envelope_ratio = std::abs(traj.criticals.back().u) / std::abs(traj.criticals.front().u);
        if (!(*c.envelope_ratio < 1.0)) envelope_ok = false;
    }
    if (!zrep.pass) c.notes.push_back("Z is not monotone");
    if (!envelope_ok) c.notes.push_back("critical-point envelope is not decreasing");
    c.verdict = zrep.pass && envelope_ok ? Verdict::OscillatingLocalized : Verdict::Undetermined;
    return c;
}

std::optional<double> sturm_coefficient_min(const Trajectory& traj, const NonlinearitySpec& spec, double r_from) {
    double a0 = std::numeric_limits<double>::infinity();
    try {
        a0 = compute_alpha0(spec, 0.0);
    } catch (const HypothesesFail&) {
        return std::nullopt;
    }
    const int N = traj.N;
    std::optional<double> best;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double r = traj.r[i];
        const double u = traj.u(i);
        if (r < r_from || !(u > 0.0) || !(u < a0)) continue;
        const double c = eval_g(spec, r, u) / u - (N - 1.0) * (N - 3.0) / (4.0 * r * r);
        best = best ? std::min(*best, c) : c;
    }
    return best;
}

double antisymmetry_defect(const Trajectory& traj, int samples_per_zero) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.zeros.size(); ++i) {
        const double z = traj.zeros[i];
        const double half = 0.5 * std::min(z - traj.zeros[i - 1], traj.zeros[i + 1] - z);
        for (int k = 1; k <= samples_per_zero; ++k) {
            const double t = half * k / samples_per_zero;
            const double plus = traj.evaluate(z + t)(0);
            const double minus = traj.evaluate(z - t)(0);
            worst = std::max(worst, std::abs(plus + minus));
        }
    }
    return worst;
}

}  // namespace helmholtz
