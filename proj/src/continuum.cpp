#include "helmholtz/continuum.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace helmholtz {

namespace {

void append(std::string& out, const char* key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.17g;", key, value);
    out += buf;
}

void append(std::string& out, const char* key, const CoefficientFn& c) {
    out += key;
    out += "={";
    out += to_string(c.family);
    append(out, ",c_inf", c.c_inf);
    append(out, "a", c.a);
    append(out, "rate", c.rate);
    out += "};";
}

bool oscillatory(Verdict v) { return v == Verdict::OscillatingLocalized || v == Verdict::Periodic; }

SweepRow solve_row(const NonlinearitySpec& spec, int N, double alpha, const SolveConfig& base) {
    SweepRow row;
    row.alpha = alpha;
    try {
        SolveConfig cfg = base;
        cfg.N = N;
        cfg.alpha = alpha;
        const Trajectory traj = integrate(spec, cfg);
        const Classification cls = classify(traj, spec, cfg);
        row.verdict = cls.verdict;
        row.zero_count = traj.zeros.size();
        if (!traj.zeros.empty()) row.first_zero = traj.zeros.front();
        row.sup_u = std::abs(alpha);  // u(0) = alpha, u'(0) = 0
        for (std::size_t i = 0; i < traj.size(); ++i) {
            row.sup_u = std::max(row.sup_u, std::abs(traj.u(i)));
            row.sup_du = std::max(row.sup_du, std::abs(traj.du(i)));
        }
        const double du = traj.y.back()(1);
        row.Z_final = du * du + 2.0 * eval_G(spec, traj.r_end(), traj.y.back()(0));
        if (cls.verdict == Verdict::OscillatingLocalized) {
            try {
                row.decay_exponent = fit_decay_exponent(traj, N, std::max(1.0, 0.1 * traj.r_end())).exponent;
            } catch (const InsufficientRange&) {
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::string spec_digest(const NonlinearitySpec& spec, int N, const SolveConfig& cfg) {
    std::string canon = to_string(spec.family);
    canon += ';';
    append(canon, "lambda", spec.lambda);
    append(canon, "s", spec.s);
    append(canon, "k", spec.k);
    append(canon, "Q", spec.Q);
    append(canon, "p", spec.p);
    append(canon, "q", spec.q);
    append(canon, "cc_lambda", spec.cc_lambda);
    append(canon, "mu", spec.mu);
    append(canon, "N", N);
    append(canon, "r_max", cfg.r_max);
    append(canon, "rtol", cfg.rtol);
    append(canon, "atol", cfg.atol);
    append(canon, "r0", cfg.r0);
    append(canon, "blowup_factor", cfg.blowup_factor);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

std::vector<double> default_alphas(double alpha0, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    const double span = std::log(999.0);  // a / (alpha0 - a) from 1/999 to 999
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : -span + 2.0 * span * i / (count - 1);
        out.push_back(alpha0 / (1.0 + std::exp(-t)));
    }
    return out;
}

SweepResult sweep_alpha(const NonlinearitySpec& spec, int N, std::vector<double> alphas, const SolveConfig& cfg,
                        int threads) {
    std::sort(alphas.begin(), alphas.end());
    SweepResult res;
    res.spec_digest = spec_digest(spec, N, cfg);
    res.rows.resize(alphas.size());

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(alphas.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < alphas.size(); ++i) res.rows[i] = solve_row(spec, N, alphas[i], cfg);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < alphas.size(); i = next++) res.rows[i] = solve_row(spec, N, alphas[i], cfg);
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 1; i < res.rows.size(); ++i) {
        const auto& a = res.rows[i - 1];
        const auto& b = res.rows[i];
        if (!oscillatory(a.verdict) || !oscillatory(b.verdict) || !a.first_zero || !b.first_zero) continue;
        if (b.alpha == a.alpha) continue;
        const double slope = std::abs(*b.first_zero - *a.first_zero) / std::abs(b.alpha - a.alpha);
        res.first_zero_lipschitz = res.first_zero_lipschitz ? std::max(*res.first_zero_lipschitz, slope) : slope;
    }
    return res;
}

ThresholdBracket bracket_threshold(const NonlinearitySpec& spec, int N, const SolveConfig& base,
                                   const BracketOptions& opts) {
    ThresholdBracket br;
    // true: alpha belongs to the oscillatory continuum.
    auto below = [&](double alpha) {
        SolveConfig cfg = base;
        cfg.N = N;
        cfg.alpha = alpha;
        ++br.solves;
        const Trajectory traj = integrate(spec, cfg);
        const Verdict v = classify(traj, spec, cfg).verdict;
        if (oscillatory(v)) return true;
        if (v == Verdict::Blowup || v == Verdict::ConstantAlpha0) return false;
        char buf[96];
        std::snprintf(buf, sizeof buf, "verdict %s at alpha = %.17g", to_string(v), alpha);
        throw NoBracket(buf);
    };

    double lo = opts.start;
    if (!below(lo)) throw NoBracket("the starting center value is already outside the continuum");
    double hi = 2.0 * lo;
    while (below(hi)) {
        lo = hi;
        hi *= 2.0;
        if (lo > opts.cap) throw NoBracket("no blow-up regime below the search cap");
    }
    while (hi - lo > opts.width) {
        const double mid = 0.5 * (lo + hi);
        if (below(mid))
            lo = mid;
        else
            hi = mid;
    }
    br.lo = lo;
    br.hi = hi;
    try {
        const double a0 = compute_alpha0(spec, 0.0);
        if (std::isfinite(a0)) {
            br.closed_form = a0;
            br.agrees = a0 >= lo - 1e-5 && a0 <= hi + 1e-5;
        }
    } catch (const HypothesesFail&) {
    }
    return br;
}

FirstZeroReport first_zero_monotonicity(const NonlinearitySpec& spec, int N, const std::vector<double>& alphas,
                                        const SolveConfig& base) {
    if (alphas.empty()) throw InvalidConfig("first_zero_monotonicity needs at least one alpha");
    double window = *std::max_element(alphas.begin(), alphas.end());
    try {
        const double a0 = compute_alpha0(spec, 0.0);
        if (std::isfinite(a0)) window = a0;
    } catch (const HypothesesFail& e) {
        throw HypothesesFail(std::string("first_zero_monotonicity: ") + e.what());
    }
    // g(z)/z must be nonincreasing on (0, window].
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 512; ++i) {
        const double z = window * i / 512.0;
        const double ratio = eval_g(spec, 0.0, z) / z;
        if (ratio > prev * (1.0 + 1e-14) + 1e-300) throw HypothesesFail("g(z)/z is not nonincreasing");
        prev = ratio;
    }

    FirstZeroReport rep;
    rep.alphas = alphas;
    for (double a : alphas) {
        SolveConfig cfg = base;
        cfg.N = N;
        cfg.alpha = a;
        const Trajectory traj = integrate(spec, cfg);
        if (traj.zeros.empty()) throw TooFewEvents("no first zero on the computed range");
        rep.first_zeros.push_back(traj.zeros.front());
    }
    rep.strictly_increasing = true;
    for (std::size_t i = 1; i < rep.first_zeros.size(); ++i) {
        if (!(rep.first_zeros[i] > rep.first_zeros[i - 1])) {
            rep.strictly_increasing = false;
            rep.offending = i - 1;
            break;
        }
    }
    return rep;
}

}  // namespace helmholtz
