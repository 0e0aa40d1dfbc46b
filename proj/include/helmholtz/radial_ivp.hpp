#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "helmholtz/errors.hpp"
#include "helmholtz/nonlinearity.hpp"

namespace helmholtz {

/// Parameters of one shooting solve of -u'' - ((N-1)/r) u' = g(r, u),
/// u(0) = alpha, u'(0) = 0.
struct SolveConfig {
    int N = 3;
    double alpha = 0.0;
    double r_max = 200.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double r0 = 1e-4;             // series handoff radius
    double blowup_factor = 2.0;   // blow-up when |u| > factor * max(alpha0, |alpha|)
    long max_steps = 5'000'000;

    void check() const;
};

enum class Termination { ReachedRmax, Blowup, StepFailure };
const char* to_string(Termination t);

enum class EventKind { Zero, Max, Min };
const char* to_string(EventKind k);

template <typename Scalar>
struct BasicEvent {
    EventKind kind;
    Scalar r;
    Scalar u;
    Scalar du;
};

/// Accepted nodes of an adaptive solve plus per-step dense output and refined
/// events. Immutable once returned by `integrate`.
template <typename Scalar>
struct BasicTrajectory {
    using State = Eigen::Matrix<Scalar, 2, 1>;
    using DenseCoeffs = std::array<State, 5>;
    using Event = BasicEvent<Scalar>;

    int N = 0;
    Scalar alpha = 0;
    std::vector<Scalar> r;
    std::vector<State> y;              // (u, u') at r[i]
    std::vector<DenseCoeffs> dense;    // dense[i] covers [r[i], r[i+1]]
    std::vector<Scalar> zeros;
    std::vector<Event> criticals;      // kind is Max or Min
    Termination terminated_by = Termination::ReachedRmax;
    bool equilibrium = false;          // constant solution, not integrated
    std::size_t rejected_steps = 0;
    std::string note;

    std::size_t size() const { return r.size(); }
    Scalar r_begin() const { return r.front(); }
    Scalar r_end() const { return r.back(); }
    Scalar u(std::size_t i) const { return y[i](0); }
    Scalar du(std::size_t i) const { return y[i](1); }

    /// (u, u') at any radius in [r_begin, r_end]; exact at nodes. Throws OutOfRange.
    State evaluate(Scalar radius) const {
        if (r.empty() || !(radius >= r.front()) || !(radius <= r.back()))
            throw OutOfRange("evaluate: radius outside the computed range");
        auto it = std::lower_bound(r.begin(), r.end(), radius);
        auto idx = static_cast<std::size_t>(it - r.begin());
        if (it != r.end() && *it == radius) return y[idx];
        const std::size_t step = idx - 1;
        const Scalar h = r[step + 1] - r[step];
        return interpolate(dense[step], (radius - r[step]) / h);
    }

    static State interpolate(const DenseCoeffs& c, Scalar theta) {
        const Scalar t1 = Scalar(1) - theta;
        return c[0] + theta * (c[1] + t1 * (c[2] + theta * (c[3] + t1 * c[4])));
    }

    /// Zeros and critical points merged in radial order.
    std::vector<Event> events() const {
        std::vector<Event> out;
        out.reserve(zeros.size() + criticals.size());
        for (Scalar z : zeros) out.push_back({EventKind::Zero, z, Scalar(0), evaluate(z)(1)});
        out.insert(out.end(), criticals.begin(), criticals.end());
        std::sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.r < b.r; });
        return out;
    }
};

using Trajectory = BasicTrajectory<double>;
using Event = BasicEvent<double>;

/// Degree-2 series state at r0 from N u''(0) = -g(0, alpha).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 1> taylor_start(const NonlinearitySpec& spec, const SolveConfig& cfg) {
    const Scalar alpha(cfg.alpha);
    const Scalar r0(cfg.r0);
    const Scalar g0 = eval_g<Scalar>(spec, Scalar(0), alpha);
    const Scalar n(cfg.N);
    return {alpha - g0 * r0 * r0 / (Scalar(2) * n), -g0 * r0 / n};
}

namespace detail {

// Dormand-Prince 5(4) tableau with the order-4 continuous extension.
template <typename Scalar>
struct DormandPrince {
    static constexpr Scalar c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
    static constexpr Scalar a21 = 1.0L / 5;
    static constexpr Scalar a31 = 3.0L / 40, a32 = 9.0L / 40;
    static constexpr Scalar a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
    static constexpr Scalar a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
                            a54 = -212.0L / 729;
    static constexpr Scalar a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247, a64 = 49.0L / 176,
                            a65 = -5103.0L / 18656;
    static constexpr Scalar a71 = 35.0L / 384, a73 = 500.0L / 1113, a74 = 125.0L / 192, a75 = -2187.0L / 6784,
                            a76 = 11.0L / 84;
    static constexpr Scalar e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920, e5 = -17253.0L / 339200,
                            e6 = 22.0L / 525, e7 = -1.0L / 40;
    static constexpr Scalar d1 = -12715105075.0L / 11282082432.0L, d3 = 87487479700.0L / 32700410799.0L,
                            d4 = -10690763975.0L / 1880347072.0L, d5 = 701980252875.0L / 199316789632.0L,
                            d6 = -1453857185.0L / 822651844.0L, d7 = 69997945.0L / 29380423.0L;
};

template <typename Scalar, typename F>
Scalar refine_root(F f, Scalar a, Scalar fa, Scalar b, Scalar fb) {
    // Illinois-modified regula falsi with a bisection guard.
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        using std::abs;
        if (abs(b - a) <= Scalar(1e-12) * abs(b) + std::numeric_limits<Scalar>::min()) break;
        Scalar c = (a * fb - b * fa) / (fb - fa);
        if (!(c > std::min(a, b) && c < std::max(a, b))) c = (a + b) / Scalar(2);
        const Scalar fc = f(c);
        if (fc == Scalar(0)) return c;
        if ((fc > 0) == (fb > 0)) {
            b = c;
            fb = fc;
            if (side == -1) fa /= Scalar(2);
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb /= Scalar(2);
            side = 1;
        }
    }
    using std::abs;
    return abs(fa) < abs(fb) ? a : b;
}

inline double blowup_envelope(const NonlinearitySpec& spec, const SolveConfig& cfg) {
    double a0 = std::numeric_limits<double>::infinity();
    try {
        a0 = compute_alpha0(spec, 0.0);
    } catch (const HypothesesFail&) {
    }
    const double base = std::isfinite(a0) ? std::max(a0, std::abs(cfg.alpha)) : std::abs(cfg.alpha);
    return cfg.blowup_factor * base;
}

inline bool is_equilibrium_start(const NonlinearitySpec& spec, const SolveConfig& cfg) {
    if (cfg.alpha == 0.0) return true;
    if (!spec.autonomous()) return false;
    if (eval_g(spec, 0.0, cfg.alpha) == 0.0) return true;
    try {
        const double a0 = compute_alpha0(spec, 0.0);
        return std::isfinite(a0) && std::abs(std::abs(cfg.alpha) - a0) <= 1e-12 * std::max(1.0, a0);
    } catch (const HypothesesFail&) {
        return false;
    }
}

}  // namespace detail

/// Adaptive Dormand-Prince integration from the series start at r0 to r_max,
/// with dense output and events (zeros of u, zeros of u') refined on the
/// interpolant. Center values on an equilibrium (0 or +-alpha0 of an
/// autonomous spec) yield the exact constant trajectory.
template <typename Scalar>
BasicTrajectory<Scalar> integrate(const NonlinearitySpec& spec, const SolveConfig& cfg) {
    cfg.check();
    using Traj = BasicTrajectory<Scalar>;
    using State = typename Traj::State;
    using T = detail::DormandPrince<Scalar>;
    using std::abs;
    using std::max;
    using std::min;
    using std::pow;
    using std::sqrt;

    Traj traj;
    traj.N = cfg.N;
    traj.alpha = Scalar(cfg.alpha);

    const Scalar r0(cfg.r0);
    const Scalar r_max(cfg.r_max);

    if (detail::is_equilibrium_start(spec, cfg)) {
        traj.equilibrium = true;
        const State c(Scalar(cfg.alpha), Scalar(0));
        typename Traj::DenseCoeffs coeffs{c, State::Zero(), State::Zero(), State::Zero(), State::Zero()};
        Scalar rr = r0;
        traj.r.push_back(rr);
        traj.y.push_back(c);
        while (rr < r_max) {
            rr = min(r_max, rr + Scalar(1));
            traj.r.push_back(rr);
            traj.y.push_back(c);
            traj.dense.push_back(coeffs);
        }
        traj.note = "equilibrium center value: constant solution";
        return traj;
    }

    const Scalar nm1(cfg.N - 1);
    auto rhs = [&](Scalar r, const State& y) -> State {
        const Scalar g = eval_g<Scalar>(spec, r, y(0));
        using std::isfinite;
        if (!isfinite(static_cast<double>(g))) throw InvalidSpec("g(r, u) is not finite along the trajectory");
        return State(y(1), -nm1 / r * y(1) - g);
    };

    const Scalar rtol(cfg.rtol);
    const Scalar atol(cfg.atol);
    auto error_norm = [&](const State& e, const State& y0, const State& y1) {
        Scalar acc(0);
        for (int i = 0; i < 2; ++i) {
            const Scalar sk = atol + rtol * max(abs(y0(i)), abs(y1(i)));
            acc += (e(i) / sk) * (e(i) / sk);
        }
        return sqrt(acc / Scalar(2));
    };

    State y = taylor_start<Scalar>(spec, cfg);
    Scalar r = r0;
    traj.r.push_back(r);
    traj.y.push_back(y);
    State k1 = rhs(r, y);

    // Initial step from the local scales of y and y'.
    Scalar h;
    {
        const Scalar d0 = sqrt((y.array().abs() / (atol + rtol * y.array().abs())).square().mean());
        const Scalar d1 = sqrt((k1.array().abs() / (atol + rtol * y.array().abs())).square().mean());
        h = (d0 < Scalar(1e-5) || d1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
        h = min(h, Scalar(0.1));
        h = max(h, Scalar(10) * r0 * Scalar(1e-6));
    }

    const Scalar envelope(detail::blowup_envelope(spec, cfg));
    const Scalar h_min_rel(1e-14);
    Scalar err_old(1e-4);
    long steps = 0;

    while (r < r_max) {
        if (++steps > cfg.max_steps) {
            traj.terminated_by = Termination::StepFailure;
            traj.note = "max_steps exceeded";
            break;
        }
        bool last = false;
        if (r + h >= r_max) {
            h = r_max - r;
            last = true;
        }
        const State k2 = rhs(r + T::c2 * h, y + h * (T::a21 * k1));
        const State k3 = rhs(r + T::c3 * h, y + h * (T::a31 * k1 + T::a32 * k2));
        const State k4 = rhs(r + T::c4 * h, y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
        const State k5 = rhs(r + T::c5 * h, y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
        const State k6 = rhs(r + h, y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5));
        const State y1 = y + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
        const Scalar r1 = last ? r_max : r + h;
        const State k7 = rhs(r1, y1);
        const State e = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
        const Scalar err = error_norm(e, y, y1);

        if (!(err <= Scalar(1))) {
            const Scalar fac = min(Scalar(1), max(Scalar(0.2), Scalar(0.9) * pow(err, Scalar(-0.2))));
            h *= (err == err) ? fac : Scalar(0.2);
            if (h < h_min_rel * max(Scalar(1), abs(r))) {
                traj.terminated_by = Termination::StepFailure;
                traj.note = "step size underflow";
                break;
            }
            ++traj.rejected_steps;
            continue;
        }

        typename Traj::DenseCoeffs c;
        c[0] = y;
        c[1] = y1 - y;
        c[2] = h * k1 - c[1];
        c[3] = c[1] - h * k7 - c[2];
        c[4] = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 + T::d6 * k6 + T::d7 * k7);

        // Events on [r, r1].
        const Scalar step = r1 - r;
        for (int comp = 0; comp < 2; ++comp) {
            const Scalar fa = y(comp);
            const Scalar fb = y1(comp);
            if (fa == Scalar(0) || !((fa < 0) != (fb < 0) || fb == Scalar(0))) continue;
            Scalar root;
            if (fb == Scalar(0)) {
                root = r1;
            } else {
                auto f = [&](Scalar rr) { return Traj::interpolate(c, (rr - r) / step)(comp); };
                root = detail::refine_root<Scalar>(f, r, fa, r1, fb);
            }
            if (comp == 0) {
                traj.zeros.push_back(root);
            } else {
                const State at = Traj::interpolate(c, (root - r) / step);
                const EventKind kind = fa > 0 ? EventKind::Max : EventKind::Min;
                traj.criticals.push_back({kind, root, at(0), Scalar(0)});
            }
        }

        traj.r.push_back(r1);
        traj.y.push_back(y1);
        traj.dense.push_back(c);
        r = r1;
        y = y1;
        k1 = k7;

        if (abs(y(0)) > envelope && y(0) * y(1) > Scalar(0)) {
            traj.terminated_by = Termination::Blowup;
            break;
        }

        // PI step-size control.
        const Scalar beta(0.04);
        const Scalar e_safe = max(err, Scalar(1e-10));
        Scalar fac = pow(e_safe, Scalar(0.2) - beta * Scalar(0.75)) / pow(err_old, beta);
        fac = max(Scalar(0.2), min(Scalar(10), fac / Scalar(0.9)));
        h = h / fac;
        err_old = max(err, Scalar(1e-4));
    }
    return traj;
}

extern template BasicTrajectory<double> integrate<double>(const NonlinearitySpec&, const SolveConfig&);
extern template BasicTrajectory<long double> integrate<long double>(const NonlinearitySpec&, const SolveConfig&);

inline Trajectory integrate(const NonlinearitySpec& spec, const SolveConfig& cfg) { return integrate<double>(spec, cfg); }

}  // namespace helmholtz
