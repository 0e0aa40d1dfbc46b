#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "helmholtz/nonlinearity.hpp"
#include "helmholtz/radial_ivp.hpp"

namespace helmholtz {

/// Monitor functions at trajectory nodes:
///   Z   = u'^2 + 2 G(r, u)
///   psi = v'^2 + 2 r^{N-1} G(r, u),  v = r^{(N-1)/2} u.
struct MonitorSeries {
    int N = 0;
    std::vector<double> r;
    std::vector<double> Z;
    std::vector<double> psi;
    std::vector<double> v;
    std::vector<double> dv;
    std::size_t zero_count = 0;
};

MonitorSeries compute_monitors(const Trajectory& traj, const NonlinearitySpec& spec, int N);

struct ZMonotoneReport {
    bool pass = false;
    bool conservation = false;  // N = 1: |Z - Z(r0)| is checked instead
    double max_violation = 0.0;
    double tolerance = 0.0;
};

/// N >= 2: Z(r_{i+1}) <= Z(r_i) + tol. N = 1: |Z(r_i) - Z(r0)| <= tol.
/// tol = 1e-8 (1 + Z(r0)).
ZMonotoneReport check_Z_monotone(const MonitorSeries& mon, int N);

struct ChainReport {
    bool pass = false;
    bool strictly_decreasing = false;
    bool alternating = false;
    std::vector<double> chain;      // 2G(0,alpha), u'(r1)^2, 2G(r2,u(r2)), ...
    double min_relative_drop = 0.0; // min over links of (prev - next) / prev
    double sup_u = 0.0;
    double sup_du = 0.0;
    double du_bound = 0.0;          // sqrt(2 G(0, alpha))
    bool sup_u_ok = false;
    bool sup_du_ok = false;
};

/// Interleaved energy chain over the first `max_events` events (0 = all).
/// Throws TooFewEvents below three events.
ChainReport check_oscillation_chain(const Trajectory& traj, const NonlinearitySpec& spec, std::size_t max_events = 0);

struct DecayFit {
    double exponent = 0.0;
    double c_low = 0.0;
    double C_high = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    double residual = 0.0;
    std::size_t points = 0;
    // Bounds on (|u| + |u'| + |u''|) r^{(N-1)/2} over nodes in the fit range,
    // u'' taken from the equation. Set only when a spec is supplied.
    std::optional<double> triple_low;
    std::optional<double> triple_high;
};

/// Least-squares slope of log|u(r_c)| against log r_c over critical points
/// r_c in [r_lo, r_hi]. Throws InsufficientRange with fewer than ten points.
DecayFit fit_decay_exponent(const Trajectory& traj, int N, double r_lo, double r_hi = -1.0,
                            const NonlinearitySpec* spec = nullptr);

struct PsiReport {
    bool pass = false;
    double psi_min = 0.0;
    double psi_max = 0.0;
    double ratio = 0.0;  // max / min of psi over the last decade of r
};

/// Throws InsufficientRange when the run has no oscillation or r_end < 10 r_star.
PsiReport check_psi_bounded(const MonitorSeries& mon, double r_star);

enum class Verdict { ConstantZero, ConstantAlpha0, OscillatingLocalized, Periodic, Blowup, Undetermined };
const char* to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Undetermined;
    std::size_t zero_count = 0;
    std::size_t critical_count = 0;
    std::optional<double> z_margin;        // max Z violation
    std::optional<double> envelope_ratio;  // |u| at last critical / |u| at first critical
    std::optional<double> period;
    std::optional<double> spacing_spread;
    std::vector<std::string> notes;
};

Classification classify(const Trajectory& traj, const NonlinearitySpec& spec, const SolveConfig& cfg);

/// 2 x mean zero spacing; throws NotPeriodic when fewer than four zeros or the
/// spacings spread by 1e-8 relative or more.
double estimate_period(const Trajectory& traj);

/// min of c(r) = g(r,u)/u - (N-1)(N-3)/(4 r^2) over nodes with r >= r_from
/// and 0 < u < alpha0 (alpha0 may be infinite). Empty when no node qualifies.
std::optional<double> sturm_coefficient_min(const Trajectory& traj, const NonlinearitySpec& spec, double r_from = 1.0);

/// max |u(z + t) + u(z - t)| over zeros z and t sampled in (0, spacing/2].
double antisymmetry_defect(const Trajectory& traj, int samples_per_zero = 16);

}  // namespace helmholtz
