#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "helmholtz/diagnostics.hpp"
#include "helmholtz/nonlinearity.hpp"
#include "helmholtz/radial_ivp.hpp"

namespace helmholtz {

struct SweepRow {
    double alpha = 0.0;
    Verdict verdict = Verdict::Undetermined;
    std::optional<double> first_zero;
    std::size_t zero_count = 0;
    double sup_u = 0.0;
    double sup_du = 0.0;
    std::optional<double> decay_exponent;
    double Z_final = 0.0;
    std::string error;  // non-empty when the row failed
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by alpha
    std::string spec_digest;
    // max |r1(a_{i+1}) - r1(a_i)| / |a_{i+1} - a_i| over adjacent oscillatory rows
    std::optional<double> first_zero_lipschitz;
};

/// Hex FNV-1a digest of the spec, N and solver settings.
std::string spec_digest(const NonlinearitySpec& spec, int N, const SolveConfig& cfg);

/// Center values in (0, alpha0) spaced uniformly in log(a / (alpha0 - a)),
/// which clusters points near both 0 and alpha0. Spans roughly
/// [1e-3, 1 - 1e-3] alpha0.
std::vector<double> default_alphas(double alpha0, int count = 33);

/// One solve + classify per alpha; a failing row is recorded, never thrown.
/// `threads` <= 1 runs serially; rows are merged in alpha order.
SweepResult sweep_alpha(const NonlinearitySpec& spec, int N, std::vector<double> alphas, const SolveConfig& cfg,
                        int threads = 1);

struct BracketOptions {
    double start = 0.05;
    double width = 1e-6;
    double cap = 100.0;
};

struct ThresholdBracket {
    double lo = 0.0;
    double hi = 0.0;
    std::optional<double> closed_form;
    bool agrees = true;  // closed form within 1e-5 of [lo, hi]
    int solves = 0;
};

/// Bisection on the oscillatory / non-oscillatory verdict boundary. Throws
/// NoBracket when every alpha up to `cap` oscillates.
ThresholdBracket bracket_threshold(const NonlinearitySpec& spec, int N, const SolveConfig& cfg,
                                   const BracketOptions& opts = {});

struct FirstZeroReport {
    std::vector<double> alphas;
    std::vector<double> first_zeros;
    bool strictly_increasing = false;
    std::optional<std::size_t> offending;  // index i with r1[i+1] <= r1[i]
};

/// First zero r1(alpha) along an increasing list of center values. Throws
/// HypothesesFail if z -> g(z)/z increases somewhere on the sampled window,
/// and TooFewEvents if a run has no zero.
FirstZeroReport first_zero_monotonicity(const NonlinearitySpec& spec, int N, const std::vector<double>& alphas,
                                        const SolveConfig& cfg);

}  // namespace helmholtz
