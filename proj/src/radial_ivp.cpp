#include "helmholtz/radial_ivp.hpp"

namespace helmholtz {

void SolveConfig::check() const {
    if (N < 1) throw InvalidConfig("N must be a positive integer");
    if (!std::isfinite(alpha)) throw InvalidConfig("alpha must be finite");
    if (!(r0 > 0.0 && r0 < 1.0)) throw InvalidConfig("r0 must lie in (0, 1)");
    if (!(r_max > r0) || !std::isfinite(r_max)) throw InvalidConfig("r_max must exceed r0");
    if (!(rtol >= 1e-13)) throw InvalidConfig("rtol must be at least 1e-13");
    if (!(atol > 0.0)) throw InvalidConfig("atol must be positive");
    if (!(blowup_factor > 1.0)) throw InvalidConfig("blowup_factor must exceed 1");
    if (max_steps <= 0) throw InvalidConfig("max_steps must be positive");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedRmax: return "reached_rmax";
        case Termination::Blowup: return "blowup";
        case Termination::StepFailure: return "step_failure";
    }
    return "?";
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Zero: return "zero";
        case EventKind::Max: return "max";
        case EventKind::Min: return "min";
    }
    return "?";
}

template BasicTrajectory<double> integrate<double>(const NonlinearitySpec&, const SolveConfig&);
template BasicTrajectory<long double> integrate<long double>(const NonlinearitySpec&, const SolveConfig&);

}  // namespace helmholtz
