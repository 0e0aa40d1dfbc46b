#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "helmholtz/continuum.hpp"
#include "helmholtz/diagnostics.hpp"
#include "helmholtz/domain_approx.hpp"
#include "helmholtz/nonlinearity.hpp"
#include "helmholtz/radial_ivp.hpp"

namespace helmholtz::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

/// Non-finite doubles are written as the strings "inf", "-inf", "nan".
json number(double x);
double to_double(const json& j);

// Spec files:
//   {"family": "defocusing_power",
//    "parameters": {"k": 1, "Q": {"family": "exp_approach", "c_inf": -1, "a": 1, "b_or_gamma": 1}, "p": 4}}
// A coefficient is either a number (constant) or a block as above.
json to_json(const CoefficientFn& c);
CoefficientFn coefficient_from_json(const json& j, const std::string& name);
json to_json(const NonlinearitySpec& spec);
/// Throws InvalidSpec on unknown families, unknown or missing keys, or values
/// rejected by NonlinearitySpec::check.
NonlinearitySpec spec_from_json(const json& j);
NonlinearitySpec load_spec(const std::string& path);
std::string schema_help();

json to_json(const SolveConfig& cfg);
json to_json(const HypothesisReport& rep);
json to_json(const Interval& iv);
json to_json(const Classification& cls);
json to_json(const ZMonotoneReport& rep);
json to_json(const ChainReport& rep);
json to_json(const DecayFit& fit);
json to_json(const PsiReport& rep);
json to_json(const SweepResult& res);
json to_json(const ThresholdBracket& br);
json to_json(const DomainStudy& study);
json events_to_json(const Trajectory& traj);

// CSV, every real printed with %.17g.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);          // r,u,du
void write_events_csv(std::ostream& os, const Trajectory& traj);              // kind,r,u
void write_sweep_csv(std::ostream& os, const SweepResult& res);
void write_domain_csv(std::ostream& os, const DomainStudy& study);            // R,lambda1,u_center,...
void write_nodal_csv(std::ostream& os, const RadialMesh& mesh, const Eigen::VectorXd& u);  // r,u
std::string format_real(double x);

struct RunSummary {
    int schema = kSchemaVersion;
    std::string tool_version = kToolVersion;
    std::string command;
    std::optional<NonlinearitySpec> spec;
    json config = json::object();
    std::vector<std::string> verdicts;
    json results = json::object();
    std::vector<std::string> failures;  // failed checks, empty on pass
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;       // timing, excluded from determinism
    int exit_code = 0;

    bool operator==(const RunSummary&) const = default;
};

json to_json(const RunSummary& s);
RunSummary summary_from_json(const json& j);

/// The summary document without timing fields, for determinism comparisons.
json strip_timing(json j);

}  // namespace helmholtz::io
