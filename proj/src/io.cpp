#include "helmholtz/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace helmholtz::io {

namespace {

void require_keys(const json& params, const std::set<std::string>& allowed, const std::string& family) {
    for (const auto& [key, value] : params.items()) {
        if (!allowed.count(key)) throw InvalidSpec("unknown parameter '" + key + "' for family " + family);
    }
}

double real_param(const json& params, const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!params.contains(key)) {
        if (fallback) return *fallback;
        throw InvalidSpec("missing parameter '" + key + "'");
    }
    const json& v = params.at(key);
    if (!v.is_number()) throw InvalidSpec("parameter '" + key + "' must be a number");
    return v.get<double>();
}

CoefficientFn coefficient_param(const json& params, const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!params.contains(key)) {
        if (fallback) return CoefficientFn::constant(*fallback);
        throw InvalidSpec("missing coefficient '" + key + "'");
    }
    return coefficient_from_json(params.at(key), key);
}

json opt_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

}  // namespace

json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double to_double(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InvalidConfig("expected a real number, got " + j.dump());
}

json to_json(const CoefficientFn& c) {
    if (c.family == CoefficientFamily::Constant) return number(c.c_inf);
    return {{"family", to_string(c.family)}, {"c_inf", number(c.c_inf)}, {"a", number(c.a)}, {"b_or_gamma", number(c.rate)}};
}

CoefficientFn coefficient_from_json(const json& j, const std::string& name) {
    if (j.is_number()) return CoefficientFn::constant(j.get<double>());
    if (!j.is_object()) throw InvalidSpec("coefficient '" + name + "' must be a number or an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "family" && key != "c_inf" && key != "a" && key != "b_or_gamma")
            throw InvalidSpec("unknown key '" + key + "' in coefficient '" + name + "'");
    }
    if (!j.contains("family") || !j.at("family").is_string())
        throw InvalidSpec("coefficient '" + name + "' needs a family");
    const std::string family = j.at("family").get<std::string>();
    const double c_inf = real_param(j, "c_inf");
    CoefficientFn c;
    if (family == "constant") {
        c = CoefficientFn::constant(c_inf);
    } else if (family == "exp_approach") {
        c = CoefficientFn::exp_approach(c_inf, real_param(j, "a"), real_param(j, "b_or_gamma"));
    } else if (family == "rational_approach") {
        c = CoefficientFn::rational_approach(c_inf, real_param(j, "a"), real_param(j, "b_or_gamma"));
    } else {
        throw InvalidSpec("unknown coefficient family '" + family + "' for '" + name + "'");
    }
    c.check();
    return c;
}

json to_json(const NonlinearitySpec& spec) {
    json params = json::object();
    switch (spec.family) {
        case Family::Saturable:
            params = {{"lambda", to_json(spec.lambda)}, {"s", to_json(spec.s)}};
            break;
        case Family::DefocusingPower:
        case Family::FocusingPower:
            params = {{"k", to_json(spec.k)}, {"Q", to_json(spec.Q)}, {"p", number(spec.p)}};
            break;
        case Family::ConcaveConvex:
            params = {{"lambda", number(spec.cc_lambda)}, {"mu", number(spec.mu)}, {"q", number(spec.q)}, {"p", number(spec.p)}};
            break;
        case Family::LinearHelmholtz:
            params = {{"k", to_json(spec.k)}};
            break;
        case Family::PureDamping: break;
    }
    return {{"family", to_string(spec.family)}, {"parameters", params}};
}

NonlinearitySpec spec_from_json(const json& j) {
    if (!j.is_object()) throw InvalidSpec("spec must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "family" && key != "parameters") throw InvalidSpec("unknown top-level key '" + key + "'");
    }
    if (!j.contains("family") || !j.at("family").is_string()) throw InvalidSpec("spec needs a string 'family'");
    const std::string name = j.at("family").get<std::string>();
    const auto family = family_from_string(name);
    if (!family) throw InvalidSpec("unknown family '" + name + "'");
    const json params = j.value("parameters", json::object());
    if (!params.is_object()) throw InvalidSpec("'parameters' must be an object");

    switch (*family) {
        case Family::Saturable:
            require_keys(params, {"lambda", "s"}, name);
            return NonlinearitySpec::saturable(coefficient_param(params, "lambda"), coefficient_param(params, "s"));
        case Family::DefocusingPower:
            require_keys(params, {"k", "Q", "p"}, name);
            return NonlinearitySpec::defocusing_power(coefficient_param(params, "k"), coefficient_param(params, "Q", -1.0),
                                                      real_param(params, "p"));
        case Family::FocusingPower:
            require_keys(params, {"k", "Q", "p"}, name);
            return NonlinearitySpec::focusing_power(coefficient_param(params, "k"), coefficient_param(params, "Q", 1.0),
                                                    real_param(params, "p"));
        case Family::ConcaveConvex:
            require_keys(params, {"lambda", "mu", "q", "p"}, name);
            return NonlinearitySpec::concave_convex(real_param(params, "lambda"), real_param(params, "mu"),
                                                    real_param(params, "q"), real_param(params, "p"));
        case Family::LinearHelmholtz: {
            require_keys(params, {"k"}, name);
            NonlinearitySpec spec = NonlinearitySpec::linear_helmholtz(1.0);
            spec.k = coefficient_param(params, "k");
            spec.check();
            return spec;
        }
        case Family::PureDamping:
            require_keys(params, {}, name);
            return NonlinearitySpec::pure_damping();
    }
    throw InvalidSpec("unhandled family");
}

NonlinearitySpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot open spec file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidSpec(path + ": " + e.what());
    }
    return spec_from_json(j);
}

std::string schema_help() {
    return R"(Spec file schema (JSON):
  {"family": <name>, "parameters": {...}}
  families and parameters:
    saturable (g1)         lambda, s          -lambda z + z/(s + z^2)
    defocusing_power (g2)  k, Q = -1, p       k^2 z + Q |z|^{p-2} z, Q_inf < 0
    focusing_power (g3)    k, Q = 1, p        k^2 z + Q |z|^{p-2} z, Q_inf >= 0
    concave_convex (g4)    lambda, mu, q, p   lambda |z|^{q-2} z + mu |z|^{p-2} z
    linear_helmholtz       k                  k^2 z
    pure_damping           (none)             -z
  coefficients (lambda, s, k, Q of the first three families, k of linear_helmholtz)
  are a number or a block
    {"family": "constant" | "exp_approach" | "rational_approach",
     "c_inf": c, "a": a, "b_or_gamma": b}
  meaning c + a exp(-b r) or c + a (1 + r)^(-b).
)";
}

json to_json(const SolveConfig& cfg) {
    return {{"N", cfg.N},
            {"alpha", number(cfg.alpha)},
            {"r_max", number(cfg.r_max)},
            {"rtol", number(cfg.rtol)},
            {"atol", number(cfg.atol)},
            {"r0", number(cfg.r0)},
            {"blowup_factor", number(cfg.blowup_factor)},
            {"max_steps", cfg.max_steps}};
}

json to_json(const HypothesisReport& rep) {
    json coeffs = json::array();
    for (const auto& c : rep.coefficients) {
        coeffs.push_back({{"name", c.name},
                          {"required", to_string(c.required)},
                          {"declared", to_string(c.declared)},
                          {"numeric_agrees", c.numeric_agrees},
                          {"status", to_string(c.status)}});
    }
    json out = {{"all_pass", rep.all_pass()},
                {"oddness", to_string(rep.oddness)},
                {"positive_slope_at_zero",
                 {{"status", to_string(rep.positive_slope_at_zero.status)},
                  {"min_slope", number(rep.positive_slope_at_zero.min_slope)},
                  {"max_slope", number(rep.positive_slope_at_zero.max_slope)}}},
                {"sign_change", {{"status", to_string(rep.sign_change.status)}, {"alpha0", number(rep.sign_change.alpha0)}}},
                {"coefficients", coeffs},
                {"coefficient_monotonicity", to_string(rep.coefficient_monotonicity)},
                {"radial_sign", to_string(rep.radial_sign)},
                {"notes", rep.notes}};
    if (rep.growth_window) {
        const auto& w = *rep.growth_window;
        out["growth_window"] = {{"reference_alpha", number(w.reference_alpha)},
                                {"alpha_lower", number(w.alpha_lower)},
                                {"alpha_upper", number(w.alpha_upper)},
                                {"lambda", number(w.lambda)},
                                {"Lambda", number(w.Lambda)},
                                {"holds", w.holds}};
    } else {
        out["growth_window"] = nullptr;
    }
    return out;
}

json to_json(const Interval& iv) { return {{"lo", number(iv.lo)}, {"hi", number(iv.hi)}}; }

json to_json(const Classification& cls) {
    return {{"verdict", to_string(cls.verdict)},
            {"zero_count", cls.zero_count},
            {"critical_count", cls.critical_count},
            {"z_margin", opt_number(cls.z_margin)},
            {"envelope_ratio", opt_number(cls.envelope_ratio)},
            {"period", opt_number(cls.period)},
            {"spacing_spread", opt_number(cls.spacing_spread)},
            {"notes", cls.notes}};
}

json to_json(const ZMonotoneReport& rep) {
    return {{"pass", rep.pass},
            {"conservation", rep.conservation},
            {"max_violation", number(rep.max_violation)},
            {"tolerance", number(rep.tolerance)}};
}

json to_json(const ChainReport& rep) {
    json chain = json::array();
    for (double c : rep.chain) chain.push_back(number(c));
    return {{"pass", rep.pass},
            {"strictly_decreasing", rep.strictly_decreasing},
            {"alternating", rep.alternating},
            {"length", rep.chain.size()},
            {"chain", chain},
            {"min_relative_drop", number(rep.min_relative_drop)},
            {"sup_u", number(rep.sup_u)},
            {"sup_du", number(rep.sup_du)},
            {"du_bound", number(rep.du_bound)},
            {"sup_u_ok", rep.sup_u_ok},
            {"sup_du_ok", rep.sup_du_ok}};
}

json to_json(const DecayFit& fit) {
    return {{"exponent", number(fit.exponent)},
            {"c_low", number(fit.c_low)},
            {"C_high", number(fit.C_high)},
            {"r_lo", number(fit.r_lo)},
            {"r_hi", number(fit.r_hi)},
            {"residual", number(fit.residual)},
            {"points", fit.points},
            {"triple_low", opt_number(fit.triple_low)},
            {"triple_high", opt_number(fit.triple_high)}};
}

json to_json(const PsiReport& rep) {
    return {{"pass", rep.pass}, {"psi_min", number(rep.psi_min)}, {"psi_max", number(rep.psi_max)}, {"ratio", number(rep.ratio)}};
}

json to_json(const SweepResult& res) {
    json rows = json::array();
    for (const auto& r : res.rows) {
        rows.push_back({{"alpha", number(r.alpha)},
                        {"verdict", to_string(r.verdict)},
                        {"first_zero", opt_number(r.first_zero)},
                        {"zero_count", r.zero_count},
                        {"sup_u", number(r.sup_u)},
                        {"sup_du", number(r.sup_du)},
                        {"decay_exponent", opt_number(r.decay_exponent)},
                        {"Z_final", number(r.Z_final)},
                        {"error", r.error}});
    }
    return {{"rows", rows}, {"spec_digest", res.spec_digest}, {"first_zero_lipschitz", opt_number(res.first_zero_lipschitz)}};
}

json to_json(const ThresholdBracket& br) {
    return {{"alpha_lo", number(br.lo)},
            {"alpha_hi", number(br.hi)},
            {"width", number(br.hi - br.lo)},
            {"closed_form", opt_number(br.closed_form)},
            {"agrees", br.agrees},
            {"solves", br.solves}};
}

json to_json(const DomainStudy& study) {
    json rows = json::array();
    for (const auto& r : study.rows) {
        rows.push_back({{"R", number(r.R)},
                        {"m", r.m},
                        {"lambda1", number(r.lambda1)},
                        {"u_center", number(r.u_center)},
                        {"energy", number(r.energy)},
                        {"energy_density", number(r.energy_density)},
                        {"l1", number(r.l1)},
                        {"l2", number(r.l2)},
                        {"l4", number(r.l4)},
                        {"converged", r.converged},
                        {"iterations", r.iterations},
                        {"error", r.error}});
    }
    return {{"rows", rows},
            {"alpha0", number(study.alpha0)},
            {"u_center_increasing", study.u_center_increasing},
            {"energy_decreasing_negative", study.energy_decreasing_negative},
            {"norms_increasing", study.norms_increasing}};
}

json events_to_json(const Trajectory& traj) {
    json out = json::array();
    for (const auto& e : traj.events())
        out.push_back({{"kind", to_string(e.kind)}, {"r", number(e.r)}, {"u", number(e.u)}, {"du", number(e.du)}});
    return out;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "r,u,du\n";
    for (std::size_t i = 0; i < traj.size(); ++i)
        os << format_real(traj.r[i]) << ',' << format_real(traj.u(i)) << ',' << format_real(traj.du(i)) << '\n';
}

void write_events_csv(std::ostream& os, const Trajectory& traj) {
    os << "kind,r,u\n";
    for (const auto& e : traj.events()) os << to_string(e.kind) << ',' << format_real(e.r) << ',' << format_real(e.u) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    os << "alpha,verdict,first_zero,zero_count,sup_u,sup_du,decay_exponent,Z_final\n";
    for (const auto& r : res.rows) {
        os << format_real(r.alpha) << ',' << to_string(r.verdict) << ',' << (r.first_zero ? format_real(*r.first_zero) : "")
           << ',' << r.zero_count << ',' << format_real(r.sup_u) << ',' << format_real(r.sup_du) << ','
           << (r.decay_exponent ? format_real(*r.decay_exponent) : "") << ',' << format_real(r.Z_final) << '\n';
    }
}

void write_domain_csv(std::ostream& os, const DomainStudy& study) {
    os << "R,lambda1,u_center,energy,energy_density,l1,l2,l4\n";
    for (const auto& r : study.rows) {
        os << format_real(r.R) << ',' << format_real(r.lambda1) << ',' << format_real(r.u_center) << ','
           << format_real(r.energy) << ',' << format_real(r.energy_density) << ',' << format_real(r.l1) << ','
           << format_real(r.l2) << ',' << format_real(r.l4) << '\n';
    }
}

void write_nodal_csv(std::ostream& os, const RadialMesh& mesh, const Eigen::VectorXd& u) {
    os << "r,u\n";
    for (Eigen::Index i = 0; i < u.size(); ++i) os << format_real(mesh.nodes(i)) << ',' << format_real(u(i)) << '\n';
    os << format_real(mesh.R) << ",0\n";
}

json to_json(const RunSummary& s) {
    return {{"schema", s.schema},
            {"tool_version", s.tool_version},
            {"command", s.command},
            {"spec", s.spec ? to_json(*s.spec) : json(nullptr)},
            {"config", s.config},
            {"verdicts", s.verdicts},
            {"results", s.results},
            {"failures", s.failures},
            {"seed", s.seed},
            {"timing", {{"elapsed_seconds", s.elapsed_seconds}}},
            {"exit_code", s.exit_code}};
}

RunSummary summary_from_json(const json& j) {
    RunSummary s;
    s.schema = j.at("schema").get<int>();
    if (s.schema != kSchemaVersion) throw InvalidConfig("unsupported summary schema " + std::to_string(s.schema));
    s.tool_version = j.at("tool_version").get<std::string>();
    s.command = j.at("command").get<std::string>();
    if (!j.at("spec").is_null()) s.spec = spec_from_json(j.at("spec"));
    s.config = j.at("config");
    s.verdicts = j.at("verdicts").get<std::vector<std::string>>();
    s.results = j.at("results");
    s.failures = j.at("failures").get<std::vector<std::string>>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.elapsed_seconds = j.at("timing").at("elapsed_seconds").get<double>();
    s.exit_code = j.at("exit_code").get<int>();
    return s;
}

json strip_timing(json j) {
    j.erase("timing");
    return j;
}

}  // namespace helmholtz::io
