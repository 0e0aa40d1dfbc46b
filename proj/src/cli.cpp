#include "helmholtz/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "helmholtz/io.hpp"

namespace helmholtz::cli {

namespace {

using io::json;
using io::number;

struct UsageError : Error {
    using Error::Error;
};

struct Options {
    std::string spec_path;
    std::string out;
    int N = 3;
    double alpha = 0.0;
    double r_max = std::nan("");
    double rtol = 1e-10;
    double atol = 1e-12;
    std::string csv;
    std::string events;
    std::string echo;
    std::string nodal;
    std::vector<double> alphas;
    std::vector<double> radii{4.0, 8.0, 16.0, 32.0};
    double mesh_density = 256.0;
    double r_lo = -1.0;
};

SolveConfig solve_config(const Options& o, double default_rmax) {
    SolveConfig cfg;
    cfg.N = o.N;
    cfg.alpha = o.alpha;
    cfg.r_max = std::isnan(o.r_max) ? default_rmax : o.r_max;
    cfg.rtol = o.rtol;
    cfg.atol = o.atol;
    try {
        cfg.check();
    } catch (const InvalidConfig& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << content;
}

template <typename Writer>
void export_csv(const std::string& path, Writer&& writer) {
    if (path.empty()) return;
    std::ostringstream os;
    writer(os);
    write_file(path, os.str());
}

// Rejects specs outside the theory before any solve, with the validator's notes.
void require_hypotheses(const NonlinearitySpec& spec) {
    const HypothesisReport rep = validate_spec(spec);
    if (rep.all_pass()) return;
    std::string msg = "spec rejected: hypotheses fail";
    for (const auto& n : rep.notes) msg += "; " + n;
    throw InvalidSpec(msg);
}

bool oscillatory(Verdict v) { return v == Verdict::OscillatingLocalized || v == Verdict::Periodic; }

void cmd_validate(const Options& o, const NonlinearitySpec& spec, io::RunSummary& s) {
    const HypothesisReport rep = validate_spec(spec);
    s.results["hypotheses"] = io::to_json(rep);
    try {
        s.results["alpha0"] = number(compute_alpha0(spec, 0.0));
    } catch (const HypothesesFail&) {
        s.results["alpha0"] = nullptr;
    }
    if (rep.all_pass()) {
        s.results["admissible_interval"] = io::to_json(admissible_interval(spec));
        s.verdicts.push_back("hypotheses pass");
    } else {
        s.verdicts.push_back("hypotheses fail");
        s.failures.push_back("hypotheses");
        for (const auto& n : rep.notes) s.failures.push_back(n);
    }
    if (!o.echo.empty()) write_file(o.echo, io::to_json(spec).dump(2) + "\n");
}

void cmd_solve(const Options& o, const NonlinearitySpec& spec, io::RunSummary& s) {
    require_hypotheses(spec);
    const SolveConfig cfg = solve_config(o, 200.0);
    s.config = io::to_json(cfg);
    const Trajectory traj = integrate(spec, cfg);
    const Classification cls = classify(traj, spec, cfg);
    s.verdicts.push_back(to_string(cls.verdict));
    s.results["classification"] = io::to_json(cls);
    s.results["termination"] = to_string(traj.terminated_by);
    s.results["nodes"] = traj.size();
    s.results["events"] = io::events_to_json(traj);

    const MonitorSeries mon = compute_monitors(traj, spec, cfg.N);
    const ZMonotoneReport z = check_Z_monotone(mon, cfg.N);
    s.results["Z_monitor"] = io::to_json(z);
    if (cls.verdict == Verdict::Undetermined) s.failures.push_back("verdict Undetermined");
    if (oscillatory(cls.verdict)) {
        if (!z.pass) s.failures.push_back("Z monitor");
        try {
            const ChainReport chain = check_oscillation_chain(traj, spec);
            s.results["oscillation_chain"] = io::to_json(chain);
            if (!chain.pass) s.failures.push_back("oscillation chain");
        } catch (const TooFewEvents&) {
            s.results["oscillation_chain"] = nullptr;
        }
    }
    if (cls.verdict == Verdict::OscillatingLocalized) {
        try {
            const DecayFit fit = fit_decay_exponent(traj, cfg.N, std::max(1.0, 0.1 * traj.r_end()), -1.0, &spec);
            s.results["decay_fit"] = io::to_json(fit);
        } catch (const InsufficientRange&) {
            s.results["decay_fit"] = nullptr;
        }
    }
    export_csv(o.csv, [&](std::ostream& os) { io::write_trajectory_csv(os, traj); });
    export_csv(o.events, [&](std::ostream& os) { io::write_events_csv(os, traj); });
}

void cmd_sweep(const Options& o, const NonlinearitySpec& spec, io::RunSummary& s) {
    require_hypotheses(spec);
    const SolveConfig cfg = solve_config(o, 200.0);
    std::vector<double> alphas = o.alphas;
    if (alphas.empty()) {
        const double a0 = compute_alpha0(spec, 0.0);
        if (!std::isfinite(a0)) throw UsageError("--alphas is required when alpha0 is infinite");
        alphas = default_alphas(a0);
    }
    json config = io::to_json(cfg);
    config.erase("alpha");
    s.config = config;
    const SweepResult res = sweep_alpha(spec, cfg.N, alphas, cfg, worker_count());
    s.results["sweep"] = io::to_json(res);
    for (const auto& row : res.rows) {
        s.verdicts.push_back(to_string(row.verdict));
        if (!row.error.empty()) s.failures.push_back("alpha " + io::format_real(row.alpha) + ": " + row.error);
        else if (row.verdict == Verdict::Undetermined) s.failures.push_back("alpha " + io::format_real(row.alpha) + ": Undetermined");
    }
    export_csv(o.csv, [&](std::ostream& os) { io::write_sweep_csv(os, res); });
}

void cmd_decay(const Options& o, const NonlinearitySpec& spec, io::RunSummary& s) {
    require_hypotheses(spec);
    const SolveConfig cfg = solve_config(o, 1000.0);
    s.config = io::to_json(cfg);
    const double r_lo = o.r_lo > 0.0 ? o.r_lo : 0.1 * cfg.r_max;
    s.config["r_lo"] = number(r_lo);
    const Trajectory traj = integrate(spec, cfg);
    const Classification cls = classify(traj, spec, cfg);
    s.verdicts.push_back(to_string(cls.verdict));
    s.results["classification"] = io::to_json(cls);
    if (cls.verdict != Verdict::OscillatingLocalized) {
        s.failures.push_back(std::string("decay needs an OscillatingLocalized run, got ") + to_string(cls.verdict));
        return;
    }
    const DecayFit fit = fit_decay_exponent(traj, cfg.N, r_lo, -1.0, &spec);
    const double expected = 0.5 * (1.0 - cfg.N);
    s.results["decay_fit"] = io::to_json(fit);
    s.results["expected_exponent"] = number(expected);
    if (std::abs(fit.exponent - expected) > 0.05) s.failures.push_back("decay exponent");
    const PsiReport psi = check_psi_bounded(compute_monitors(traj, spec, cfg.N), r_lo);
    s.results["psi"] = io::to_json(psi);
    if (!psi.pass) s.failures.push_back("psi bounded");
    export_csv(o.csv, [&](std::ostream& os) { io::write_trajectory_csv(os, traj); });
    export_csv(o.events, [&](std::ostream& os) { io::write_events_csv(os, traj); });
}

void cmd_threshold(const Options& o, const NonlinearitySpec& spec, io::RunSummary& s) {
    require_hypotheses(spec);
    const SolveConfig cfg = solve_config(o, 100.0);
    json config = io::to_json(cfg);
    config.erase("alpha");
    s.config = config;
    try {
        const ThresholdBracket br = bracket_threshold(spec, cfg.N, cfg);
        s.results["bracket"] = io::to_json(br);
        s.verdicts.push_back("bracketed");
        if (!br.agrees) s.failures.push_back("bracket disagrees with closed-form alpha0");
    } catch (const NoBracket& e) {
        s.results["bracket"] = nullptr;
        s.results["no_bracket"] = e.what();
        s.verdicts.push_back("NoBracket");
        s.failures.push_back(std::string("NoBracket: ") + e.what());
    }
}

void cmd_domain(const Options& o, const NonlinearitySpec& spec, io::RunSummary& s) {
    require_hypotheses(spec);
    if (o.radii.empty()) throw UsageError("--radii needs at least one value");
    if (!(o.mesh_density > 0.0)) throw UsageError("--mesh-density must be positive");
    s.config = {{"N", o.N}, {"mesh_density", number(o.mesh_density)}};
    json radii = json::array();
    for (double R : o.radii) radii.push_back(number(R));
    s.config["radii"] = radii;
    DomainStudy study;
    try {
        study = domain_limit_study(spec, o.N, o.radii, o.mesh_density, worker_count());
    } catch (const InvalidConfig& e) {
        throw UsageError(e.what());
    }
    s.results["domain"] = io::to_json(study);
    for (const auto& row : study.rows) {
        s.verdicts.push_back(row.error.empty() ? (row.converged ? "converged" : "not converged") : "error");
        if (!row.error.empty()) s.failures.push_back("R " + io::format_real(row.R) + ": " + row.error);
    }
    if (!study.u_center_increasing) s.failures.push_back("u_center not increasing");
    if (!study.energy_decreasing_negative) s.failures.push_back("energy not strictly decreasing and negative");
    if (!study.norms_increasing) s.failures.push_back("L^q norms not increasing");
    export_csv(o.csv, [&](std::ostream& os) { io::write_domain_csv(os, study); });
    if (!o.nodal.empty()) {
        const double R = *std::max_element(o.radii.begin(), o.radii.end());
        const RadialMesh mesh = assemble(o.N, R, std::max(64, static_cast<int>(std::ceil(o.mesh_density * R))));
        const MinimizerResult res = minimize_energy(mesh, spec);
        export_csv(o.nodal, [&](std::ostream& os) { io::write_nodal_csv(os, mesh, res.u); });
    }
}

}  // namespace

int worker_count() {
    int n = 0;
    if (const char* env = std::getenv("HELMHOLTZ_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial oscillating solutions of nonlinear Helmholtz equations", "helmholtz"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("spec", o.spec_path, "spec file (JSON)")->required();
        sub->add_option("--out", o.out, "write the run summary here instead of standard output");
    };
    auto add_solver = [&](CLI::App* sub, bool with_alpha) {
        sub->add_option("--N", o.N, "space dimension")->check(CLI::PositiveNumber);
        if (with_alpha) sub->add_option("--alpha", o.alpha, "center value u(0)");
        sub->add_option("--rmax", o.r_max, "integration end");
        sub->add_option("--rtol", o.rtol, "relative tolerance");
        sub->add_option("--atol", o.atol, "absolute tolerance");
    };

    CLI::App* validate = app.add_subcommand("validate", "check the structural hypotheses of a spec");
    add_common(validate);
    validate->add_option("--echo", o.echo, "write the canonical spec to this file");

    CLI::App* solve = app.add_subcommand("solve", "integrate and classify one radial solution");
    add_common(solve);
    add_solver(solve, true);
    solve->add_option("--csv", o.csv, "trajectory CSV r,u,du");
    solve->add_option("--events", o.events, "event CSV kind,r,u");

    CLI::App* sweep = app.add_subcommand("sweep", "solve and classify along a list of center values");
    add_common(sweep);
    add_solver(sweep, false);
    sweep->add_option("--alphas", o.alphas, "center values (default: 33 values in (0, alpha0))")->delimiter(',');
    sweep->add_option("--csv", o.csv, "one row per center value");

    CLI::App* decay = app.add_subcommand("decay", "fit the decay exponent and check the psi monitor");
    add_common(decay);
    add_solver(decay, true);
    decay->add_option("--rlo", o.r_lo, "start of the fit range (default rmax/10)");
    decay->add_option("--csv", o.csv, "trajectory CSV r,u,du");
    decay->add_option("--events", o.events, "event CSV kind,r,u");

    CLI::App* threshold = app.add_subcommand("threshold", "bracket alpha0 by the change of verdict");
    add_common(threshold);
    add_solver(threshold, false);

    CLI::App* domain = app.add_subcommand("domain", "energy minimizers on growing balls");
    add_common(domain);
    domain->add_option("--N", o.N, "space dimension")->check(CLI::PositiveNumber);
    domain->add_option("--radii", o.radii, "ball radii")->delimiter(',');
    domain->add_option("--mesh-density", o.mesh_density, "mesh nodes per unit radius");
    domain->add_option("--csv", o.csv, "table R,lambda1,u_center,energy,energy_density,l1,l2,l4");
    domain->add_option("--nodal", o.nodal, "minimizer r,u on the largest ball");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help() << '\n' << io::schema_help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help() << '\n' << io::schema_help();
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string command = chosen->get_name();
    io::RunSummary s;
    s.command = command;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const NonlinearitySpec spec = io::load_spec(o.spec_path);
        s.spec = spec;
        if (command == "validate") cmd_validate(o, spec, s);
        else if (command == "solve") cmd_solve(o, spec, s);
        else if (command == "sweep") cmd_sweep(o, spec, s);
        else if (command == "decay") cmd_decay(o, spec, s);
        else if (command == "threshold") cmd_threshold(o, spec, s);
        else if (command == "domain") cmd_domain(o, spec, s);
        s.exit_code = s.failures.empty() ? 0 : 1;
    } catch (const InvalidSpec& e) {
        err << "error: " << e.what() << "\n\n" << io::schema_help();
        s.failures.push_back(e.what());
        s.exit_code = 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << chosen->help();
        s.failures.push_back(e.what());
        s.exit_code = 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        s.failures.push_back(e.what());
        s.exit_code = 1;
    }
    s.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string doc = io::to_json(s).dump(2) + "\n";
    try {
        if (o.out.empty()) out << doc;
        else write_file(o.out, doc);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return s.exit_code;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace helmholtz::cli
