// Batch experiment runner: every verification is a subcommand driven by a
// JSON config, emitting CSV/JSON into --out. Deterministic for fixed
// (config, seed): all numbers are serialized at 17 significant digits and no
// timestamps or timing data enter the outputs.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "qca/evolution.hpp"
#include "qca/fermions.hpp"
#include "qca/gauge.hpp"
#include "qca/io.hpp"
#include "qca/limits.hpp"
#include "qca/rng.hpp"

namespace {

using json = nlohmann::json;
using namespace qca;

constexpr double kResidualContract = 1e-12;

struct CliArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    json cfg;
    try {
        f >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    if (cfg.value("schema_version", 0) != 1)
        throw ConfigError("config schema_version must be 1");
    return cfg;
}

template <class T>
T require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw ConfigError("missing required config field: " + where + "." + key);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad config field " + where + "." + key + ": " + e.what());
    }
}

LatticeSpec spec_from_config(const json& cfg) {
    if (!cfg.contains("lattice") || !cfg["lattice"].is_object())
        throw ConfigError("config requires a \"lattice\" object");
    const json& lat = cfg["lattice"];
    const int num_sites = require<int>(lat, "num_sites", "lattice");
    const int cutoff = require<int>(lat, "cutoff", "lattice");
    const std::string trunc = require<std::string>(lat, "truncation", "lattice");
    TruncationMode mode;
    if (trunc == "cyclic")
        mode = TruncationMode::CyclicWrap;
    else if (trunc == "hard")
        mode = TruncationMode::HardCutoff;
    else
        throw ConfigError("lattice.truncation must be \"cyclic\" or \"hard\"");
    const auto budget = lat.value<std::int64_t>("budget", LatticeSpec::kDefaultBudget);

    LatticeSpec spec(num_sites, cutoff, mode, budget);
    if (cfg.contains("physics")) {
        const json& ph = cfg["physics"];
        if (!ph.is_object()) throw ConfigError("\"physics\" must be an object");
        spec.mass = ph.value("mass", 0.0);
        spec.coupling = ph.value("coupling", 0.0);
        spec.speed = ph.value("speed", 1.0);
        spec.epsilon = ph.value("epsilon", 0.01);
        spec.alpha = ph.value("alpha", 1.0);
    }
    validate_physics(spec);
    return spec;
}

GateParams gate_from_config(const json& cfg, const LatticeSpec& spec) {
    GateParams params = scaling_params(spec);
    if (cfg.contains("gate")) {
        const json& g = cfg["gate"];
        const std::string variant = g.value("variant", "W");
        if (variant == "W")
            params.variant = GateVariant::W;
        else if (variant == "WPrime")
            params.variant = GateVariant::WPrime;
        else if (variant == "WDoublePrime")
            params.variant = GateVariant::WDoublePrime;
        else
            throw ConfigError("gate.variant must be W, WPrime or WDoublePrime");
    }
    return params;
}

std::uint64_t effective_seed(const json& cfg, const CliArgs& args) {
    if (args.seed) return *args.seed;
    return cfg.value<std::uint64_t>("seed", 0);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open output file: " + path.string());
    f << text;
    if (!f) throw ConfigError("write failed: " + path.string());
}

// Config echo for provenance: nlohmann re-dump (sorted keys) is stable for a
// fixed input file.
std::string config_echo(const json& cfg) { return cfg.dump(); }

StateVector initial_state_from_config(const json& section, const LatticeSpec& spec) {
    if (!section.contains("initial_state"))
        return basis_state(vacuum_label(spec), spec);
    const json& init = section["initial_state"];
    const std::string kind = require<std::string>(init, "kind", "initial_state");
    if (kind == "vacuum") return basis_state(vacuum_label(spec), spec);
    if (kind == "single_particle") {
        const int site = require<int>(init, "site", "initial_state");
        if (site < 0 || site >= spec.num_sites)
            throw ConfigError("initial_state.site out of range");
        BasisLabel label = vacuum_label(spec);
        label.occupations[site] = 1;
        return basis_state(label, spec);
    }
    if (kind == "basis") {
        BasisLabel label;
        label.occupations =
            require<std::vector<std::uint8_t>>(init, "occupations", "initial_state");
        label.links = require<std::vector<int>>(init, "links", "initial_state");
        return basis_state(label, spec);
    }
    throw ConfigError("initial_state.kind must be vacuum, single_particle or basis");
}

int cmd_evolve(const json& cfg, const CliArgs& args) {
    const LatticeSpec spec = spec_from_config(cfg);
    const GateParams params = gate_from_config(cfg, spec);
    const json section = cfg.value("evolve", json::object());
    const int steps = require<int>(section, "steps", "evolve");
    if (steps < 0) throw ConfigError("evolve.steps must be >= 0");

    Execution exec = Execution::Serial;
    const std::string exec_name = section.value("execution", "serial");
    if (exec_name == "parallel")
        exec = Execution::Parallel;
    else if (exec_name != "serial")
        throw ConfigError("evolve.execution must be \"serial\" or \"parallel\"");
    if (args.threads > 1) exec = Execution::Parallel;

    StateVector state = initial_state_from_config(section, spec);
    const double initial_norm = state.norm();
    StepApplier applier(spec, params, exec);
    const int snapshot_every = section.value("snapshot_every", 0);

    EvolutionReport report;
    report.norms.push_back(initial_norm);
    report.observables.push_back(measure_amp(state.amp, spec, exec));
    double prev_norm = initial_norm;
    for (int s = 1; s <= steps; ++s) {
        applier.apply_step(state.amp);
        const Observables obs = measure_amp(state.amp, spec, exec);
        report.norms.push_back(obs.norm);
        report.observables.push_back(obs);
        // Norm contract: unitary wrap evolution preserves the norm; the hard
        // cutoff can only lose it.
        if (spec.truncation_mode == TruncationMode::CyclicWrap) {
            if (std::abs(obs.norm - initial_norm) > 1e-12)
                throw NumericalError("norm drifted by " +
                                     g17(std::abs(obs.norm - initial_norm)) +
                                     " at step " + std::to_string(s));
        } else if (obs.norm > prev_norm + 1e-12) {
            throw NumericalError("norm increased under hard truncation at step " +
                                 std::to_string(s));
        }
        prev_norm = obs.norm;
        if (snapshot_every > 0 && s % snapshot_every == 0 && s != steps)
            save_state((std::filesystem::path(args.out_dir) /
                        ("state_" + std::to_string(s) + ".qcastate"))
                           .string(),
                       state);
    }

    CsvOptions csv;
    csv.record_every = section.value("record_every", 1);
    csv.include_initial = section.value("include_initial", false);
    if (section.contains("observables"))
        csv.observables = section["observables"].get<std::vector<std::string>>();
    std::ostringstream csv_text;
    write_observables_csv(csv_text, report, spec, csv);
    write_text(std::filesystem::path(args.out_dir) / "observables.csv", csv_text.str());

    if (section.value("save_state", true))
        save_state((std::filesystem::path(args.out_dir) / "state.qcastate").string(),
                   state);

    const Observables& fin = report.observables.back();
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("command").value("evolve");
    w.key("config").raw(config_echo(cfg));
    w.key("steps").value(steps);
    w.key("execution").value(exec == Execution::Parallel ? "parallel" : "serial");
    w.key("initial_norm").value(initial_norm);
    w.key("final_norm").value(fin.norm);
    w.key("final_total_n").value(fin.total_n);
    w.key("final_electric_energy").value(fin.electric_energy);
    w.key("final_staggered_charge").value(fin.staggered_charge);
    w.end_object();
    write_text(std::filesystem::path(args.out_dir) / "summary.json", w.str() + "\n");
    return 0;
}

int cmd_converge(const json& cfg, const CliArgs& args) {
    const LatticeSpec spec = spec_from_config(cfg);
    const json section = cfg.value("converge", json::object());
    const auto eps_list = require<std::vector<double>>(section, "eps_list", "converge");
    if (eps_list.size() < 3)
        throw ConfigError("converge.eps_list needs at least 3 points for a fit");

    const ConvergenceCurve curve = hamiltonian_convergence(spec, eps_list);

    std::ostringstream csv;
    csv << "epsilon,residual\n";
    for (const ConvergencePoint& pt : curve.points)
        csv << g17(pt.epsilon) << "," << g17(pt.residual) << "\n";
    write_text(std::filesystem::path(args.out_dir) / "convergence.csv", csv.str());

    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("command").value("converge");
    w.key("config").raw(config_echo(cfg));
    w.key("points").begin_array();
    for (const ConvergencePoint& pt : curve.points) {
        w.begin_object();
        w.key("epsilon").value(pt.epsilon);
        w.key("residual").value(pt.residual);
        w.end_object();
    }
    w.end_array();
    w.key("slope").value(curve.slope);
    w.key("intercept").value(curve.intercept);
    w.key("degenerate").value(curve.degenerate);
    w.end_object();
    write_text(std::filesystem::path(args.out_dir) / "summary.json", w.str() + "\n");
    return 0;
}

int cmd_gauge_check(const json& cfg, const CliArgs& args) {
    const LatticeSpec spec = spec_from_config(cfg);
    const GateParams params = gate_from_config(cfg, spec);
    const json section = cfg.value("gauge_check", json::object());
    const bool cyclic = spec.truncation_mode == TruncationMode::CyclicWrap;
    const int default_margin = cyclic ? 0 : 1;
    const int margin = section.value("margin", default_margin);
    const int num_fields = section.value("num_fields", 20);
    if (num_fields < 0) throw ConfigError("gauge_check.num_fields must be >= 0");
    const std::uint64_t seed = effective_seed(cfg, args);
    Rng rng(seed);

    struct Draw {
        GaugeField field;
        bool control;
    };
    std::vector<Draw> draws;
    // phi = 0 control first, then the seeded random fields.
    draws.push_back({GaugeField{std::vector<double>(spec.num_sites, 0.0)}, true});
    for (int i = 0; i < num_fields; ++i) {
        GaugeField field;
        field.phi.resize(spec.num_sites);
        for (double& v : field.phi) {
            if (cyclic) {
                const double unit = 2.0 * std::numbers::pi / spec.link_dim();
                v = unit * static_cast<double>(rng.below(spec.link_dim()));
            } else {
                v = rng.uniform(-std::numbers::pi, std::numbers::pi);
            }
        }
        draws.push_back({std::move(field), false});
    }
    if (section.contains("fields")) {
        for (const auto& row : section["fields"]) {
            GaugeField field;
            field.phi = row.get<std::vector<double>>();
            draws.push_back({std::move(field), false});
        }
    }

    double max_residual = 0.0;
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("command").value("gauge_check");
    w.key("config").raw(config_echo(cfg));
    w.key("seed").value(static_cast<std::int64_t>(seed));
    w.key("truncation").value(cyclic ? "cyclic" : "hard");
    w.key("margin").value(margin);
    w.key("draws").begin_array();
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double residual = gauge_commutator(draws[i].field, spec, params, margin);
        max_residual = std::max(max_residual, residual);
        w.begin_object();
        w.key("index").value(static_cast<std::int64_t>(i));
        w.key("control").value(draws[i].control);
        w.key("quantized").value(is_quantized(draws[i].field, spec));
        w.key("phi").begin_array();
        for (double v : draws[i].field.phi) w.value(v);
        w.end_array();
        w.key("residual").value(residual);
        w.end_object();
    }
    w.end_array();
    w.key("max_residual").value(max_residual);
    w.key("contract").value(kResidualContract);
    w.end_object();
    write_text(std::filesystem::path(args.out_dir) / "gauge_report.json", w.str() + "\n");

    if (max_residual > kResidualContract)
        throw NumericalError("gauge commutator residual " + g17(max_residual) +
                             " exceeds contract " + g17(kResidualContract));
    return 0;
}

int cmd_dispersion(const json& cfg, const CliArgs& args) {
    const LatticeSpec spec = spec_from_config(cfg);
    const GateParams params = gate_from_config(cfg, spec);
    const json section = cfg.value("dispersion", json::object());
    const auto k_list = require<std::vector<double>>(section, "k_list", "dispersion");
    if (k_list.empty()) throw ConfigError("dispersion.k_list must be non-empty");

    const double c = spec.speed;
    const double m = spec.mass;
    double max_error = 0.0;
    std::ostringstream csv;
    csv << "k,omega_walk_plus,omega_walk_minus,omega_dirac_plus,omega_dirac_minus,"
           "error\n";
    for (double k : k_list) {
        const DispersionPair walk = walk_dispersion(k, params);
        const double dirac = std::sqrt(c * c * k * k + m * m);
        const double err = std::max(std::abs(walk.omega_plus - dirac),
                                    std::abs(walk.omega_minus + dirac));
        max_error = std::max(max_error, err);
        csv << g17(k) << "," << g17(walk.omega_plus) << "," << g17(walk.omega_minus)
            << "," << g17(dirac) << "," << g17(-dirac) << "," << g17(err) << "\n";
    }
    write_text(std::filesystem::path(args.out_dir) / "dispersion.csv", csv.str());

    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("command").value("dispersion");
    w.key("config").raw(config_echo(cfg));
    w.key("num_points").value(static_cast<std::int64_t>(k_list.size()));
    w.key("max_error").value(max_error);
    w.end_object();
    write_text(std::filesystem::path(args.out_dir) / "summary.json", w.str() + "\n");
    return 0;
}

int cmd_hamiltonian_check(const json& cfg, const CliArgs& args) {
    const LatticeSpec spec = spec_from_config(cfg);
    const json section = cfg.value("hamiltonian_check", json::object());
    const int num_draws = section.value("num_draws", 3);
    if (num_draws < 0) throw ConfigError("hamiltonian_check.num_draws must be >= 0");
    const std::uint64_t seed = effective_seed(cfg, args);
    Rng rng(seed);

    double max_residual = 0.0;
    auto track = [&max_residual](double r) {
        max_residual = std::max(max_residual, r);
        return r;
    };

    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(1);
    w.key("command").value("hamiltonian_check");
    w.key("config").raw(config_echo(cfg));
    w.key("seed").value(static_cast<std::int64_t>(seed));

    // H_QCA vs Kogut-Susskind at a = 1, plus hermiticity of both builds.
    const LinearOperator hqca = build_hqca(spec);
    const LinearOperator hs = build_hs(spec, 1.0);
    w.key("hqca_vs_hs").value(track(hqca.add(hs.scale(-1.0)).frobenius_norm()));
    w.key("hqca_hermiticity")
        .value(track(hqca.add(hqca.adjoint().scale(-1.0)).frobenius_norm()));
    w.key("hs_hermiticity")
        .value(track(hs.add(hs.adjoint().scale(-1.0)).frobenius_norm()));

    // Every CAR pair residual, for audit.
    const FermionOperatorSet f = jw_operators(spec);
    const LinearOperator id = LinearOperator::identity(spec.dim());
    w.key("car").begin_array();
    for (int p = 0; p < spec.num_sites; ++p) {
        for (int q = p; q < spec.num_sites; ++q) {
            const LinearOperator anti_pq =
                f.phi[p].compose(f.phi[q]).add(f.phi[q].compose(f.phi[p]));
            const LinearOperator anti_pdq =
                f.phi[p].compose(f.phi_dag[q]).add(f.phi_dag[q].compose(f.phi[p]));
            const double r_pp = track(anti_pq.frobenius_norm());
            const double expected = p == q ? 1.0 : 0.0;
            const double r_pd =
                track(anti_pdq.add(id.scale(-expected)).frobenius_norm());
            w.begin_object();
            w.key("p").value(p);
            w.key("q").value(q);
            w.key("phi_phi").value(r_pp);
            w.key("phi_phidag").value(r_pd);
            w.end_object();
        }
    }
    w.end_array();

    // Fermionic six-term form of the gate, random (theta, zeta) draws per pair.
    w.key("wtilde").begin_array();
    for (int d = 0; d < num_draws; ++d) {
        GateParams params;
        params.theta = rng.uniform(0.05, std::numbers::pi / 2 - 0.05);
        params.zeta = rng.uniform(-std::numbers::pi, std::numbers::pi);
        for (int p = 0; p + 1 < spec.num_sites; ++p) {
            for (int conj = 0; conj < 2; ++conj) {
                const double r = track(check_wtilde(spec, params, p, conj == 1));
                w.begin_object();
                w.key("draw").value(d);
                w.key("p").value(p);
                w.key("theta").value(params.theta);
                w.key("zeta").value(params.zeta);
                w.key("conjugated").value(conj == 1);
                w.key("residual").value(r);
                w.end_object();
            }
        }
    }
    w.end_array();

    w.key("mass_identity").begin_array();
    for (int p = 0; p + 1 < spec.num_sites; ++p) {
        w.begin_object();
        w.key("p").value(p);
        w.key("residual").value(track(mass_identity_check(spec, p)));
        w.end_object();
    }
    w.end_array();

    w.key("max_residual").value(max_residual);
    w.key("contract").value(kResidualContract);
    w.end_object();
    write_text(std::filesystem::path(args.out_dir) / "hamiltonian_report.json",
               w.str() + "\n");

    if (max_residual > kResidualContract)
        throw NumericalError("hamiltonian residual " + g17(max_residual) +
                             " exceeds contract " + g17(kResidualContract));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact state-vector verification suite for the plastic QCA of the "
                 "lattice Schwinger model"};
    app.require_subcommand(1);

    CliArgs args;
    std::uint64_t seed_flag = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "JSON config file")->required();
        sub->add_option("--out", args.out_dir, "output directory (created if missing)");
        sub->add_option("--seed", seed_flag, "override the config RNG seed")
            ->each([&](const std::string&) { args.seed = seed_flag; });
        sub->add_option("--threads", args.threads, "worker threads for kernels");
    };

    CLI::App* evolve = app.add_subcommand("evolve", "apply G repeatedly, emit observables");
    CLI::App* converge =
        app.add_subcommand("converge", "continuum-limit order of G vs exp(-2i eps H)");
    CLI::App* gauge =
        app.add_subcommand("gauge-check", "commutator residuals for random gauge fields");
    CLI::App* dispersion =
        app.add_subcommand("dispersion", "walk dispersion vs the Dirac relation");
    CLI::App* hamiltonian = app.add_subcommand(
        "hamiltonian-check", "fermionic identities and H_QCA vs Kogut-Susskind");
    for (CLI::App* sub : {evolve, converge, gauge, dispersion, hamiltonian})
        add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (args.threads < 1) throw ConfigError("--threads must be >= 1");
#ifdef _OPENMP
        omp_set_num_threads(args.threads);
#endif
        std::filesystem::create_directories(args.out_dir);
        const json cfg = load_config(args.config_path);
        if (evolve->parsed()) return cmd_evolve(cfg, args);
        if (converge->parsed()) return cmd_converge(cfg, args);
        if (gauge->parsed()) return cmd_gauge_check(cfg, args);
        if (dispersion->parsed()) return cmd_dispersion(cfg, args);
        if (hamiltonian->parsed()) return cmd_hamiltonian_check(cfg, args);
        throw ConfigError("no subcommand selected");
    } catch (const NumericalError& e) {
        std::cerr << "numerical contract violation: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
