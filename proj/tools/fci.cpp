#include <CLI11.hpp>
#include <iostream>

#include "fci/runner.hpp"

namespace {

// machine-readable failure record, one JSON object per line on stderr
void report_error(const std::string& module, const std::string& code,
                  const std::string& message) {
    auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            if (c == '\n') { out += "\\n"; continue; }
            out += c;
        }
        return out;
    };
    std::cerr << R"({"error":{"module":")" << escape(module) << R"(","code":")"
              << escape(code) << R"(","message":")" << escape(message) << "\"}}\n";
}

}  // namespace

int main(int argc, char** argv) {
    fci::RunConfig rc;
    CLI::App app{"Hard-core boson fractional Chern insulator pipelines"};
    app.require_subcommand(1);

    app.add_option("--out", rc.out_dir, "output directory")->capture_default_str();
    app.add_option("--config", rc.config_path, "structured key/value config file");
    app.add_option("--seed", rc.seed, "random seed")->capture_default_str();
    app.add_option("--threads", rc.threads, "worker threads (0: FCI_THREADS or 1)");
    app.add_option("--mem-budget", rc.memory_budget, "memory budget in bytes")
        ->capture_default_str();

    auto add_geometry = [&](CLI::App* cmd) {
        cmd->add_option("--preset", rc.preset, "named cluster preset");
        cmd->add_option("--cluster", rc.cluster_file, "cluster record file");
    };
    auto add_solver = [&](CLI::App* cmd) {
        cmd->add_option("-k,--levels", rc.k, "number of eigenpairs")->capture_default_str();
        cmd->add_option("--tol", rc.tol, "residual tolerance")->capture_default_str();
        cmd->add_option("--filling", rc.filling, "particle filling, e.g. 1/4")
            ->capture_default_str();
        cmd->add_option("--model", rc.model, "full|effective")->capture_default_str();
    };

    auto* bands = app.add_subcommand("bands", "single-particle band diagnostics");
    bands->add_option("--grid", rc.band_grid, "reciprocal grid")->capture_default_str();
    bands->add_option("--path-points", rc.path_points, "points per path segment")
        ->capture_default_str();

    auto* ed = app.add_subcommand("ed", "lowest eigenpairs of a sector");
    add_geometry(ed);
    add_solver(ed);

    auto* flow = app.add_subcommand("flow", "spectral flow under one twist angle");
    add_geometry(flow);
    add_solver(flow);
    flow->add_option("--points", rc.flow_points, "scan points")->capture_default_str();
    flow->add_option("--axis", rc.flow_axis, "twist axis, 1 or 2")->capture_default_str();

    auto* chern = app.add_subcommand("chern", "many-body Chern number on the twist torus");
    add_geometry(chern);
    add_solver(chern);
    chern->add_option("--grid", rc.twist_grid, "twist grid")->capture_default_str();
    chern->add_option("--manifold", rc.manifold_dim, "ground manifold dimension")
        ->capture_default_str();

    auto* corr = app.add_subcommand("correlations", "ground-state density correlations");
    add_geometry(corr);
    add_solver(corr);

    auto* entropy = app.add_subcommand("entropy", "ground-state entanglement entropy");
    add_geometry(entropy);
    add_solver(entropy);
    entropy->add_option("--subsystem", rc.subsystem, "site indices of the cut");

    auto* sweep = app.add_subcommand("sweep", "adiabatic preparation gap scan");
    add_geometry(sweep);
    add_solver(sweep);
    sweep->add_option("--ntau", rc.n_tau, "tau samples")->capture_default_str();
    sweep->add_option("--profile", rc.profile_weights,
                      "ring weights, outermost first (single 1 = uniform)");
    sweep->add_option("--delta0", rc.detuning0, "initial detuning")->capture_default_str();
    sweep->add_option("--delta1", rc.detuning1, "final detuning")->capture_default_str();
    sweep->add_option("--rabi-max", rc.rabi_max, "peak Rabi amplitude")
        ->capture_default_str();

    auto* detect = app.add_subcommand("detect", "fractional charge edge scan");
    add_geometry(detect);
    add_solver(detect);
    detect->add_option("--regime", rc.regime, "topological|trivial")->capture_default_str();
    detect->add_option("--mu-max", rc.mu_max, "largest edge potential")
        ->capture_default_str();
    detect->add_option("--mu-step", rc.mu_step, "edge potential step")
        ->capture_default_str();
    detect->add_option("--edge-cols", rc.edge_columns,
                       "edge width in cell columns (0: geometry default)");

    auto* fit = app.add_subcommand("fit", "fitting and post-processing");
    fit->add_option("--model", rc.fit_model, "arealaw|chiextrap|plateau|twostage")
        ->capture_default_str();
    fit->add_option("--in", rc.input_path, "input CSV")->required();
    fit->add_option("--target", rc.target_density, "plateau target density")
        ->capture_default_str();
    fit->add_option("--tol", rc.plateau_tol, "plateau density tolerance")
        ->capture_default_str();
    fit->add_option("--chi-min", rc.chi_min, "smallest bond dimension used")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0)
            report_error("cli", "ConfigParse", e.what());
        return app.exit(e);
    }

    rc.command = app.get_subcommands().front()->get_name();
    try {
        return fci::run(rc);
    } catch (const fci::Error& e) {
        report_error(e.module(), e.code(), e.what());
        return 1;
    } catch (const std::exception& e) {
        report_error("cli", "Internal", e.what());
        return 2;
    }
}
