#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fci/basis.hpp"
#include "fci/model.hpp"

namespace fci {

/// One resolved invocation of the pipeline dispatcher.
struct RunConfig {
    std::string command;  // bands|ed|flow|chern|correlations|entropy|sweep|detect|fit

    // geometry
    std::string preset;        // named cluster, or
    std::string cluster_file;  // imported site records

    // shared knobs
    std::string out_dir{"."};
    std::string config_path;
    int k{10};
    double tol{1e-9};
    std::uint64_t seed{1};
    int threads{0};  // 0: FCI_THREADS or 1
    std::uint64_t memory_budget{SectorBasis::kDefaultBudget};
    std::string filling{"1/4"};

    // bands
    int band_grid{48};
    int path_points{40};

    // chern / flow
    int twist_grid{6};
    int manifold_dim{2};
    int flow_points{16};
    int flow_axis{1};
    std::string model{"full"};  // full|effective for flow/chern/sweep

    // entropy
    std::vector<int> subsystem;

    // sweep
    int n_tau{61};
    std::vector<double> profile_weights{1.0};
    double detuning0{-1.47};
    double detuning1{-0.73};
    double rabi_max{2.0};

    // detect
    std::string regime{"topological"};  // topological|trivial
    double mu_max{1.0};
    double mu_step{0.025};
    int edge_columns{0};  // 0: geometry default

    // fit
    std::string fit_model{"arealaw"};  // arealaw|chiextrap|plateau|twostage
    std::string input_path;
    double target_density{0.25};
    double plateau_tol{0.01};
    double chi_min{200.0};
};

/// Execute one command: writes CSV outputs under out_dir and a short summary
/// to stdout.  Returns the process exit status; failures are reported as a
/// machine-readable JSON record on stderr by the caller.
int run(const RunConfig& config);

double parse_filling(const std::string& text);  // "1/4" or "0.25"

}  // namespace fci
