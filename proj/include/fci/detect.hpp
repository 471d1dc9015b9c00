#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fci/geometry.hpp"
#include "fci/lanczos.hpp"
#include "fci/model.hpp"

namespace fci {

/// Opposite edge potentials on a cylinder: -mu on the left site set and +mu
/// on the right one, so mu >= 0 attracts particles to the left edge.
struct EdgeProbeConfig {
    Cluster cluster;
    std::vector<int> left_sites, right_sites;
    std::vector<double> mu_values;  // MHz, >= 0
};

/// Left/right edge sets from the outermost cell columns of a cylinder.
EdgeProbeConfig make_edge_probe(const Cluster& cylinder, int edge_columns = 0,
                                double mu_max = 1.0, double mu_step = 0.025);

struct ChargeScanResult {
    std::vector<double> mu;
    std::vector<double> n_left, n_right, energy;
    Eigen::MatrixXd site_density;  // one row per mu value
};

/// Ground state at fixed filling for each edge potential; reports the edge
/// particle numbers and the per-site density map.
ChargeScanResult charge_scan(const EdgeProbeConfig& config, const CouplingSet& couplings,
                             double filling = 0.25, const EigenOptions& opts = {});

/// Couplings of the topologically trivial reference: the level splitting
/// raised by 50 MHz, everything else unchanged.
CouplingSet trivial_mode(CouplingSet couplings);

/// Largest increase of n_left between adjacent samples (step detector).
double max_adjacent_jump(const std::vector<double>& n_left);

}  // namespace fci
