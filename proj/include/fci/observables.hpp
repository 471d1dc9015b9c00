#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fci/basis.hpp"
#include "fci/model.hpp"

namespace fci {

/// Per-site occupation <n_i> = <n^a_i + n^b_i> in a normalized state.
std::vector<double> density_expectations(const std::vector<cplx>& state,
                                         const SectorBasis& basis);

struct CorrelationResult {
    Eigen::VectorXd n;    // <n_i>
    Eigen::MatrixXd nn;   // <n_i n_j>, symmetric
};

/// Density-density correlations of a normalized state.
CorrelationResult density_correlations(const std::vector<cplx>& state,
                                       const SectorBasis& basis);

/// Von Neumann entanglement entropy (nats) of the reduced state on the given
/// site subset, by Schmidt decomposition across the site bipartition.
/// The subset must be a nonempty proper subset of the sites.
double entanglement_entropy(const std::vector<cplx>& state, const SectorBasis& basis,
                            const std::vector<int>& subsystem);

}  // namespace fci
