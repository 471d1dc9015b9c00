#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fci/lanczos.hpp"
#include "fci/model.hpp"

namespace fci {

/// Builds the Hamiltonian terms for one point of the twist torus.
using TwistFactory = std::function<TermList(Twist)>;

struct FlowResult {
    std::vector<double> thetas;
    std::vector<std::vector<double>> energies;  // one row of k values per theta
};

/// Lowest k levels on a uniform [0, 2*pi] scan (inclusive endpoints) of one
/// twist angle, the other held at zero.
FlowResult spectral_flow(const TwistFactory& factory, const SectorBasis& basis, int k,
                         int n_points, int axis, const EigenOptions& opts = {});

struct BerryGrid {
    int grid_n{0};
    int manifold_dim{0};
    int total_chern{0};
    Eigen::MatrixXd curvature;  // plaquette phases F(i, j); sums to 2 pi C
    double min_manifold_gap{0.0};
};

struct ChernResult {
    int chern{0};
    BerryGrid berry;
};

/// Many-body Chern number of the lowest `manifold_dim` states over the twist
/// torus, by the non-abelian Fukui construction with determinant links.
/// Throws edcore.GapClosure if the manifold gap drops below gap_tol anywhere
/// on the grid or if a link determinant degenerates.
ChernResult many_body_chern(const TwistFactory& factory, const SectorBasis& basis,
                            int manifold_dim, int grid_n,
                            const EigenOptions& opts = {}, double gap_tol = 1e-6);

}  // namespace fci
