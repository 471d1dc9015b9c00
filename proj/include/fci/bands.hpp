#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "fci/geometry.hpp"
#include "fci/model.hpp"

namespace fci {

/// Single-particle Bloch problem of the two-site / two-species unit cell.
/// k is measured in 1/l; the matrix basis order is
/// (A,+), (A,-), (B,+), (B,-).
struct BlochHamiltonian {
    Vec2 k;
    Eigen::Matrix4cd matrix;
};

struct BandDiagnostics {
    std::array<int, 4> chern{};  // per band, lowest first; they sum to zero
    double flatness{0.0};        // lowest-band gap / width
    double sigma_b{0.0};         // rms relative curvature deviation, lowest band
};

/// Bloch matrix with distance-vector phase factors e^{i k.delta} summed over
/// every bond vector within the coupling cutoff (atomic convention).
BlochHamiltonian bloch_hamiltonian(Vec2 k, const CouplingSet& couplings,
                                   const HoneycombSpec& spec = HoneycombSpec::standard());

/// Reciprocal primitive vectors (units 1/l) with g_i . a_j = 2 pi delta_ij.
std::pair<Vec2, Vec2> reciprocal_vectors(const HoneycombSpec& spec = HoneycombSpec::standard());

/// Sorted band energies along a k path.
std::vector<std::array<double, 4>> band_structure(
    const std::vector<Vec2>& path, const CouplingSet& couplings,
    const HoneycombSpec& spec = HoneycombSpec::standard());

/// Gamma -> K -> M -> Gamma sampling with n points per segment.
std::vector<Vec2> standard_path(int n_per_segment,
                                const HoneycombSpec& spec = HoneycombSpec::standard());

/// Fukui lattice Chern number of one band on an n x n reciprocal-cell grid.
/// Throws bands.BandTouching when the band is not separated everywhere.
int chern_number_sp(int band, const CouplingSet& couplings, int grid_n,
                    const HoneycombSpec& spec = HoneycombSpec::standard());

/// Per-band Chern numbers, flatness ratio and Berry-curvature fluctuation
/// sigma_B of the lowest band.  sigma_B is the rms deviation of
/// B(k) A_BZ / (2 pi C) from one, with B(k) evaluated in the distance-vector
/// convention (the same convention the printed value 0.4 refers to).
BandDiagnostics band_quality(const CouplingSet& couplings, int grid_n = 48,
                             const HoneycombSpec& spec = HoneycombSpec::standard());

}  // namespace fci
