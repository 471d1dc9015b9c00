#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "fci/geometry.hpp"

namespace fci {

using cplx = std::complex<double>;

/// Boson flavors: A = |+> (created by a^dag), B = |-> (created by b^dag).
enum class Species : std::uint8_t { A = 0, B = 1 };

/// Local occupation labels used to index density-density couplings.
enum class Flavor : std::uint8_t { vac = 0, plus = 1, minus = 2 };

/// All Hamiltonian parameters: level splitting, per-distance-class hopping,
/// flip and density-density amplitudes (MHz, E/h) and the range cutoff in
/// units of l.
struct CouplingSet {
    double splitting{0.0};  // energy offset of every |+> excitation
    std::array<double, 3> hop_a{};   // indexed by DistanceClass
    std::array<double, 3> hop_b{};
    std::array<double, 3> flip_abs{};
    // v[alpha][beta][class], alpha/beta indexed by Flavor; symmetric in (alpha, beta)
    std::array<std::array<std::array<double, 3>, 3>, 3> v{};
    double cutoff_l{2.0};

    double density_coupling(Flavor alpha, Flavor beta, DistanceClass c) const {
        return v[static_cast<int>(alpha)][static_cast<int>(beta)][static_cast<int>(c)];
    }
    void set_density_coupling(Flavor alpha, Flavor beta, DistanceClass c, double value) {
        v[static_cast<int>(alpha)][static_cast<int>(beta)][static_cast<int>(c)] = value;
        v[static_cast<int>(beta)][static_cast<int>(alpha)][static_cast<int>(c)] = value;
    }
    void validate() const;  // symmetry and finiteness
};

/// Couplings of the proposed experiment (MHz).
CouplingSet default_couplings();

struct DriveParams {
    std::vector<double> rabi_profile;  // per-site multiplier in [0, 1]
    double rabi{0.0};                  // MHz
    double detuning{0.0};              // MHz
};

struct EffectiveParams {
    double hop_b{0.49};  // nearest-neighbor hopping scale (MHz)
    double zeta{-0.207};
    double lambda{0.254};
};

struct Twist {
    double theta1{0.0};
    double theta2{0.0};
};

/// Second-quantized term; off-diagonal kinds store one orientation and the
/// Hermitian conjugate is implied on assembly.
struct Term {
    enum class Kind : std::uint8_t {
        hop_a,            // amp a+_i a_j + h.c.
        hop_b,            // amp b+_i b_j + h.c.
        flip,             // amp a+_i b_j + h.c.
        onsite_a,         // amp n^a_i                (amp real)
        density,          // amp n^{si}_i             (amp real)
        density_density,  // amp n^{si}_i n^{sj}_j    (amp real)
        drive,            // amp b+_i + conj(amp) b_i
        three_site,       // amp b+_i b_j n_mid + h.c.
        constant,         // amp                      (amp real)
    };
    Kind kind;
    int i{-1}, j{-1}, mid{-1};
    Species si{Species::A}, sj{Species::A};
    cplx amp{0.0, 0.0};
};

struct TermList {
    std::vector<Term> terms;

    void add(Term t) { terms.push_back(t); }
    void append(const TermList& other) {
        terms.insert(terms.end(), other.terms.begin(), other.terms.end());
    }
    bool conserves_particles() const;  // false once a drive term is present
    std::size_t size() const { return terms.size(); }
};

/// Kinetic part: species-conserving hops, spin-orbit flips with phase
/// e^{-2 i phi}, the splitting on every site, and twist phases e^{i theta.w}
/// on boundary-crossing bonds.
TermList hopping_terms(const std::vector<Bond>& bonds, const CouplingSet& c,
                       const Cluster& cluster, Twist twist = {});

/// Density-density interactions with n^0 = 1 - n^a - n^b expanded into
/// constant, single-density and two-density terms over species {a, b}.
TermList interaction_terms(const std::vector<Bond>& bonds, const CouplingSet& c);

/// Microwave drive amp Omega (b+_i + b_i) per site scaled by the profile,
/// plus the detuning -delta (n^a_i + n^b_i).
TermList drive_terms(const DriveParams& drive, const Cluster& cluster);

/// Single-species effective model: NN and NNNN hopping, NN density-density,
/// and NNN hopping with an occupation-conditioned flux term.  p is +1 for a
/// hop that is clockwise around the hexagon enclosing the NNN pair.
/// Throws model.MissingMidSite if the intermediate site of an NNN bond is
/// absent from the cluster.
TermList effective_terms(const Cluster& cluster, const std::vector<Bond>& bonds,
                         const EffectiveParams& eff, Twist twist = {});

}  // namespace fci
