#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fci/errors.hpp"

namespace fci {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Polar angle of a nonzero vector, in [0, 2*pi).
double polar_angle(Vec2 delta);

enum class Sublattice : std::uint8_t { A = 0, B = 1 };

/// Honeycomb geometry: triangular Bravais lattice with a two-site basis.
/// Primitive vectors and basis offsets are in units of the lattice
/// spacing l (= nearest-neighbor distance); positions are in micrometers.
struct HoneycombSpec {
    double spacing_um{12.0};
    Vec2 a1, a2;        // primitive vectors, units of l
    Vec2 offset_a, offset_b;  // sublattice offsets, units of l

    /// Conventional frame: a1 = sqrt(3)(1,0), a2 = sqrt(3)(1/2,sqrt(3)/2),
    /// A at the origin and B displaced by one NN distance.
    static HoneycombSpec standard(double spacing_um = 12.0);

    void validate() const;  // throws lattice.DegenerateSpan / BadSpec
};

struct Site {
    Vec2 position;  // micrometers
    Sublattice sublattice;
    std::array<int, 2> cell{0, 0};  // integer cell coordinates at construction
};

struct Cluster {
    std::vector<Site> sites;
    std::vector<Vec2> periods;  // 0, 1 or 2 translation vectors (micrometers)
    double spacing_um{12.0};
    std::string label;

    int size() const { return static_cast<int>(sites.size()); }
    bool periodic() const { return !periods.empty(); }
};

enum class DistanceClass : std::uint8_t { nn = 0, nnn = 1, nnnn = 2 };

/// Distance of a class in units of l: {1, sqrt(3), 2}.
double class_ratio(DistanceClass c);

struct Bond {
    int i, j;  // i < j, one stored orientation per unordered pair
    DistanceClass cls;
    double phi;  // polar angle of the minimum-image vector r_j - r_i
    std::array<int, 2> winding;  // boundary crossings per periodic direction
};

/// Torus cluster spanned by span1, span2 (integer combinations of the
/// primitive vectors). Site count is 2*|det|.
Cluster make_torus_cluster(const HoneycombSpec& spec, std::array<int, 2> span1,
                           std::array<int, 2> span2, std::string label = {});

/// Cylinder of Lx columns of cells, periodic around Ly cells (direction a2).
Cluster make_cylinder(const HoneycombSpec& spec, int Lx, int Ly);

/// Open parallelogram flake of nx * ny complete hexagons
/// (nx = ny = 2 gives the 16-site flake).
Cluster make_parallelogram_flake(const HoneycombSpec& spec, int nx, int ny);

/// Open hexagonal flake: a central hexagon plus `shells` rings of
/// hexagons (shells = 1 gives the 24-site flake).
Cluster make_hex_flake(const HoneycombSpec& spec, int shells);

/// Named presets: torus clusters "16", "20", "24A", "24B", "26", "28",
/// open flakes "flake16", "flake24", cylinders "cyl4x3", "cyl8x3".
Cluster preset_cluster(const std::string& name, double spacing_um = 12.0);
std::vector<std::string> preset_names();

/// Minimum-image displacement r_j - r_i and the winding integers used.
std::pair<Vec2, std::array<int, 2>> min_image(const Cluster& cluster, int i, int j);

/// All unordered pairs with minimum-image distance <= cutoff (units of l).
/// Throws lattice.SelfInteraction if the cutoff exceeds half the shortest
/// periodic translation, lattice.UnknownDistanceClass if a pair distance
/// matches no class in {1, sqrt(3), 2} l.
std::vector<Bond> enumerate_bonds(const Cluster& cluster, double cutoff_l);

/// Rigid rotation of every site position and periodic vector (gauge test
/// helper; spectra must be invariant).
Cluster rotated_cluster(const Cluster& cluster, double angle);

/// Structured text records: one line per site "index,sublattice,x,y" with
/// header lines for label, spacing and periodic vectors.
std::string export_cluster(const Cluster& cluster);
Cluster import_cluster(std::istream& in);
Cluster import_cluster_file(const std::string& path);

}  // namespace fci
