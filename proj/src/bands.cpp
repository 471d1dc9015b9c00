#include "fci/bands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("bands", code, msg);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Displacement {
    Vec2 delta;       // in units of l, from sublattice `s` to sublattice `sp`
    Vec2 bravais;     // the lattice-vector part (periodic-gauge phase)
    int s, sp;        // 0 = A, 1 = B
    DistanceClass cls;
    double phi;
};

// All displacement vectors within the cutoff, from each sublattice.
std::vector<Displacement> displacement_table(const HoneycombSpec& spec, double cutoff) {
    spec.validate();
    std::vector<Displacement> out;
    const Vec2 offs[2] = {spec.offset_a, spec.offset_b};
    const int r = static_cast<int>(std::ceil(cutoff / std::min(spec.a1.norm(), spec.a2.norm()))) + 2;
    for (int s = 0; s < 2; ++s) {
        for (int m = -r; m <= r; ++m) {
            for (int n = -r; n <= r; ++n) {
                const Vec2 R = spec.a1 * double(m) + spec.a2 * double(n);
                for (int sp = 0; sp < 2; ++sp) {
                    const Vec2 d = R + offs[sp] - offs[s];
                    const double len = d.norm();
                    if (len < 1e-12 || len > cutoff + 1e-6) continue;
                    DistanceClass cls{};
                    bool found = false;
                    for (auto c : {DistanceClass::nn, DistanceClass::nnn, DistanceClass::nnnn}) {
                        if (std::abs(len - class_ratio(c)) < 1e-6) {
                            cls = c;
                            found = true;
                            break;
                        }
                    }
                    if (!found)
                        fail("UnknownDistanceClass",
                             "bond vector at distance " + std::to_string(len) + " l");
                    out.push_back({d, R, s, sp, cls, polar_angle(d)});
                }
            }
        }
    }
    return out;
}

Eigen::Matrix4cd bloch_matrix(Vec2 k, const CouplingSet& c,
                              const std::vector<Displacement>& table, bool periodic_gauge) {
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    for (const auto& d : table) {
        const int cls = static_cast<int>(d.cls);
        const Vec2 ph_vec = periodic_gauge ? d.bravais : d.delta;
        const cplx f = std::polar(1.0, k.dot(ph_vec));
        const cplx w = c.flip_abs[cls] * std::polar(1.0, -2.0 * d.phi);
        const int row = 2 * d.s, col = 2 * d.sp;
        h(row + 0, col + 0) += -c.hop_a[cls] * f;
        h(row + 0, col + 1) += w * f;
        h(row + 1, col + 0) += std::conj(w) * f;
        h(row + 1, col + 1) += -c.hop_b[cls] * f;
    }
    h(0, 0) += c.splitting;
    h(2, 2) += c.splitting;
    return h;
}

Eigen::Matrix4cd dk_matrix(Vec2 k, const CouplingSet& c,
                           const std::vector<Displacement>& table, int axis) {
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    for (const auto& d : table) {
        const int cls = static_cast<int>(d.cls);
        const double comp = axis == 0 ? d.delta.x : d.delta.y;
        const cplx f = cplx{0.0, comp} * std::polar(1.0, k.dot(d.delta));
        const cplx w = c.flip_abs[cls] * std::polar(1.0, -2.0 * d.phi);
        const int row = 2 * d.s, col = 2 * d.sp;
        h(row + 0, col + 0) += -c.hop_a[cls] * f;
        h(row + 0, col + 1) += w * f;
        h(row + 1, col + 0) += std::conj(w) * f;
        h(row + 1, col + 1) += -c.hop_b[cls] * f;
    }
    return h;
}

}  // namespace

BlochHamiltonian bloch_hamiltonian(Vec2 k, const CouplingSet& couplings,
                                   const HoneycombSpec& spec) {
    couplings.validate();
    const auto table = displacement_table(spec, couplings.cutoff_l);
    return {k, bloch_matrix(k, couplings, table, false)};
}

std::pair<Vec2, Vec2> reciprocal_vectors(const HoneycombSpec& spec) {
    const double det = spec.a1.cross(spec.a2);
    const Vec2 g1 = Vec2{spec.a2.y, -spec.a2.x} * (kTwoPi / det);
    const Vec2 g2 = Vec2{-spec.a1.y, spec.a1.x} * (kTwoPi / det);
    return {g1, g2};
}

std::vector<std::array<double, 4>> band_structure(const std::vector<Vec2>& path,
                                                  const CouplingSet& couplings,
                                                  const HoneycombSpec& spec) {
    if (path.empty()) fail("BadRequest", "empty k path");
    couplings.validate();
    const auto table = displacement_table(spec, couplings.cutoff_l);
    std::vector<std::array<double, 4>> out;
    out.reserve(path.size());
    for (const Vec2& k : path) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
            bloch_matrix(k, couplings, table, false), Eigen::EigenvaluesOnly);
        const auto& e = es.eigenvalues();
        out.push_back({e[0], e[1], e[2], e[3]});
    }
    return out;
}

std::vector<Vec2> standard_path(int n_per_segment, const HoneycombSpec& spec) {
    const auto [g1, g2] = reciprocal_vectors(spec);
    const Vec2 gamma{0.0, 0.0};
    const Vec2 kpt = (g1 * 2.0 + g2) * (1.0 / 3.0);
    const Vec2 mpt = (g1 + g2) * 0.5;
    std::vector<Vec2> path;
    auto segment = [&](Vec2 from, Vec2 to, bool include_end) {
        for (int i = 0; i < n_per_segment + (include_end ? 1 : 0); ++i) {
            const double t = double(i) / n_per_segment;
            path.push_back(from + (to - from) * t);
        }
    };
    segment(gamma, kpt, false);
    segment(kpt, mpt, false);
    segment(mpt, gamma, true);
    return path;
}

int chern_number_sp(int band, const CouplingSet& couplings, int grid_n,
                    const HoneycombSpec& spec) {
    if (band < 0 || band > 3) fail("BadRequest", "band index must be 0..3");
    if (grid_n < 4) fail("BadRequest", "Fukui grid too coarse");
    couplings.validate();
    const auto table = displacement_table(spec, couplings.cutoff_l);
    const auto [g1, g2] = reciprocal_vectors(spec);

    std::vector<Eigen::Vector4cd> states(static_cast<std::size_t>(grid_n) * grid_n);
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Vec2 k = g1 * (double(i) / grid_n) + g2 * (double(j) / grid_n);
            // periodic gauge: H(k + G) = H(k) exactly, so wrapped links close
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
                bloch_matrix(k, couplings, table, true));
            const auto& e = es.eigenvalues();
            const double gap_below = band > 0 ? e[band] - e[band - 1] : 1.0;
            const double gap_above = band < 3 ? e[band + 1] - e[band] : 1.0;
            if (gap_below < 1e-9 || gap_above < 1e-9)
                fail("BandTouching", "band " + std::to_string(band) +
                                         " touches a neighbor on the Fukui grid");
            states[static_cast<std::size_t>(i) * grid_n + j] = es.eigenvectors().col(band);
        }
    }
    auto link = [&](int pi, int pj, int qi, int qj) {
        const auto& a = states[static_cast<std::size_t>(pi) * grid_n + pj];
        const auto& b = states[static_cast<std::size_t>(qi) * grid_n + qj];
        return a.dot(b);  // Eigen's dot conjugates the left argument
    };
    double total = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const int i1 = (i + 1) % grid_n, j1 = (j + 1) % grid_n;
            const cplx prod = link(i, j, i1, j) * link(i1, j, i1, j1) *
                              link(i1, j1, i, j1) * link(i, j1, i, j);
            total += -std::arg(prod);
        }
    }
    const double c = total / kTwoPi;
    const long rounded = std::lround(c);
    if (std::abs(c - rounded) > 1e-6)
        fail("BandTouching", "plaquette phases sum to non-integer " + std::to_string(c));
    return static_cast<int>(rounded);
}

BandDiagnostics band_quality(const CouplingSet& couplings, int grid_n,
                             const HoneycombSpec& spec) {
    couplings.validate();
    const auto table = displacement_table(spec, couplings.cutoff_l);
    const auto [g1, g2] = reciprocal_vectors(spec);

    BandDiagnostics out;
    for (int b = 0; b < 4; ++b) out.chern[b] = chern_number_sp(b, couplings, grid_n, spec);

    double e0_min = 1e300, e0_max = -1e300, e1_min = 1e300;
    double sum = 0.0, sum_sq = 0.0;
    const double area_bz = std::abs(g1.cross(g2));
    const std::size_t npts = static_cast<std::size_t>(grid_n) * grid_n;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Vec2 k = g1 * ((i + 0.5) / grid_n) + g2 * ((j + 0.5) / grid_n);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
                bloch_matrix(k, couplings, table, false));
            const auto& e = es.eigenvalues();
            e0_min = std::min(e0_min, e[0]);
            e0_max = std::max(e0_max, e[0]);
            e1_min = std::min(e1_min, e[1]);
            if (e[1] - e[0] < 1e-9) fail("BandTouching", "lowest bands touch");
            // Berry curvature of the lowest band (distance-vector convention)
            const Eigen::Matrix4cd hx = dk_matrix(k, couplings, table, 0);
            const Eigen::Matrix4cd hy = dk_matrix(k, couplings, table, 1);
            const auto& v = es.eigenvectors();
            double curv = 0.0;
            for (int m = 1; m < 4; ++m) {
                const cplx num = (v.col(0).adjoint() * hx * v.col(m))(0, 0) *
                                 (v.col(m).adjoint() * hy * v.col(0))(0, 0);
                curv += -2.0 * num.imag() / ((e[m] - e[0]) * (e[m] - e[0]));
            }
            const double normalized = curv * area_bz / (kTwoPi * out.chern[0]);
            sum += normalized;
            sum_sq += (normalized - 1.0) * (normalized - 1.0);
        }
    }
    const double width = e0_max - e0_min;
    const double gap = e1_min - e0_max;
    out.flatness = gap / width;
    out.sigma_b = std::sqrt(sum_sq / double(npts));
    (void)sum;
    return out;
}

}  // namespace fci
