#include "fci/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace fci {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("lattice", code, msg);
}

}  // namespace

double polar_angle(Vec2 delta) {
    if (delta.norm() == 0.0) fail("ZeroVector", "polar angle of the zero vector");
    double a = std::atan2(delta.y, delta.x);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

HoneycombSpec HoneycombSpec::standard(double spacing_um) {
    HoneycombSpec s;
    s.spacing_um = spacing_um;
    const double r3 = std::sqrt(3.0);
    s.a1 = {r3, 0.0};
    s.a2 = {r3 * 0.5, 1.5};
    s.offset_a = {0.0, 0.0};
    s.offset_b = {r3 * 0.5, 0.5};
    return s;
}

void HoneycombSpec::validate() const {
    if (!(spacing_um > 0.0)) fail("BadSpec", "lattice spacing must be positive");
    if (std::abs(a1.cross(a2)) < 1e-12)
        fail("BadSpec", "primitive vectors are linearly dependent");
    const double nn = (offset_b - offset_a).norm();
    if (std::abs(nn - 1.0) > 1e-9)
        fail("BadSpec", "basis offsets do not realize unit nearest-neighbor distance");
}

double class_ratio(DistanceClass c) {
    switch (c) {
        case DistanceClass::nn: return 1.0;
        case DistanceClass::nnn: return std::sqrt(3.0);
        case DistanceClass::nnnn: return 2.0;
    }
    fail("UnknownDistanceClass", "bad enum value");
}

namespace {

// Enumerate one set of representatives of Z^2 / <span1, span2> with exact
// integer arithmetic: cell (i,j) is kept iff adj(M)*(i,j) lies in
// [0, det) x [0, det) after normalizing the determinant sign.
std::vector<std::array<int, 2>> supercell_representatives(std::array<int, 2> s1,
                                                          std::array<int, 2> s2) {
    const long det = static_cast<long>(s1[0]) * s2[1] - static_cast<long>(s1[1]) * s2[0];
    if (det == 0) fail("DegenerateSpan", "span vectors are linearly dependent");
    // adj(M) with M = [s1 s2] as columns
    long a = s2[1], b = -s2[0], c = -s1[1], d = s1[0];
    long den = det;
    if (den < 0) { a = -a; b = -b; c = -c; d = -d; den = -den; }
    const int bound = static_cast<int>(std::abs(s1[0]) + std::abs(s1[1]) +
                                       std::abs(s2[0]) + std::abs(s2[1])) + 1;
    std::vector<std::array<int, 2>> cells;
    for (int i = -bound; i <= bound; ++i) {
        for (int j = -bound; j <= bound; ++j) {
            const long u = a * i + b * j;
            const long v = c * i + d * j;
            if (u >= 0 && u < den && v >= 0 && v < den) cells.push_back({i, j});
        }
    }
    if (static_cast<long>(cells.size()) != den)
        fail("DegenerateSpan", "internal cell enumeration mismatch");
    return cells;
}

Cluster from_cells(const HoneycombSpec& spec, const std::vector<std::array<int, 2>>& cells,
                   std::vector<Vec2> periods_l, std::string label) {
    spec.validate();
    Cluster cl;
    cl.spacing_um = spec.spacing_um;
    cl.label = std::move(label);
    const double s = spec.spacing_um;
    for (const auto& c : cells) {
        const Vec2 r = spec.a1 * double(c[0]) + spec.a2 * double(c[1]);
        cl.sites.push_back({(r + spec.offset_a) * s, Sublattice::A, c});
        cl.sites.push_back({(r + spec.offset_b) * s, Sublattice::B, c});
    }
    for (const Vec2& p : periods_l) cl.periods.push_back(p * s);
    return cl;
}

}  // namespace

Cluster make_torus_cluster(const HoneycombSpec& spec, std::array<int, 2> span1,
                           std::array<int, 2> span2, std::string label) {
    const auto cells = supercell_representatives(span1, span2);
    const Vec2 t1 = spec.a1 * double(span1[0]) + spec.a2 * double(span1[1]);
    const Vec2 t2 = spec.a1 * double(span2[0]) + spec.a2 * double(span2[1]);
    if (label.empty()) label = std::to_string(2 * cells.size());
    return from_cells(spec, cells, {t1, t2}, std::move(label));
}

Cluster make_cylinder(const HoneycombSpec& spec, int Lx, int Ly) {
    if (Lx < 1 || Ly < 2) fail("BadSpec", "cylinder requires Lx >= 1 and Ly >= 2");
    std::vector<std::array<int, 2>> cells;
    for (int i = 0; i < Lx; ++i)
        for (int j = 0; j < Ly; ++j) cells.push_back({i, j});
    const Vec2 t = spec.a2 * double(Ly);
    return from_cells(spec, cells, {t},
                      "cyl" + std::to_string(Lx) + "x" + std::to_string(Ly));
}

Cluster make_parallelogram_flake(const HoneycombSpec& spec, int nx, int ny) {
    if (nx < 1 || ny < 1) fail("BadSpec", "flake requires at least one hexagon");
    // Hexagon (i,j) has center a1*i + a2*j + (offset_a + offset_b)/2 shifted;
    // its six vertices are the A/B sites of cells around it.  Collecting the
    // vertex set of all nx*ny hexagons gives 2(nx+1)(ny+1)-2 sites.
    spec.validate();
    const Vec2 center0 = (spec.offset_a + spec.offset_b) * 0.5 +
                         (spec.a1 + spec.a2) * (1.0 / 6.0);
    // vertices of hexagon at Bravais cell (i,j): sites within distance ~1 of
    // its center.  Enumerate candidate sites from nearby cells.
    std::vector<Site> sites;
    auto add_unique = [&](Vec2 pos_l, Sublattice sub, std::array<int, 2> cell) {
        for (const auto& s : sites)
            if ((s.position - pos_l * spec.spacing_um).norm() < 1e-9 * spec.spacing_um)
                return;
        sites.push_back({pos_l * spec.spacing_um, sub, cell});
    };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Vec2 hc = center0 + spec.a1 * double(i) + spec.a2 * double(j);
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const std::array<int, 2> cell{i + di, j + dj};
                    const Vec2 r = spec.a1 * double(cell[0]) + spec.a2 * double(cell[1]);
                    for (auto sub : {Sublattice::A, Sublattice::B}) {
                        const Vec2 p =
                            r + (sub == Sublattice::A ? spec.offset_a : spec.offset_b);
                        if ((p - hc).norm() < 1.0 + 1e-6) add_unique(p, sub, cell);
                    }
                }
            }
        }
    }
    Cluster cl;
    cl.spacing_um = spec.spacing_um;
    cl.label = "flake" + std::to_string(sites.size());
    cl.sites = std::move(sites);
    return cl;
}

Cluster make_hex_flake(const HoneycombSpec& spec, int shells) {
    if (shells < 0) fail("BadSpec", "shells must be >= 0");
    spec.validate();
    const Vec2 center0 = (spec.offset_a + spec.offset_b) * 0.5 +
                         (spec.a1 + spec.a2) * (1.0 / 6.0);
    // hexagon centers on a triangular lattice; keep those within `shells`
    // steps of the central one
    std::vector<Vec2> centers;
    for (int i = -shells; i <= shells; ++i)
        for (int j = -shells; j <= shells; ++j)
            if (std::abs(i + j) <= shells)
                centers.push_back(center0 + spec.a1 * double(i) + spec.a2 * double(j));
    std::vector<Site> sites;
    auto add_unique = [&](Vec2 pos_l, Sublattice sub, std::array<int, 2> cell) {
        for (const auto& s : sites)
            if ((s.position - pos_l * spec.spacing_um).norm() < 1e-9 * spec.spacing_um)
                return;
        sites.push_back({pos_l * spec.spacing_um, sub, cell});
    };
    for (int i = -shells - 1; i <= shells + 1; ++i) {
        for (int j = -shells - 1; j <= shells + 1; ++j) {
            const std::array<int, 2> cell{i, j};
            const Vec2 r = spec.a1 * double(i) + spec.a2 * double(j);
            for (auto sub : {Sublattice::A, Sublattice::B}) {
                const Vec2 p = r + (sub == Sublattice::A ? spec.offset_a : spec.offset_b);
                for (const Vec2& hc : centers) {
                    if ((p - hc).norm() < 1.0 + 1e-6) {
                        add_unique(p, sub, cell);
                        break;
                    }
                }
            }
        }
    }
    Cluster cl;
    cl.spacing_um = spec.spacing_um;
    cl.label = "flake" + std::to_string(sites.size());
    cl.sites = std::move(sites);
    return cl;
}

Cluster preset_cluster(const std::string& name, double spacing_um) {
    const auto spec = HoneycombSpec::standard(spacing_um);
    // Torus spans chosen as honeycomb tessellations whose shortest periodic
    // translation exceeds 4l, so bonds up to 2l are free of self-interaction.
    if (name == "16") return make_torus_cluster(spec, {2, 1}, {-2, 3}, "16");
    if (name == "20") return make_torus_cluster(spec, {3, 1}, {-1, 3}, "20");
    if (name == "24A") return make_torus_cluster(spec, {2, 2}, {-2, 4}, "24A");
    if (name == "24B") return make_torus_cluster(spec, {1, 3}, {-3, 3}, "24B");
    if (name == "26") return make_torus_cluster(spec, {1, 3}, {-3, 4}, "26");
    if (name == "28") return make_torus_cluster(spec, {1, 3}, {-3, 5}, "28");
    if (name == "flake16") return make_parallelogram_flake(spec, 2, 2);
    if (name == "flake24") return make_hex_flake(spec, 1);
    if (name == "cyl4x3") return make_cylinder(spec, 4, 3);
    if (name == "cyl8x3") return make_cylinder(spec, 8, 3);
    fail("UnknownPreset", "no preset named '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"16", "20", "24A", "24B", "26", "28", "flake16", "flake24", "cyl4x3", "cyl8x3"};
}

std::pair<Vec2, std::array<int, 2>> min_image(const Cluster& cluster, int i, int j) {
    const Vec2 d0 = cluster.sites[j].position - cluster.sites[i].position;
    if (cluster.periods.empty()) return {d0, {0, 0}};
    Vec2 best = d0;
    std::array<int, 2> w{0, 0};
    const int r = 2;
    if (cluster.periods.size() == 1) {
        for (int n = -r; n <= r; ++n) {
            const Vec2 d = d0 + cluster.periods[0] * double(n);
            if (d.norm() < best.norm() - 1e-12) { best = d; w = {n, 0}; }
        }
    } else {
        for (int n1 = -r; n1 <= r; ++n1) {
            for (int n2 = -r; n2 <= r; ++n2) {
                const Vec2 d = d0 + cluster.periods[0] * double(n1) +
                               cluster.periods[1] * double(n2);
                if (d.norm() < best.norm() - 1e-12) { best = d; w = {n1, n2}; }
            }
        }
    }
    return {best, w};
}

namespace {

double shortest_period(const Cluster& cluster) {
    double best = std::numeric_limits<double>::infinity();
    const int r = 3;
    if (cluster.periods.size() == 1) return cluster.periods[0].norm();
    for (int n1 = -r; n1 <= r; ++n1) {
        for (int n2 = -r; n2 <= r; ++n2) {
            if (n1 == 0 && n2 == 0) continue;
            const Vec2 v = cluster.periods[0] * double(n1) + cluster.periods[1] * double(n2);
            best = std::min(best, v.norm());
        }
    }
    return best;
}

}  // namespace

std::vector<Bond> enumerate_bonds(const Cluster& cluster, double cutoff_l) {
    const double l = cluster.spacing_um;
    if (cluster.periodic()) {
        const double half = 0.5 * shortest_period(cluster);
        if (cutoff_l * l > half + 1e-9 * l)
            fail("SelfInteraction",
                 "cutoff " + std::to_string(cutoff_l) +
                     " l exceeds half the shortest periodic translation");
    }
    std::vector<Bond> bonds;
    const int L = cluster.size();
    for (int i = 0; i < L; ++i) {
        for (int j = i + 1; j < L; ++j) {
            const auto [d, w] = min_image(cluster, i, j);
            const double r = d.norm();
            if (r < 1e-9 * l)
                fail("BadSpec", "coincident sites " + std::to_string(i) + "," +
                                    std::to_string(j));
            if (r > cutoff_l * l + 1e-6 * l) continue;
            DistanceClass cls{};
            bool found = false;
            for (auto c : {DistanceClass::nn, DistanceClass::nnn, DistanceClass::nnnn}) {
                if (std::abs(r / l - class_ratio(c)) < 1e-6 * class_ratio(c)) {
                    cls = c;
                    found = true;
                    break;
                }
            }
            if (!found)
                fail("UnknownDistanceClass",
                     "pair (" + std::to_string(i) + "," + std::to_string(j) +
                         ") at distance " + std::to_string(r / l) + " l");
            bonds.push_back({i, j, cls, polar_angle(d), w});
        }
    }
    return bonds;
}

Cluster rotated_cluster(const Cluster& cluster, double angle) {
    Cluster out = cluster;
    for (auto& s : out.sites) s.position = s.position.rotated(angle);
    for (auto& p : out.periods) p = p.rotated(angle);
    return out;
}

std::string export_cluster(const Cluster& cluster) {
    std::ostringstream os;
    os.precision(12);
    os << "label," << cluster.label << "\n";
    os << "spacing," << cluster.spacing_um << "\n";
    for (const Vec2& p : cluster.periods) os << "period," << p.x << "," << p.y << "\n";
    for (int i = 0; i < cluster.size(); ++i) {
        const Site& s = cluster.sites[i];
        os << i << "," << (s.sublattice == Sublattice::A ? 'A' : 'B') << ","
           << s.position.x << "," << s.position.y << "\n";
    }
    return os.str();
}

Cluster import_cluster(std::istream& in) {
    Cluster cl;
    cl.spacing_um = 0.0;
    std::string line;
    std::vector<std::pair<int, Site>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        std::getline(ls, head, ',');
        if (head == "label") {
            std::getline(ls, cl.label);
        } else if (head == "spacing") {
            ls >> cl.spacing_um;
        } else if (head == "period") {
            Vec2 p;
            char comma;
            ls >> p.x >> comma >> p.y;
            cl.periods.push_back(p);
        } else {
            Site s;
            int idx = std::stoi(head);
            std::string sub;
            std::getline(ls, sub, ',');
            if (sub != "A" && sub != "B")
                fail("ParseError", "bad sublattice tag '" + sub + "'");
            s.sublattice = sub == "A" ? Sublattice::A : Sublattice::B;
            std::string xs, ys;
            std::getline(ls, xs, ',');
            std::getline(ls, ys);
            s.position = {std::stod(xs), std::stod(ys)};
            rows.emplace_back(idx, s);
        }
    }
    if (cl.spacing_um <= 0.0) fail("ParseError", "missing or bad spacing record");
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t n = 0; n < rows.size(); ++n) {
        if (rows[n].first != static_cast<int>(n))
            fail("ParseError", "site indices must be 0..L-1 without gaps");
        cl.sites.push_back(rows[n].second);
    }
    if (cl.periods.size() > 2) fail("ParseError", "more than two periodic vectors");
    return cl;
}

Cluster import_cluster_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail("ParseError", "cannot open cluster file " + path);
    return import_cluster(f);
}

}  // namespace fci
