#include "fci/detect.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fci/observables.hpp"

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("detect", code, msg);
}

}  // namespace

EdgeProbeConfig make_edge_probe(const Cluster& cylinder, int edge_columns,
                                double mu_max, double mu_step) {
    if (cylinder.periods.size() != 1)
        fail("BadGeometry", "edge probe requires a cylinder (one periodic direction)");
    std::set<int> columns;
    for (const Site& s : cylinder.sites) columns.insert(s.cell[0]);
    const int ncols = static_cast<int>(columns.size());
    if (edge_columns <= 0) edge_columns = std::max(1, ncols / 4);
    if (2 * edge_columns > ncols)
        fail("BadGeometry", "edge sets would overlap");
    const int lo = *columns.begin(), hi = *columns.rbegin();
    EdgeProbeConfig cfg;
    cfg.cluster = cylinder;
    for (int i = 0; i < cylinder.size(); ++i) {
        const int c = cylinder.sites[i].cell[0];
        if (c < lo + edge_columns) cfg.left_sites.push_back(i);
        if (c > hi - edge_columns) cfg.right_sites.push_back(i);
    }
    if (mu_step <= 0.0 || mu_max < 0.0) fail("BadGeometry", "bad mu grid");
    for (double mu = 0.0; mu <= mu_max + 1e-12; mu += mu_step) cfg.mu_values.push_back(mu);
    return cfg;
}

CouplingSet trivial_mode(CouplingSet couplings) {
    couplings.splitting += 50.0;
    return couplings;
}

double max_adjacent_jump(const std::vector<double>& n_left) {
    double worst = 0.0;
    for (std::size_t i = 1; i < n_left.size(); ++i)
        worst = std::max(worst, n_left[i] - n_left[i - 1]);
    return worst;
}

ChargeScanResult charge_scan(const EdgeProbeConfig& config, const CouplingSet& couplings,
                             double filling, const EigenOptions& opts) {
    const Cluster& cl = config.cluster;
    const int L = cl.size();
    const double n_target = filling * L;
    const int N = static_cast<int>(std::lround(n_target));
    if (std::abs(n_target - N) > 1e-9)
        fail("BadFilling", "filling does not give an integer particle number");
    for (int i : config.left_sites)
        for (int j : config.right_sites)
            if (i == j) fail("BadGeometry", "left and right edge sets overlap");

    const auto basis = SectorBasis::fixed_n(L, N, SectorBasis::LocalStates::two_species,
                                            opts.memory_budget);
    const auto bonds = enumerate_bonds(cl, couplings.cutoff_l);
    TermList base = hopping_terms(bonds, couplings, cl);
    base.append(interaction_terms(bonds, couplings));

    EigenOptions o = opts;
    o.k = std::max(1, opts.k);
    o.want_vectors = 1;

    ChargeScanResult out;
    out.site_density.resize(static_cast<Eigen::Index>(config.mu_values.size()), L);
    std::vector<cplx> guess;
    for (double mu : config.mu_values) {
        TermList terms = base;
        for (int i : config.left_sites) {
            terms.add({Term::Kind::density, i, -1, -1, Species::A, {}, -mu});
            terms.add({Term::Kind::density, i, -1, -1, Species::B, {}, -mu});
        }
        for (int i : config.right_sites) {
            terms.add({Term::Kind::density, i, -1, -1, Species::A, {}, +mu});
            terms.add({Term::Kind::density, i, -1, -1, Species::B, {}, +mu});
        }
        const auto op = make_operator(terms, basis, o.memory_budget);
        o.initial_guess = guess.empty() ? nullptr : &guess;
        auto res = lowest_eigenpairs(*op, o);
        guess = std::move(res.vectors[0]);
        const auto n = density_expectations(guess, basis);
        double nl = 0.0, nr = 0.0;
        for (int i : config.left_sites) nl += n[i];
        for (int i : config.right_sites) nr += n[i];
        const Eigen::Index row = static_cast<Eigen::Index>(out.mu.size());
        for (int i = 0; i < L; ++i) out.site_density(row, i) = n[i];
        out.mu.push_back(mu);
        out.n_left.push_back(nl);
        out.n_right.push_back(nr);
        out.energy.push_back(res.values[0]);
    }
    return out;
}

}  // namespace fci
