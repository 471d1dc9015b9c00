#include "fci/chern.hpp"

#include <cmath>
#include <numbers>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("edcore", code, msg);
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

FlowResult spectral_flow(const TwistFactory& factory, const SectorBasis& basis, int k,
                         int n_points, int axis, const EigenOptions& opts) {
    if (n_points < 2) fail("BadRequest", "need at least two scan points");
    if (axis != 1 && axis != 2) fail("BadRequest", "axis must be 1 or 2");
    FlowResult out;
    EigenOptions o = opts;
    o.k = k;
    o.want_vectors = 1;  // warm starts between neighboring points
    std::vector<cplx> guess;
    for (int p = 0; p < n_points; ++p) {
        const double th = kTwoPi * p / (n_points - 1);
        const Twist tw = axis == 1 ? Twist{th, 0.0} : Twist{0.0, th};
        const auto op = make_operator(factory(tw), basis, o.memory_budget);
        o.initial_guess = guess.empty() ? nullptr : &guess;
        auto res = lowest_eigenpairs(*op, o);
        guess = std::move(res.vectors[0]);
        out.thetas.push_back(th);
        out.energies.push_back(std::move(res.values));
    }
    return out;
}

ChernResult many_body_chern(const TwistFactory& factory, const SectorBasis& basis,
                            int manifold_dim, int grid_n, const EigenOptions& opts,
                            double gap_tol) {
    const int d = manifold_dim;
    if (d < 1) fail("BadRequest", "manifold dimension must be >= 1");
    if (grid_n < 2) fail("BadRequest", "twist grid must be at least 2x2");
    const std::uint64_t dim = basis.dimension();

    EigenOptions o = opts;
    o.k = d + 1;
    o.want_vectors = d;

    // ground-manifold vectors at every grid point (identified torus points
    // reuse the same states, which makes the plaquette sum exactly 2 pi C)
    std::vector<std::vector<std::vector<cplx>>> manifold(
        static_cast<std::size_t>(grid_n) * grid_n);
    double min_gap = std::numeric_limits<double>::infinity();
    std::vector<cplx> guess;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Twist tw{kTwoPi * i / grid_n, kTwoPi * j / grid_n};
            const auto op = make_operator(factory(tw), basis, o.memory_budget);
            o.initial_guess = guess.empty() ? nullptr : &guess;
            auto res = lowest_eigenpairs(*op, o);
            const double gap = res.values[d] - res.values[d - 1];
            min_gap = std::min(min_gap, gap);
            if (gap < gap_tol)
                fail("GapClosure",
                     "manifold gap " + std::to_string(gap) + " below tolerance at grid (" +
                         std::to_string(i) + "," + std::to_string(j) + ")");
            guess = res.vectors[0];
            manifold[static_cast<std::size_t>(i) * grid_n + j] = std::move(res.vectors);
        }
    }

    auto link = [&](int pi, int pj, int qi, int qj) {
        const auto& P = manifold[static_cast<std::size_t>(pi) * grid_n + pj];
        const auto& Q = manifold[static_cast<std::size_t>(qi) * grid_n + qj];
        Eigen::MatrixXcd M(d, d);
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                cplx acc{0.0, 0.0};
                const cplx* pa = P[a].data();
                const cplx* qb = Q[b].data();
                for (std::uint64_t r = 0; r < dim; ++r) acc += std::conj(pa[r]) * qb[r];
                M(a, b) = acc;
            }
        }
        const cplx det = M.determinant();
        if (std::abs(det) < 1e-12)
            fail("GapClosure", "degenerate overlap link between grid points (" +
                                   std::to_string(pi) + "," + std::to_string(pj) +
                                   ") and (" + std::to_string(qi) + "," +
                                   std::to_string(qj) + ")");
        return det;
    };

    ChernResult out;
    out.berry.grid_n = grid_n;
    out.berry.manifold_dim = d;
    out.berry.curvature = Eigen::MatrixXd::Zero(grid_n, grid_n);
    out.berry.min_manifold_gap = min_gap;
    double total = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const int i1 = (i + 1) % grid_n, j1 = (j + 1) % grid_n;
            const cplx prod = link(i, j, i1, j) * link(i1, j, i1, j1) *
                              link(i1, j1, i, j1) * link(i, j1, i, j);
            const double f = -std::arg(prod);
            out.berry.curvature(i, j) = f;
            total += f;
        }
    }
    const double c = total / kTwoPi;
    const long rounded = std::lround(c);
    if (std::abs(c - rounded) > 1e-6)
        fail("GapClosure", "plaquette phases sum to a non-integer Chern number " +
                               std::to_string(c));
    out.chern = static_cast<int>(rounded);
    out.berry.total_chern = out.chern;
    return out;
}

}  // namespace fci
