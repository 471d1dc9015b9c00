#include "fci/lanczos.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("edcore", code, msg);
}

cplx dot(const cplx* a, const cplx* b, std::uint64_t n) {
    // fixed-block accumulation: deterministic and mildly compensated
    constexpr std::uint64_t kBlock = 4096;
    cplx total{0.0, 0.0};
    for (std::uint64_t s = 0; s < n; s += kBlock) {
        const std::uint64_t e = std::min(n, s + kBlock);
        cplx acc{0.0, 0.0};
        for (std::uint64_t i = s; i < e; ++i) acc += std::conj(a[i]) * b[i];
        total += acc;
    }
    return total;
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double norm(const cplx* a, std::uint64_t n) { return std::sqrt(dot(a, a, n).real()); }

void scale(cplx* a, double s, std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) a[i] *= s;
}

// In-place basis rotation V[0..ncols_out) <- V[0..ncols_in) * S, blocked over
// rows so the scratch stays small.
void rotate_in_place(cplx* storage, std::uint64_t dim, int ncols_in, int ncols_out,
                     const Eigen::MatrixXd& S) {
    constexpr std::uint64_t kRows = 8192;
    std::vector<cplx> scratch(static_cast<std::size_t>(ncols_out) * kRows);
    for (std::uint64_t r0 = 0; r0 < dim; r0 += kRows) {
        const std::uint64_t nr = std::min(kRows, dim - r0);
        std::fill(scratch.begin(), scratch.begin() + ncols_out * nr, cplx{0.0, 0.0});
        for (int c = 0; c < ncols_in; ++c) {
            const cplx* src = storage + static_cast<std::size_t>(c) * dim + r0;
            for (int o = 0; o < ncols_out; ++o) {
                const double s = S(c, o);
                if (s == 0.0) continue;
                cplx* dst = scratch.data() + static_cast<std::size_t>(o) * nr;
                for (std::uint64_t i = 0; i < nr; ++i) dst[i] += s * src[i];
            }
        }
        for (int o = 0; o < ncols_out; ++o)
            std::copy_n(scratch.data() + static_cast<std::size_t>(o) * nr, nr,
                        storage + static_cast<std::size_t>(o) * dim + r0);
    }
}

}  // namespace

EigenResult lowest_eigenpairs(const LinearOperator& h, const EigenOptions& opts) {
    const std::uint64_t dim = h.dimension();
    const int k = opts.k;
    if (k < 1) fail("BadRequest", "need k >= 1");
    if (static_cast<std::uint64_t>(k) >= dim)
        fail("BadRequest", "k must be smaller than the sector dimension");
    const int nvec = opts.want_vectors < 0 ? k : std::min(opts.want_vectors, k);

    int m = opts.max_basis > 0 ? opts.max_basis : std::clamp(2 * k + 16, k + 6, 64);
    m = static_cast<int>(std::min<std::uint64_t>(m, dim));
    auto fits = [&](int mm) {
        return (static_cast<std::uint64_t>(mm) + 3 + nvec) * dim * sizeof(cplx) <=
               opts.memory_budget;
    };
    while (m > k + 4 && !fits(m)) --m;
    if (!fits(m))
        fail("TooLarge", "Lanczos workspace of " + std::to_string(m + 3 + nvec) +
                             " vectors exceeds the memory budget");

    std::vector<cplx> storage(static_cast<std::size_t>(m + 1) * dim);
    auto vec = [&](int i) { return storage.data() + static_cast<std::size_t>(i) * dim; };
    std::vector<cplx> work(dim), resid(dim);
    cplx* w = work.data();

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss;
    auto randomize = [&](cplx* v) {
        for (std::uint64_t i = 0; i < dim; ++i) v[i] = {gauss(rng), gauss(rng)};
    };
    auto orthogonalize = [&](cplx* v, int count) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < count; ++i) axpy(-dot(vec(i), v, dim), vec(i), v, dim);
    };

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> border;  // couples thick vectors to vec(l)
    int l = 0;
    int matvecs = 0;
    double tol = opts.tol;

    if (opts.initial_guess && opts.initial_guess->size() == dim)
        std::copy(opts.initial_guess->begin(), opts.initial_guess->end(), vec(0));
    else
        randomize(vec(0));
    {
        double n0 = norm(vec(0), dim);
        if (n0 < 1e-300) {
            randomize(vec(0));
            n0 = norm(vec(0), dim);
        }
        scale(vec(0), 1.0 / n0, dim);
    }

    while (true) {
        int j = l;
        double beta = 0.0;
        for (; j < m; ++j) {
            if (matvecs >= opts.max_matvecs)
                fail("NoConvergence", "eigensolver hit the matvec limit (" +
                                          std::to_string(opts.max_matvecs) + ")");
            h.apply(vec(j), w);
            ++matvecs;
            if (j == l)
                for (int i = 0; i < l; ++i) T(i, j) = T(j, i) = border[i];
            T(j, j) = dot(vec(j), w, dim).real();
            orthogonalize(w, j + 1);  // full reorthogonalization, two passes
            beta = norm(w, dim);
            if (j + 1 >= m) break;
            if (beta < 1e-12) {
                // invariant subspace exhausted: continue in a fresh random
                // direction; zero coupling keeps T block diagonal
                randomize(w);
                orthogonalize(w, j + 1);
                beta = 0.0;
                const double nw = norm(w, dim);
                if (nw < 1e-12) break;  // entire space spanned
                scale(w, 1.0 / nw, dim);
                std::copy(w, w + dim, vec(j + 1));
                T(j, j + 1) = T(j + 1, j) = 0.0;
            } else {
                scale(w, 1.0 / beta, dim);
                std::copy(w, w + dim, vec(j + 1));
                T(j, j + 1) = T(j + 1, j) = beta;
            }
        }
        const int nbasis = std::min(j + 1, m);
        std::copy(w, w + dim, resid.data());  // unnormalized residual, norm beta

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(nbasis, nbasis));
        const Eigen::VectorXd theta = es.eigenvalues();
        const Eigen::MatrixXd S = es.eigenvectors();
        const int nwanted = std::min<int>(k, nbasis);

        bool converged = static_cast<std::uint64_t>(nbasis) >=
                         std::min<std::uint64_t>(k + 1, dim);
        for (int i = 0; i < nwanted && converged; ++i)
            if (std::abs(beta * S(nbasis - 1, i)) > tol) converged = false;

        if (converged) {
            rotate_in_place(storage.data(), dim, nbasis, nwanted, S);
            std::vector<double> res(nwanted);
            bool verified = true;
            for (int i = 0; i < nwanted; ++i) {
                const double nn = norm(vec(i), dim);
                scale(vec(i), 1.0 / nn, dim);
                h.apply(vec(i), w);
                ++matvecs;
                axpy(cplx{-theta(i), 0.0}, vec(i), w, dim);
                res[i] = norm(w, dim);
                if (res[i] > 10.0 * tol) verified = false;
            }
            if (verified) {
                EigenResult result;
                result.values.assign(theta.data(), theta.data() + nwanted);
                result.residuals = std::move(res);
                result.matvecs = matvecs;
                result.vectors.reserve(nvec);
                for (int i = 0; i < nvec; ++i)
                    result.vectors.emplace_back(vec(i), vec(i) + dim);
                return result;
            }
            // estimates were optimistic: restart from the Ritz vectors with a
            // tighter internal tolerance
            tol *= 0.5;
            border.assign(nwanted, 0.0);
            T.setZero();
            for (int i = 0; i < nwanted; ++i) T(i, i) = theta(i);
            randomize(vec(nwanted));
            orthogonalize(vec(nwanted), nwanted);
            scale(vec(nwanted), 1.0 / norm(vec(nwanted), dim), dim);
            l = nwanted;
            continue;
        }

        // thick restart: keep the lowest Ritz vectors plus the residual direction
        const int keep = std::max(1, std::min(k + 8, nbasis - 2));
        rotate_in_place(storage.data(), dim, nbasis, keep, S);
        border.assign(keep, 0.0);
        for (int i = 0; i < keep; ++i) border[i] = beta * S(nbasis - 1, i);
        T.setZero();
        for (int i = 0; i < keep; ++i) T(i, i) = theta(i);
        if (beta > 1e-12) {
            std::copy(resid.begin(), resid.end(), vec(keep));
        } else {
            randomize(vec(keep));
            std::fill(border.begin(), border.end(), 0.0);
        }
        orthogonalize(vec(keep), keep);
        const double nc = norm(vec(keep), dim);
        if (nc < 1e-12) {
            randomize(vec(keep));
            orthogonalize(vec(keep), keep);
            scale(vec(keep), 1.0 / norm(vec(keep), dim), dim);
            std::fill(border.begin(), border.end(), 0.0);
        } else {
            scale(vec(keep), 1.0 / nc, dim);
        }
        l = keep;
    }
}

}  // namespace fci
