#include "fci/observables.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("edcore", code, msg);
}

}  // namespace

std::vector<double> density_expectations(const std::vector<cplx>& state,
                                         const SectorBasis& basis) {
    const int L = basis.sites();
    std::vector<double> n(L, 0.0);
    for (std::uint64_t r = 0; r < basis.dimension(); ++r) {
        const double p = std::norm(state[r]);
        if (p == 0.0) continue;
        std::uint64_t occ = (basis.word_at(r) | (basis.word_at(r) >> 1)) & bits::kEven;
        while (occ) {
            n[__builtin_ctzll(occ) / 2] += p;
            occ &= occ - 1;
        }
    }
    return n;
}

CorrelationResult density_correlations(const std::vector<cplx>& state,
                                       const SectorBasis& basis) {
    const int L = basis.sites();
    CorrelationResult out;
    out.n = Eigen::VectorXd::Zero(L);
    out.nn = Eigen::MatrixXd::Zero(L, L);
    std::vector<int> occupied;
    occupied.reserve(L);
    for (std::uint64_t r = 0; r < basis.dimension(); ++r) {
        const double p = std::norm(state[r]);
        if (p == 0.0) continue;
        const std::uint64_t w = basis.word_at(r);
        occupied.clear();
        std::uint64_t occ = (w | (w >> 1)) & bits::kEven;
        while (occ) {
            occupied.push_back(__builtin_ctzll(occ) / 2);
            occ &= occ - 1;
        }
        for (std::size_t a = 0; a < occupied.size(); ++a) {
            out.n[occupied[a]] += p;
            for (std::size_t b = 0; b < occupied.size(); ++b)
                out.nn(occupied[a], occupied[b]) += p;
        }
    }
    return out;
}

double entanglement_entropy(const std::vector<cplx>& state, const SectorBasis& basis,
                            const std::vector<int>& subsystem) {
    const int L = basis.sites();
    if (subsystem.empty() || static_cast<int>(subsystem.size()) >= L)
        fail("BadBipartition", "subsystem must be a nonempty proper subset");
    std::uint64_t amask = 0;
    for (int s : subsystem) {
        if (s < 0 || s >= L) fail("BadBipartition", "site index out of range");
        amask |= 3ull << (2 * s);
    }
    std::unordered_map<std::uint64_t, int> ia, ib;
    std::vector<std::tuple<int, int, cplx>> entries;
    entries.reserve(state.size());
    for (std::uint64_t r = 0; r < basis.dimension(); ++r) {
        if (state[r] == cplx{0.0, 0.0}) continue;
        const std::uint64_t w = basis.word_at(r);
        const std::uint64_t wa = w & amask;
        const std::uint64_t wb = w & ~amask;
        auto [ita, inserted_a] = ia.try_emplace(wa, static_cast<int>(ia.size()));
        auto [itb, inserted_b] = ib.try_emplace(wb, static_cast<int>(ib.size()));
        entries.emplace_back(ita->second, itb->second, state[r]);
    }
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(ia.size(), ib.size());
    for (const auto& [a, b, v] : entries) M(a, b) = v;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    double total = 0.0, entropy = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) total += sv[i] * sv[i];
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double p = sv[i] * sv[i] / total;
        if (p > 1e-300) entropy -= p * std::log(p);
    }
    return entropy;
}

}  // namespace fci
