#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fci/operators.hpp"

namespace fci {

struct EigenOptions {
    int k{10};
    double tol{1e-9};          // residual tolerance, in the operator's units
    std::uint64_t seed{1};
    int max_matvecs{200000};
    int max_basis{0};          // 0: chosen from k and the memory budget
    int want_vectors{-1};      // how many eigenvectors to return (-1: all k)
    std::uint64_t memory_budget{SectorBasis::kDefaultBudget};
    const std::vector<cplx>* initial_guess{nullptr};  // warm start, optional
};

struct EigenResult {
    std::vector<double> values;             // ascending, k of them
    std::vector<std::vector<cplx>> vectors;  // first want_vectors pairs
    std::vector<double> residuals;          // ||H v - lambda v|| where computed
    int matvecs{0};
};

/// Lowest k eigenpairs of a Hermitian operator by thick-restart Lanczos with
/// full reorthogonalization.  Exact degeneracies are resolved by restarting
/// exhausted Krylov spaces with fresh random directions orthogonal to the
/// converged set.  Throws edcore.NoConvergence past max_matvecs and
/// edcore.TooLarge if the Lanczos basis cannot fit the memory budget.
EigenResult lowest_eigenpairs(const LinearOperator& h, const EigenOptions& opts = {});

}  // namespace fci
