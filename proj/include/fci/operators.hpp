#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "fci/basis.hpp"
#include "fci/model.hpp"

namespace fci {

/// Term list lowered to flat op tables against a concrete sector:
/// diagonal pieces plus directed moves closed under Hermitian conjugation.
/// A move annihilates code `fc` at site `u` and creates code `tc` at site
/// `v`; it contributes H[dst, src] = amp.
struct CompiledOperator {
    struct OccTerm {
        std::uint8_t site;
        std::uint8_t code;
        double amp;
    };
    struct PairTerm {
        std::uint8_t i, j;
        std::uint8_t ci, cj;
        double amp;
    };
    struct Move {
        std::uint8_t u, v;
        std::uint8_t fc, tc;
        std::int8_t mid;  // -1 unless occupation-conditioned
        cplx amp;
    };

    double constant{0.0};
    std::vector<OccTerm> occ_terms;
    std::vector<PairTerm> pair_terms;
    std::vector<Move> moves;

    bool applicable(std::uint64_t w, const Move& m) const {
        if (SectorBasis::code_at(w, m.u) != m.fc) return false;
        if (m.v != m.u && SectorBasis::code_at(w, m.v) != 0) return false;
        if (m.mid >= 0 && SectorBasis::code_at(w, m.mid) == 0) return false;
        return true;
    }
    static std::uint64_t moved(std::uint64_t w, const Move& m) {
        w &= ~(3ull << (2 * m.u));
        return w | (std::uint64_t(m.tc) << (2 * m.v));
    }

    double diagonal(std::uint64_t w) const;
};

/// Lower a TermList onto a sector.  Throws edcore.SectorViolation when a
/// particle-non-conserving term meets a fixed-N basis and edcore.BadTerm for
/// non-real diagonal amplitudes, out-of-range sites, or species-A terms on a
/// single-species basis.
CompiledOperator compile_terms(const TermList& terms, const SectorBasis& basis);

/// Hermitian linear operator on the sector.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;
    virtual std::uint64_t dimension() const = 0;
    virtual void apply(const cplx* x, cplx* y) const = 0;  // y = H x
};

/// Compressed-row Hermitian matrix.
struct SparseHamiltonian final : LinearOperator {
    std::uint64_t dim{0};
    std::vector<std::uint64_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<cplx> val;

    std::uint64_t dimension() const override { return dim; }
    void apply(const cplx* x, cplx* y) const override;
    std::uint64_t nonzeros() const { return val.size(); }
    /// max |H - H^dagger| over stored entries (structure must be symmetric).
    double hermiticity_defect() const;
};

/// Assemble the explicit sparse matrix.  Throws edcore.TooLarge when the
/// projected storage exceeds the budget.
SparseHamiltonian assemble(const TermList& terms, const SectorBasis& basis,
                           std::uint64_t memory_budget = SectorBasis::kDefaultBudget);

/// Matrix-free operator: precomputed diagonal, moves applied on the fly.
class MatrixFreeHamiltonian final : public LinearOperator {
public:
    MatrixFreeHamiltonian(const TermList& terms, const SectorBasis& basis);

    std::uint64_t dimension() const override { return basis_.dimension(); }
    void apply(const cplx* x, cplx* y) const override;

private:
    SectorBasis basis_;
    CompiledOperator op_;
    std::vector<double> diag_;
    std::vector<CompiledOperator::Move> gather_moves_;  // amps conjugated
};

/// Pick CSR when the projected matrix fits the budget, matrix-free otherwise.
std::unique_ptr<LinearOperator> make_operator(
    const TermList& terms, const SectorBasis& basis,
    std::uint64_t memory_budget = SectorBasis::kDefaultBudget);

}  // namespace fci
