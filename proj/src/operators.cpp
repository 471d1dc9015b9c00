#include "fci/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fci {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("edcore", code, msg);
}

double real_amp(const Term& t, const char* what) {
    if (std::abs(t.amp.imag()) > 1e-12 * std::max(1.0, std::abs(t.amp.real())))
        fail("BadTerm", std::string(what) + " amplitude must be real");
    return t.amp.real();
}

std::uint8_t species_code(Species s) { return s == Species::A ? 2 : 1; }

}  // namespace

double CompiledOperator::diagonal(std::uint64_t w) const {
    double d = constant;
    for (const OccTerm& t : occ_terms)
        if (SectorBasis::code_at(w, t.site) == t.code) d += t.amp;
    for (const PairTerm& t : pair_terms)
        if (SectorBasis::code_at(w, t.i) == t.ci && SectorBasis::code_at(w, t.j) == t.cj)
            d += t.amp;
    return d;
}

CompiledOperator compile_terms(const TermList& terms, const SectorBasis& basis) {
    CompiledOperator op;
    const int L = basis.sites();
    const bool fixed_n = basis.particles().has_value();
    const bool b_only = basis.local_states() == SectorBasis::LocalStates::b_only;
    auto check_site = [&](int s, bool required = true) {
        if (s < 0) {
            if (required) fail("BadTerm", "missing site index");
            return;
        }
        if (s >= L) fail("BadTerm", "site index " + std::to_string(s) + " out of range");
    };
    auto check_species = [&](Species s) {
        if (b_only && s == Species::A)
            fail("BadTerm", "species-A term on a single-species basis");
    };
    auto add_move = [&](int u, int v, std::uint8_t fc, std::uint8_t tc, int mid, cplx amp) {
        if (amp == cplx{0.0, 0.0}) return;
        op.moves.push_back({static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v), fc,
                            tc, static_cast<std::int8_t>(mid), amp});
    };

    for (const Term& t : terms.terms) {
        using K = Term::Kind;
        switch (t.kind) {
            case K::hop_a:
                check_site(t.i);
                check_site(t.j);
                check_species(Species::A);
                add_move(t.j, t.i, 2, 2, -1, t.amp);
                add_move(t.i, t.j, 2, 2, -1, std::conj(t.amp));
                break;
            case K::hop_b:
                check_site(t.i);
                check_site(t.j);
                add_move(t.j, t.i, 1, 1, -1, t.amp);
                add_move(t.i, t.j, 1, 1, -1, std::conj(t.amp));
                break;
            case K::flip:
                check_site(t.i);
                check_site(t.j);
                check_species(Species::A);
                add_move(t.j, t.i, 1, 2, -1, t.amp);
                add_move(t.i, t.j, 2, 1, -1, std::conj(t.amp));
                break;
            case K::three_site:
                check_site(t.i);
                check_site(t.j);
                check_site(t.mid);
                add_move(t.j, t.i, 1, 1, t.mid, t.amp);
                add_move(t.i, t.j, 1, 1, t.mid, std::conj(t.amp));
                break;
            case K::drive:
                check_site(t.i);
                if (fixed_n)
                    fail("SectorViolation",
                         "drive term does not conserve particle number in a fixed-N "
                         "sector");
                add_move(t.i, t.i, 0, 1, -1, t.amp);
                add_move(t.i, t.i, 1, 0, -1, std::conj(t.amp));
                break;
            case K::onsite_a:
                check_site(t.i);
                check_species(Species::A);
                op.occ_terms.push_back(
                    {static_cast<std::uint8_t>(t.i), 2, real_amp(t, "onsite")});
                break;
            case K::density:
                check_site(t.i);
                check_species(t.si);
                op.occ_terms.push_back({static_cast<std::uint8_t>(t.i),
                                        species_code(t.si), real_amp(t, "density")});
                break;
            case K::density_density:
                check_site(t.i);
                check_site(t.j);
                check_species(t.si);
                check_species(t.sj);
                op.pair_terms.push_back({static_cast<std::uint8_t>(t.i),
                                         static_cast<std::uint8_t>(t.j),
                                         species_code(t.si), species_code(t.sj),
                                         real_amp(t, "density-density")});
                break;
            case K::constant:
                op.constant += real_amp(t, "constant");
                break;
        }
    }
    return op;
}

void SparseHamiltonian::apply(const cplx* x, cplx* y) const {
    for (std::uint64_t r = 0; r < dim; ++r) {
        cplx acc{0.0, 0.0};
        for (std::uint64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
            acc += val[p] * x[col[p]];
        y[r] = acc;
    }
}

double SparseHamiltonian::hermiticity_defect() const {
    double worst = 0.0;
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            const std::uint32_t c = col[p];
            // binary search for (c, r)
            const auto b = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[c]);
            const auto e = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[c + 1]);
            const auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(r));
            cplx transposed{0.0, 0.0};
            if (it != e && *it == r) transposed = val[it - col.begin()];
            worst = std::max(worst, std::abs(val[p] - std::conj(transposed)));
        }
    }
    return worst;
}

SparseHamiltonian assemble(const TermList& terms, const SectorBasis& basis,
                           std::uint64_t memory_budget) {
    const CompiledOperator op = compile_terms(terms, basis);
    const std::uint64_t dim = basis.dimension();
    if (dim > (std::uint32_t(-1)))
        fail("TooLarge", "CSR column type limits explicit matrices to 2^32 rows");

    // projected storage: worst case one entry per move per row plus diagonal
    const std::uint64_t worst = dim * (op.moves.size() + 1);
    (void)worst;

    SparseHamiltonian h;
    h.dim = dim;
    h.row_ptr.assign(dim + 1, 0);

    std::vector<std::pair<std::uint32_t, cplx>> row;
    std::vector<std::uint32_t> cols;
    std::vector<cplx> vals;
    const std::uint64_t budget_entries = memory_budget / (sizeof(cplx) + sizeof(std::uint32_t));
    for (std::uint64_t r = 0; r < dim; ++r) {
        const std::uint64_t w = basis.word_at(r);
        row.clear();
        const double d = op.diagonal(w);
        if (d != 0.0) row.emplace_back(static_cast<std::uint32_t>(r), cplx{d, 0.0});
        for (const auto& m : op.moves) {
            if (!op.applicable(w, m)) continue;
            // gather form of the Hermitian closure: row r couples to the
            // image of each move applied to r with the conjugated amplitude
            const std::uint64_t w2 = CompiledOperator::moved(w, m);
            row.emplace_back(static_cast<std::uint32_t>(basis.index_of(w2)),
                             std::conj(m.amp));
        }
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        // merge duplicate columns (diagonal accumulations, coinciding moves)
        std::size_t out = 0;
        for (std::size_t p = 0; p < row.size(); ++p) {
            if (out > 0 && row[p].first == row[out - 1].first)
                row[out - 1].second += row[p].second;
            else
                row[out++] = row[p];
        }
        row.resize(out);
        for (const auto& [c, v] : row) {
            cols.push_back(c);
            vals.push_back(v);
        }
        h.row_ptr[r + 1] = cols.size();
        if (cols.size() > budget_entries)
            fail("TooLarge", "explicit matrix exceeds the memory budget");
    }
    h.col = std::move(cols);
    h.val = std::move(vals);
    return h;
}

MatrixFreeHamiltonian::MatrixFreeHamiltonian(const TermList& terms,
                                             const SectorBasis& basis)
    : basis_(basis), op_(compile_terms(terms, basis)) {
    diag_.resize(basis_.dimension());
    for (std::uint64_t r = 0; r < basis_.dimension(); ++r)
        diag_[r] = op_.diagonal(basis_.word_at(r));
    gather_moves_ = op_.moves;
    for (auto& m : gather_moves_) m.amp = std::conj(m.amp);
}

void MatrixFreeHamiltonian::apply(const cplx* x, cplx* y) const {
    const std::uint64_t dim = basis_.dimension();
    const auto* moves = gather_moves_.data();
    const std::size_t nm = gather_moves_.size();
    for (std::uint64_t r = 0; r < dim; ++r) {
        const std::uint64_t w = basis_.word_at(r);
        cplx acc = diag_[r] * x[r];
        for (std::size_t t = 0; t < nm; ++t) {
            const auto& m = moves[t];
            if (!op_.applicable(w, m)) continue;
            acc += m.amp * x[basis_.index_of(CompiledOperator::moved(w, m))];
        }
        y[r] = acc;
    }
}

std::unique_ptr<LinearOperator> make_operator(const TermList& terms,
                                              const SectorBasis& basis,
                                              std::uint64_t memory_budget) {
    const CompiledOperator op = compile_terms(terms, basis);
    // expected nonzeros: diagonal + a conservative third of the moves firing
    const std::uint64_t projected =
        basis.dimension() * (1 + op.moves.size() / 2) *
        (sizeof(cplx) + sizeof(std::uint32_t));
    if (basis.dimension() <= (std::uint32_t(-1)) && projected <= memory_budget / 2)
        return std::make_unique<SparseHamiltonian>(assemble(terms, basis, memory_budget));
    return std::make_unique<MatrixFreeHamiltonian>(terms, basis);
}

}  // namespace fci
