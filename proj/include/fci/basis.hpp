#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "fci/errors.hpp"

#if defined(__BMI2__)
#include <immintrin.h>
#endif

namespace fci {

namespace bits {

// even bit positions carry the |-> flag, odd positions the |+> flag
inline constexpr std::uint64_t kEven = 0x5555555555555555ull;

inline std::uint64_t pext(std::uint64_t value, std::uint64_t mask) {
#if defined(__BMI2__)
    return _pext_u64(value, mask);
#else
    std::uint64_t out = 0;
    for (std::uint64_t bit = 1; mask; mask &= mask - 1, bit <<= 1)
        if (value & mask & -mask) out |= bit;
    return out;
#endif
}

inline std::uint64_t pdep(std::uint64_t value, std::uint64_t mask) {
#if defined(__BMI2__)
    return _pdep_u64(value, mask);
#else
    std::uint64_t out = 0;
    for (std::uint64_t bit = 1; mask; mask &= mask - 1, bit <<= 1)
        if (value & bit) out |= mask & -mask;
    return out;
#endif
}

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

/// Binomial coefficients up to 32, clamped into uint64 (they all fit).
const std::array<std::array<std::uint64_t, 33>, 33>& binomial_table();

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n || n < 0 || n > 32) return 0;
    return binomial_table()[n][k];
}

/// Colexicographic rank of a bitmask among all masks of equal popcount.
inline std::uint64_t colex_rank(std::uint64_t mask) {
    std::uint64_t r = 0;
    int p = 1;
    while (mask) {
        const int s = __builtin_ctzll(mask);
        r += binomial(s, p++);
        mask &= mask - 1;
    }
    return r;
}

/// Inverse of colex_rank for masks with `n` set bits.
inline std::uint64_t colex_unrank(std::uint64_t rank, int n, int sites) {
    std::uint64_t mask = 0;
    for (int p = n; p >= 1; --p) {
        int s = p - 1;
        while (s + 1 < sites && binomial(s + 1, p) <= rank) ++s;
        rank -= binomial(s, p);
        mask |= 1ull << s;
    }
    return mask;
}

}  // namespace bits

/// Many-body Fock sector over hard-core sites with the 2-bit encoding
/// 00 = empty, 01 = |->, 10 = |+> (11 forbidden).  States are implicit:
/// index_of and word_at are exact mutual inverses over the enumeration,
/// which is ordered by increasing packed word (lexicographic in the
/// per-site codes read from the highest site down).
class SectorBasis {
public:
    enum class LocalStates : std::uint8_t {
        two_species,  // 3 local states per site
        b_only,       // |+> frozen out (effective single-species model)
    };

    static constexpr std::uint64_t kDefaultBudget = 3ull << 30;  // bytes

    static SectorBasis fixed_n(int sites, int particles,
                               LocalStates ls = LocalStates::two_species,
                               std::uint64_t memory_budget = kDefaultBudget);
    static SectorBasis grand_canonical(int sites,
                                       LocalStates ls = LocalStates::two_species,
                                       std::uint64_t memory_budget = kDefaultBudget);

    /// Dimension by formula, without constructing (2^N C(L,N), 3^L, ...).
    static std::uint64_t sector_dimension(int sites, std::optional<int> particles,
                                          LocalStates ls);

    std::uint64_t dimension() const { return dim_; }
    int sites() const { return sites_; }
    std::optional<int> particles() const { return particles_; }
    LocalStates local_states() const { return locals_; }

    std::uint64_t word_at(std::uint64_t index) const;
    std::uint64_t index_of(std::uint64_t word) const;

    /// Occupation code of one site in a packed word.
    static int code_at(std::uint64_t word, int site) { return (word >> (2 * site)) & 3; }
    /// Total particle number encoded in a word.
    static int particle_count(std::uint64_t word) {
        return bits::popcount(word);  // one set bit per occupied site
    }

private:
    SectorBasis(int sites, std::optional<int> particles, LocalStates ls);

    int sites_{0};
    std::optional<int> particles_;
    LocalStates locals_{LocalStates::two_species};
    std::uint64_t dim_{0};
};

}  // namespace fci
