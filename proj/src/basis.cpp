#include "fci/basis.hpp"

#include <string>

namespace fci {

namespace bits {

const std::array<std::array<std::uint64_t, 33>, 33>& binomial_table() {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, 33>, 33> t{};
        for (int n = 0; n <= 32; ++n) {
            t[n][0] = 1;
            for (int k = 1; k <= n; ++k)
                t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
        }
        return t;
    }();
    return table;
}

}  // namespace bits

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) {
    throw Error("edcore", code, msg);
}

std::uint64_t pow_u64(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Base-3 value of the packed codes, one byte (4 sites) at a time.
struct Base3Tables {
    // per byte position: contribution of that byte's codes, scaled by 3^(4*pos)
    std::array<std::array<std::uint64_t, 256>, 8> t{};
    Base3Tables() {
        for (int pos = 0; pos < 8; ++pos) {
            const std::uint64_t scale = pow_u64(3, 4 * pos);
            for (int byte = 0; byte < 256; ++byte) {
                std::uint64_t v = 0;
                std::uint64_t w = 1;
                for (int s = 0; s < 4; ++s) {
                    const int code = (byte >> (2 * s)) & 3;
                    v += static_cast<std::uint64_t>(code) * w;
                    w *= 3;
                }
                t[pos][byte] = v * scale;
            }
        }
    }
};

const Base3Tables& base3() {
    static const Base3Tables tables;
    return tables;
}

}  // namespace

SectorBasis::SectorBasis(int sites, std::optional<int> particles, LocalStates ls)
    : sites_(sites), particles_(particles), locals_(ls) {
    if (sites < 1 || sites > 32)
        fail("TooLarge", "site count " + std::to_string(sites) +
                             " outside the 1..32 encoding bound");
    if (particles && (*particles < 0 || *particles > sites))
        fail("BadSector", "particle number outside 0..L");
    dim_ = sector_dimension(sites, particles, ls);
}

std::uint64_t SectorBasis::sector_dimension(int sites, std::optional<int> particles,
                                            LocalStates ls) {
    if (particles) {
        const std::uint64_t masks = bits::binomial(sites, *particles);
        return ls == LocalStates::two_species ? masks << *particles : masks;
    }
    return ls == LocalStates::two_species ? pow_u64(3, sites) : pow_u64(2, sites);
}

SectorBasis SectorBasis::fixed_n(int sites, int particles, LocalStates ls,
                                 std::uint64_t memory_budget) {
    SectorBasis b(sites, particles, ls);
    if (b.dim_ > memory_budget / 16)
        fail("TooLarge", "sector dimension " + std::to_string(b.dim_) +
                             " exceeds the memory budget for one state vector");
    return b;
}

SectorBasis SectorBasis::grand_canonical(int sites, LocalStates ls,
                                         std::uint64_t memory_budget) {
    SectorBasis b(sites, std::nullopt, ls);
    if (b.dim_ > memory_budget / 16)
        fail("TooLarge", "sector dimension " + std::to_string(b.dim_) +
                             " exceeds the memory budget for one state vector");
    return b;
}

std::uint64_t SectorBasis::word_at(std::uint64_t index) const {
    if (particles_) {
        const int n = *particles_;
        if (locals_ == LocalStates::b_only) {
            const std::uint64_t mask = bits::colex_unrank(index, n, sites_);
            return bits::pdep(mask, bits::kEven);
        }
        const std::uint64_t species = index & ((n == 0) ? 0 : ((1ull << n) - 1));
        const std::uint64_t mask = bits::colex_unrank(index >> n, n, sites_);
        // species bit p set -> p-th occupied site holds |+> (code 10)
        const std::uint64_t minus_flags = bits::pdep(~species, mask);
        const std::uint64_t plus_flags = bits::pdep(species, mask);
        return bits::pdep(minus_flags, bits::kEven) |
               (bits::pdep(plus_flags, bits::kEven) << 1);
    }
    if (locals_ == LocalStates::b_only) return bits::pdep(index, bits::kEven);
    // grand canonical, two species: decode base 3
    std::uint64_t w = 0;
    std::uint64_t rest = index;
    for (int s = 0; s < sites_; ++s) {
        const std::uint64_t digit = rest % 3;
        rest /= 3;
        w |= digit << (2 * s);
    }
    return w;
}

std::uint64_t SectorBasis::index_of(std::uint64_t word) const {
    const std::uint64_t occ = (word | (word >> 1)) & bits::kEven;
    if (particles_) {
        const std::uint64_t mask = bits::pext(occ, bits::kEven);
        if (locals_ == LocalStates::b_only) return bits::colex_rank(mask);
        const std::uint64_t species = bits::pext((word >> 1) & bits::kEven, occ);
        return (bits::colex_rank(mask) << *particles_) | species;
    }
    if (locals_ == LocalStates::b_only) return bits::pext(word, bits::kEven);
    const auto& t3 = base3().t;
    std::uint64_t idx = 0;
    for (int pos = 0; pos < 8; ++pos) idx += t3[pos][(word >> (8 * pos)) & 0xff];
    return idx;
}

}  // namespace fci
