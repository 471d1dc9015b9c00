#pragma once

#include <cstdint>
#include <functional>

namespace fci {

/// Process-wide worker count for parallel maps (1 = serial).  The CLI wires
/// --threads / FCI_THREADS here; library default is serial.
void set_thread_count(int n);
int thread_count();

/// Static range partition over [begin, end).  Chunk assignment is a pure
/// function of the range, so results that only write to disjoint slots are
/// identical for any worker count.
void parallel_for(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body);

}  // namespace fci
