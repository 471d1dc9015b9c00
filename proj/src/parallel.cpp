#include "fci/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace fci {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }
int thread_count() { return g_threads.load(); }

void parallel_for(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body) {
    const std::uint64_t n = end > begin ? end - begin : 0;
    const int nt = std::min<std::uint64_t>(thread_count(), std::max<std::uint64_t>(1, n));
    if (nt <= 1 || n < 1024) {
        if (n) body(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::uint64_t chunk = (n + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::uint64_t s = begin + chunk * t;
        const std::uint64_t e = std::min(end, s + chunk);
        if (s >= e) break;
        pool.emplace_back([&, s, e] { body(s, e); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace fci
