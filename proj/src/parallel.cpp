#include "qnnent/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace qnnent {

namespace {
std::atomic<int> &threads() {
    static std::atomic<int> value{std::max(1, static_cast<int>(std::thread::hardware_concurrency()))};
    return value;
}
} // namespace

int  thread_count() { return threads().load(); }
void set_thread_count(int n) { threads().store(std::max(1, n)); }

void parallel_for(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t, std::uint64_t)> &body, std::uint64_t min_parallel) {
    if(end <= begin) return;
    std::uint64_t total   = end - begin;
    auto          workers = static_cast<std::uint64_t>(thread_count());
    workers               = std::min(workers, total);
    if(workers <= 1 || total < min_parallel) {
        body(begin, end);
        return;
    }
    std::uint64_t            chunk = (total + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for(std::uint64_t w = 0; w < workers; ++w) {
        std::uint64_t lo = begin + w * chunk;
        std::uint64_t hi = std::min(end, lo + chunk);
        if(lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for(auto &t : pool) t.join();
}

std::complex<double> pairwise_sum(std::span<std::complex<double>> values) {
    if(values.empty()) return {0.0, 0.0};
    std::size_t n = values.size();
    while(n > 1) {
        std::size_t half = n / 2;
        for(std::size_t i = 0; i < half; ++i) values[i] = values[2 * i] + values[2 * i + 1];
        if(n % 2 == 1) {
            values[half] = values[n - 1];
            n            = half + 1;
        } else {
            n = half;
        }
    }
    return values[0];
}

} // namespace qnnent
