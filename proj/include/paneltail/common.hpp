#ifndef PANELTAIL_COMMON_HPP
#define PANELTAIL_COMMON_HPP

#include <atomic>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace paneltail {

// Invalid argument values (bad law parameters, out-of-range tuning knobs).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or unreadable input data (files, panels, specs).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An estimator could not produce a value on this sample.
class estimation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No observations above the threshold; callers typically count these.
class no_exceedances_error : public estimation_error {
public:
    using estimation_error::estimation_error;
};

// Degenerate sample (constant series, zero moments, zero denominator).
class degenerate_error : public estimation_error {
public:
    using estimation_error::estimation_error;
};

// A numeric routine failed to reach its tolerance or produced non-finite output.
class numeric_error : public estimation_error {
public:
    using estimation_error::estimation_error;
};

// Runs fn(i) for i in [0, n). With n_threads <= 1 runs inline; otherwise
// work-steals over an atomic counter. fn must write only to its own slot(s),
// so results do not depend on the schedule.
template <typename Fn>
void parallel_for(std::size_t n, unsigned n_threads, Fn&& fn) {
    if (n == 0) return;
    if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(
        std::min<std::size_t>(n_threads, n));
    pool.reserve(spawn - 1);
    for (unsigned t = 1; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace paneltail

#endif
