#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace stieltjes {

/// Worker cap from STIELTJES_THREADS (0 or unset means one per core).
inline unsigned max_threads() {
    const char* env = std::getenv("STIELTJES_THREADS");
    if (env) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(0..count-1), possibly across threads. Results must be written
/// to disjoint slots keyed by index, so the outcome does not depend on
/// scheduling. If any call throws, the exception from the lowest index
/// is rethrown after all workers finish.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(max_threads(), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& th : pool) th.join();

    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

} // namespace stieltjes
