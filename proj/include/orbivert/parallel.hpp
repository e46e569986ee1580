#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace orbivert {

// Worker count: ORBIVERT_THREADS caps the hardware concurrency.
inline unsigned thread_count()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ORBIVERT_THREADS")) {
        try {
            long cap = std::stol(env);
            if (cap >= 1)
                return std::min<unsigned>(hw, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
        }
    }
    return hw;
}

// Runs fn(worker, workers) on `workers` threads and returns their per-worker
// results in worker order, so merges are schedule independent.
template <class Result, class Fn>
std::vector<Result> run_workers(unsigned workers, Fn fn)
{
    workers = std::max(1u, workers);
    std::vector<Result> results(workers);
    if (workers == 1) {
        results[0] = fn(0u, 1u);
        return results;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                results[w] = fn(w, workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

} // namespace orbivert
