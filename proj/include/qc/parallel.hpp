#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace qc
{

    /// Worker count: QC_THREADS if set to a positive integer, else logical cores.
    inline unsigned thread_count()
    {
        if (const char *env = std::getenv("QC_THREADS"))
        {
            try
            {
                const long v = std::stol(env);
                if (v > 0)
                    return static_cast<unsigned>(v);
            }
            catch (const std::exception &)
            {
            }
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }

    /// Evaluates fn(i) for i in [0, n) and returns the results in index order.
    /// Work is split into contiguous blocks; the caller reduces the vector
    /// serially, so results do not depend on the thread count.
    template <typename Fn>
    auto ordered_parallel_map(std::size_t n, Fn &&fn) -> std::vector<decltype(fn(std::size_t{}))>
    {
        using R = decltype(fn(std::size_t{}));
        std::vector<R> out(n);
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
        if (workers <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                out[i] = fn(i);
            return out;
        }
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&, w] {
                try
                {
                    for (std::size_t i = w; i < n; i += workers)
                        out[i] = fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            });
        }
        for (auto &t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
        return out;
    }

} // namespace qc
