#pragma once

#include <dpoly/errors.hh>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <vector>

namespace dpoly
{
    struct ParallelStats
    {
        std::size_t jobs = 0;
        std::size_t retries = 0;
        std::vector<std::size_t> per_worker;
    };

    /// Runs fn over every job on worker_count threads and returns results in
    /// job order, so the output does not depend on scheduling. Jobs are handed
    /// out in chunks. A job that throws is queued again once; a second failure
    /// fails the whole run once the workers have stopped.
    ///
    /// on_result, if given, runs on the calling thread only (the aggregator),
    /// once per job, in completion order.
    template <typename Job, typename Fn>
    auto run_parallel(const std::vector<Job> & jobs, int worker_count, Fn && fn,
        std::function<void(std::size_t, const std::invoke_result_t<Fn &, const Job &> &)> on_result = {},
        ParallelStats * stats = nullptr, std::size_t chunk = 16)
        -> std::vector<std::invoke_result_t<Fn &, const Job &>>
    {
        using Result = std::invoke_result_t<Fn &, const Job &>;
        if (worker_count < 1)
            throw DomainError("worker count must be at least 1");
        chunk = std::max<std::size_t>(chunk, 1);

        std::vector<std::optional<Result>> slots(jobs.size());
        std::atomic<std::size_t> next_chunk{0};
        std::mutex lock;
        std::condition_variable wake;
        std::vector<std::size_t> done, retry;
        std::vector<std::size_t> per_worker(worker_count, 0);
        std::size_t retries = 0, finished_workers = 0;
        std::exception_ptr failure;
        bool stop = false;

        auto worker = [&](int id) {
            auto run_one = [&](std::size_t i, bool second_try) {
                try {
                    Result r = fn(jobs[i]);
                    std::lock_guard guard(lock);
                    slots[i] = std::move(r);
                    done.push_back(i);
                    ++per_worker[id];
                }
                catch (...) {
                    std::lock_guard guard(lock);
                    if (second_try) {
                        if (! failure)
                            failure = std::current_exception();
                        stop = true;
                    }
                    else {
                        retry.push_back(i);
                        ++retries;
                    }
                }
                wake.notify_all();
            };

            while (true) {
                {
                    std::lock_guard guard(lock);
                    if (stop)
                        break;
                }
                auto begin = next_chunk.fetch_add(chunk);
                if (begin >= jobs.size())
                    break;
                for (auto i = begin; i < std::min(begin + chunk, jobs.size()); ++i)
                    run_one(i, false);
            }
            while (true) {
                std::size_t i;
                {
                    std::lock_guard guard(lock);
                    if (stop || retry.empty())
                        break;
                    i = retry.back();
                    retry.pop_back();
                }
                run_one(i, true);
            }
            std::lock_guard guard(lock);
            ++finished_workers;
            wake.notify_all();
        };

        std::vector<std::jthread> threads;
        for (int id = 0; id < worker_count; ++id)
            threads.emplace_back(worker, id);

        std::size_t reported = 0;
        while (true) {
            std::vector<std::size_t> batch;
            bool all_finished;
            {
                std::unique_lock guard(lock);
                wake.wait(guard, [&] { return ! done.empty() || finished_workers == static_cast<std::size_t>(worker_count); });
                batch.swap(done);
                all_finished = finished_workers == static_cast<std::size_t>(worker_count);
            }
            if (on_result)
                for (auto i : batch)
                    on_result(i, *slots[i]);
            reported += batch.size();
            if (all_finished) {
                std::lock_guard guard(lock);
                if (done.empty())
                    break;
            }
        }
        threads.clear();

        // A retry can be left behind when its worker exited before it was queued.
        for (auto i : retry) {
            if (failure)
                break;
            try {
                slots[i] = fn(jobs[i]);
                if (on_result)
                    on_result(i, *slots[i]);
                ++reported;
            }
            catch (...) {
                failure = std::current_exception();
            }
        }
        if (failure)
            std::rethrow_exception(failure);

        if (stats) {
            stats->jobs = jobs.size();
            stats->retries = retries;
            stats->per_worker = per_worker;
        }

        std::vector<Result> results;
        results.reserve(jobs.size());
        for (auto & s : slots) {
            if (! s)
                throw std::logic_error("run_parallel: a job was never completed");
            results.push_back(std::move(*s));
        }
        return results;
    }
}
