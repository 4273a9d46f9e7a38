#include <dpoly/errors.hh>
#include <dpoly/parallel.hh>

#include <doctest.h>

#include <atomic>
#include <map>
#include <numeric>
#include <thread>

using namespace dpoly;

TEST_CASE("results come back in job order")
{
    std::vector<int> jobs(1000);
    std::iota(jobs.begin(), jobs.end(), 0);
    auto serial = run_parallel(jobs, 1, [](int x) { return x * x; });
    for (int w : {1, 2, 4, 8}) {
        ParallelStats stats;
        auto out = run_parallel(jobs, w, [](int x) { return x * x; }, {}, &stats);
        REQUIRE(out == serial);
        CHECK(stats.jobs == 1000);
        CHECK(std::accumulate(stats.per_worker.begin(), stats.per_worker.end(), std::size_t{0}) == 1000);
    }
}

TEST_CASE("empty job list")
{
    std::vector<int> jobs;
    CHECK(run_parallel(jobs, 4, [](int x) { return x; }).empty());
}

TEST_CASE("callbacks run once per job on the calling thread")
{
    std::vector<int> jobs(300);
    std::iota(jobs.begin(), jobs.end(), 0);
    auto caller = std::this_thread::get_id();
    std::map<std::size_t, int> seen;
    run_parallel(jobs, 4, [](int x) { return x + 1; }, [&](std::size_t i, const int & r) {
        REQUIRE(std::this_thread::get_id() == caller);
        REQUIRE(r == static_cast<int>(i) + 1);
        ++seen[i];
    });
    CHECK(seen.size() == 300);
    for (auto & [i, count] : seen)
        CHECK(count == 1);
}

TEST_CASE("a job that fails once is retried")
{
    std::vector<int> jobs(50);
    std::iota(jobs.begin(), jobs.end(), 0);
    for (int w : {1, 3}) {
        std::vector<std::atomic<int>> attempts(50);
        ParallelStats stats;
        auto out = run_parallel(
            jobs, w,
            [&](int x) {
                if (x % 7 == 0 && attempts[x]++ == 0)
                    throw std::runtime_error("transient");
                return x;
            },
            {}, &stats);
        CHECK(out == jobs);
        CHECK(stats.retries == 8);
    }
}

TEST_CASE("a job that fails twice fails the run")
{
    std::vector<int> jobs(40);
    std::iota(jobs.begin(), jobs.end(), 0);
    for (int w : {1, 4})
        CHECK_THROWS_WITH_AS(run_parallel(jobs, w,
                                 [](int x) {
                                     if (x == 13)
                                         throw std::runtime_error("broken job");
                                     return x;
                                 }),
            "broken job", std::runtime_error);
}

TEST_CASE("worker count must be positive")
{
    std::vector<int> jobs{1};
    CHECK_THROWS_AS(run_parallel(jobs, 0, [](int x) { return x; }), DomainError);
}
