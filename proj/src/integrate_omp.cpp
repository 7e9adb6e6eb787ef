// OpenMP kernels. Each thread builds its own integrand from the factory; the
// work item to result mapping is fixed, so output does not depend on the
// thread count or schedule.
#include <omp.h>

#include <exception>
#include <mutex>

#include "integrate_detail.hpp"

namespace nldc::detail {

namespace {

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

} // namespace

void sample_all_parallel(const IntegrandFactory& factory, int dims, int divisions, int count, std::uint64_t seed,
                         int round, std::vector<StratumResult>& out, int workers)
{
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const long strata = long(out.size());
#pragma omp parallel num_threads(thread_count(workers))
    {
        Integrand f;
        try {
            f = factory();
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
#pragma omp for schedule(dynamic, 1)
        for (long j = 0; j < strata; ++j) {
            if (!f) continue;
            try {
                out[std::size_t(j)] = sample_stratum(f, dims, divisions, j, count, seed, round);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void map_parallel(std::size_t count, const std::function<std::function<double(std::size_t)>()>& factory,
                  std::vector<double>& out, int workers)
{
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const long n = long(count);
#pragma omp parallel num_threads(thread_count(workers))
    {
        std::function<double(std::size_t)> f;
        try {
            f = factory();
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
#pragma omp for schedule(dynamic, 1)
        for (long i = 0; i < n; ++i) {
            if (!f) continue;
            try {
                out[std::size_t(i)] = f(std::size_t(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace nldc::detail
