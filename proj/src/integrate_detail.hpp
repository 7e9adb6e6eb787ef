#pragma once

#include "nldc/integrate.hpp"

namespace nldc::detail {

struct StratumResult {
    double sum = 0, sum2 = 0;
    long count = 0;
};

StratumResult sample_stratum(const Integrand& f, int dims, int divisions, long stratum, int count,
                             std::uint64_t seed, int round);

void sample_all_serial(const IntegrandFactory& factory, int dims, int divisions, int count, std::uint64_t seed,
                       int round, std::vector<StratumResult>& out);
void sample_all_parallel(const IntegrandFactory& factory, int dims, int divisions, int count, std::uint64_t seed,
                         int round, std::vector<StratumResult>& out, int workers);

void map_serial(std::size_t count, const std::function<std::function<double(std::size_t)>()>& factory,
                std::vector<double>& out);
void map_parallel(std::size_t count, const std::function<std::function<double(std::size_t)>()>& factory,
                  std::vector<double>& out, int workers);

} // namespace nldc::detail
