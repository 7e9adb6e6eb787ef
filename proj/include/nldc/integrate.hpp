#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace nldc {

/// Kernels come in two flavours with identical results: a plain serial loop
/// (the reference) and an OpenMP loop over independent work items.
enum class Execution { serial, parallel };

/// Integrand over the unit hypercube. Each worker thread gets its own
/// instance from the factory so integrands may carry caches.
using Integrand = std::function<double(std::span<const double>)>;
using IntegrandFactory = std::function<Integrand()>;

struct StratifiedOptions {
    int dims = 1;
    int divisions = 4;            ///< strata per dimension
    int samples_per_stratum = 4;  ///< first round
    std::uint64_t seed = 1;
    double rel_tolerance = 0.0;   ///< 0: a single round
    int max_rounds = 1;           ///< each further round doubles the samples
    Execution execution = Execution::parallel;
    int workers = 0;              ///< 0: OpenMP default
};

struct IntegralEstimate {
    double value = 0;
    double error = 0;          ///< one standard deviation
    long evaluations = 0;
    bool converged = true;
    int worst_stratum = -1;    ///< largest variance contribution
    std::vector<double> worst_lower, worst_upper; ///< its bounds in the unit cube
};

/// Stratified Monte Carlo. Every stratum draws from its own counter-seeded
/// generator and partial sums are merged by a fixed pairwise tree, so the
/// result is bit-identical for any worker count.
IntegralEstimate integrate_stratified(const IntegrandFactory& factory, const StratifiedOptions& opts);

/// Deterministic tensor-product Gauss-Legendre rule with `order` nodes per
/// dimension.
IntegralEstimate integrate_product_gauss(const IntegrandFactory& factory, int dims, int order,
                                         Execution execution = Execution::parallel, int workers = 0);

/// Evaluates f(i) for i in [0, count) into a vector. f must be pure per index.
std::vector<double> map_indexed(std::size_t count, const std::function<std::function<double(std::size_t)>()>& factory,
                                Execution execution = Execution::parallel, int workers = 0);

/// Fixed-shape pairwise summation.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// splitmix64 finalizer; used to derive per-item seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

} // namespace nldc
