// Serial reference kernels and shared helpers.
#include <algorithm>
#include <memory>
#include <cmath>
#include <random>
#include <stdexcept>

#include "integrate_detail.hpp"

namespace nldc {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    nodes.assign(std::size_t(order), 0.0);
    weights.assign(std::size_t(order), 0.0);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (order + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1, p2 = 0;
            for (int j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
            }
            pp = order * (z * p1 - p2) / (z * z - 1);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[std::size_t(i)] = -z;
        nodes[std::size_t(order - 1 - i)] = z;
        weights[std::size_t(i)] = weights[std::size_t(order - 1 - i)] = 2.0 / ((1 - z * z) * pp * pp);
    }
}

namespace detail {

StratumResult sample_stratum(const Integrand& f, int dims, int divisions, long stratum, int count,
                             std::uint64_t seed, int round)
{
    std::vector<int> cell(static_cast<std::size_t>(dims));
    long rest = stratum;
    for (int d = 0; d < dims; ++d) {
        cell[std::size_t(d)] = int(rest % divisions);
        rest /= divisions;
    }
    std::mt19937_64 rng(mix_seed(seed, std::uint64_t(stratum) * 64 + std::uint64_t(round)));
    std::vector<double> u(static_cast<std::size_t>(dims));
    StratumResult r;
    const double h = 1.0 / divisions;
    for (int i = 0; i < count; ++i) {
        for (int d = 0; d < dims; ++d) {
            const double unit = double(rng() >> 11) * 0x1.0p-53;
            u[std::size_t(d)] = (cell[std::size_t(d)] + unit) * h;
        }
        const double v = f(u);
        r.sum += v;
        r.sum2 += v * v;
    }
    r.count = count;
    return r;
}

void sample_all_serial(const IntegrandFactory& factory, int dims, int divisions, int count, std::uint64_t seed,
                       int round, std::vector<StratumResult>& out)
{
    const Integrand f = factory();
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = sample_stratum(f, dims, divisions, long(j), count, seed, round);
}

void map_serial(std::size_t count, const std::function<std::function<double(std::size_t)>()>& factory,
                std::vector<double>& out)
{
    const auto f = factory();
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
}

} // namespace detail

IntegralEstimate integrate_stratified(const IntegrandFactory& factory, const StratifiedOptions& opts)
{
    if (opts.dims < 1 || opts.divisions < 1 || opts.samples_per_stratum < 2)
        throw std::invalid_argument("integrate_stratified: need dims, divisions >= 1 and >= 2 samples per stratum");
    long strata = 1;
    for (int d = 0; d < opts.dims; ++d) strata *= opts.divisions;
    const double vol = 1.0 / double(strata);

    std::vector<detail::StratumResult> acc(static_cast<std::size_t>(strata)), round_result(static_cast<std::size_t>(strata));
    IntegralEstimate est;
    int count = opts.samples_per_stratum;
    for (int round = 0; round < std::max(1, opts.max_rounds); ++round) {
        if (opts.execution == Execution::serial)
            detail::sample_all_serial(factory, opts.dims, opts.divisions, count, opts.seed, round, round_result);
        else
            detail::sample_all_parallel(factory, opts.dims, opts.divisions, count, opts.seed, round, round_result,
                                        opts.workers);
        for (std::size_t j = 0; j < acc.size(); ++j) {
            acc[j].sum += round_result[j].sum;
            acc[j].sum2 += round_result[j].sum2;
            acc[j].count += round_result[j].count;
        }
        est.evaluations += long(count) * strata;

        std::vector<double> means(acc.size()), vars(acc.size());
        double worst = -1;
        for (std::size_t j = 0; j < acc.size(); ++j) {
            const double nj = acc[j].count;
            const double mean = acc[j].sum / nj;
            const double var = std::max(0.0, (acc[j].sum2 / nj - mean * mean) * nj / (nj - 1));
            means[j] = mean * vol;
            vars[j] = var * vol * vol / nj;
            if (vars[j] > worst) {
                worst = vars[j];
                est.worst_stratum = int(j);
            }
        }
        est.value = pairwise_sum(means);
        est.error = std::sqrt(pairwise_sum(vars));
        est.converged = opts.rel_tolerance <= 0 || est.error <= opts.rel_tolerance * std::abs(est.value);
        if (est.converged) break;
        count = int(acc[0].count); // next round doubles the total
    }

    est.worst_lower.assign(std::size_t(opts.dims), 0.0);
    est.worst_upper.assign(std::size_t(opts.dims), 0.0);
    long rest = est.worst_stratum;
    for (int d = 0; d < opts.dims; ++d) {
        const int c = int(rest % opts.divisions);
        rest /= opts.divisions;
        est.worst_lower[std::size_t(d)] = double(c) / opts.divisions;
        est.worst_upper[std::size_t(d)] = double(c + 1) / opts.divisions;
    }
    return est;
}

IntegralEstimate integrate_product_gauss(const IntegrandFactory& factory, int dims, int order, Execution execution,
                                         int workers)
{
    std::vector<double> x, w;
    gauss_legendre(order, x, w);
    std::size_t total = 1;
    for (int d = 0; d < dims; ++d) total *= std::size_t(order);

    auto point_factory = [&]() {
        auto f = std::make_shared<Integrand>(factory());
        return std::function<double(std::size_t)>([f, &x, &w, dims, order](std::size_t idx) {
            std::vector<double> u(static_cast<std::size_t>(dims));
            double weight = 1;
            for (int d = 0; d < dims; ++d) {
                const std::size_t k = idx % std::size_t(order);
                idx /= std::size_t(order);
                u[std::size_t(d)] = 0.5 * (x[k] + 1.0);
                weight *= 0.5 * w[k];
            }
            return weight * (*f)(u);
        });
    };
    const std::vector<double> values = map_indexed(total, point_factory, execution, workers);
    IntegralEstimate est;
    est.value = pairwise_sum(values);
    est.error = 0;
    est.evaluations = long(total);
    return est;
}

std::vector<double> map_indexed(std::size_t count, const std::function<std::function<double(std::size_t)>()>& factory,
                                Execution execution, int workers)
{
    std::vector<double> out(count);
    if (execution == Execution::serial)
        detail::map_serial(count, factory, out);
    else
        detail::map_parallel(count, factory, out, workers);
    return out;
}

} // namespace nldc
