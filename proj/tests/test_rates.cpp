#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nldc/rates.hpp"
#include "nldc/units.hpp"
#include "oracles/energy_jacobian.hpp"

using namespace nldc;
using testutil::rel_diff;

namespace {

const double MeV = units::MeV_to_natural(1.0);

PhaseSpacePoint random_point(std::mt19937_64& rng, const PhaseSpaceCuts& cuts = {})
{
    std::uniform_real_distribution<double> u(0, 1);
    PhaseSpacePoint x;
    x.omega_b = cuts.omega_b.lo * std::pow(cuts.omega_b.hi / cuts.omega_b.lo, u(rng));
    x.theta_b = cuts.theta_b.hi * u(rng);
    x.psi_b = 2 * units::pi * u(rng);
    x.theta_c = cuts.theta_c.hi * u(rng);
    x.psi_c = 2 * units::pi * u(rng);
    return x;
}

PhaseSpacePoint weak_point() { return {0.3 * MeV, 0.7e-3, 0.4, 1.1e-3, 2.0}; }

} // namespace

TEST_CASE("energy Jacobian against a finite-difference oracle")
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    const DressedElectron di = s.initial();
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> nd(1, 30);
    int done = 0;
    while (done < 100) {
        const PhaseSpacePoint x = random_point(rng);
        const auto ep = make_emission_point(s.laser, di, nd(rng), x.omega_b, x.theta_b, x.psi_b, x.theta_c, x.psi_c);
        if (!ep) continue;
        ++done;
        CHECK(rel_diff(energy_jacobian(*ep), oracle::inverse_energy_derivative(*ep)) < 1e-6);
    }
}

TEST_CASE("rate density: sums, symmetry and sign")
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    std::mt19937_64 rng(22);
    AmplitudeEvaluator ev;
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
        const PhaseSpacePoint x = random_point(rng);
        const RatePoint r = differential_rate(s, x, {}, {}, ev);
        if (r.excluded) continue;
        ++checked;
        CHECK(r.value >= 0);
        CHECK(std::isfinite(r.value));
        double n_sum = 0;
        for (double v : r.per_n) {
            CHECK(v >= 0);
            n_sum += v;
        }
        CHECK(rel_diff(n_sum, r.value) < 1e-12);

        double pol_sum = 0;
        for (int lb = 1; lb <= 2; ++lb)
            for (int lc = 1; lc <= 2; ++lc) {
                const RatePoint p = differential_rate(s, x, {lb, lc}, {}, ev);
                pol_sum += p.value;
                CHECK(rel_diff(p.value, r.per_polarization[std::size_t((lb - 1) * 2 + lc - 1)]) < 1e-12);
            }
        CHECK(rel_diff(pol_sum, r.value) < 1e-10);

        PhaseSpacePoint m = x;
        m.psi_b = 2 * units::pi - x.psi_b;
        m.psi_c = 2 * units::pi - x.psi_c;
        const RatePoint rm = differential_rate(s, m, {}, {}, ev);
        CHECK(rel_diff(rm.value, r.value) < 1e-8);

        // dropping the largest n removes exactly the reported tail
        RateOptions shorter;
        shorter.n_max = 29;
        const RatePoint rs = differential_rate(s, x, {}, shorter, ev);
        CHECK(std::abs(rs.value + r.tail_estimate() - r.value) <= 1e-12 * r.value);
        CHECK(r.tail_estimate() <= 1e-3 * r.value);
    }
    CHECK(checked > 20);
}

TEST_CASE("weak-field scaling and the perturbative reference")
{
    RateOptions one;
    one.n_max = 1;
    const PhaseSpacePoint x = weak_point();
    const double r3 = differential_rate(make_setup(1000, 2.5, 1e-3), x, {}, one).value;
    const double r4 = differential_rate(make_setup(1000, 2.5, 1e-4), x, {}, one).value;
    CHECK(r3 > 0);
    CHECK(rel_diff(r3 / 1e-6, r4 / 1e-8) < 2e-3);

    const Setup weak = make_setup(1000, 2.5, 1e-3);
    const RatePoint full = differential_rate(weak, x);
    const RatePoint ref = perturbative_rate(weak, x);
    CHECK(rel_diff(ref.value, full.value) < 1e-2);

    // xi' = xi / 2 is far from the weak-field limit at xi = 1
    PerturbativeOptions coarse;
    coarse.scale = 0.5;
    CHECK_THROWS_AS(perturbative_rate(make_setup(1000, 2.5, 1.0), x, {}, {}, coarse), LimitError);
    const RatePoint fine = perturbative_rate(make_setup(1000, 2.5, 1.0), x);
    CHECK(fine.value > 0);
}

TEST_CASE("Fig. 2 grid: perturbative and nonperturbative maps differ")
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    AmplitudeEvaluator ev;
    double max_ratio = 0;
    const int N = 8;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const PhaseSpacePoint x{1 * MeV, 1e-3, 2 * units::pi * i / N, 1e-3, 2 * units::pi * j / N};
            for (PolarizationSelect pol : {PolarizationSelect{1, 1}, PolarizationSelect{2, 2}}) {
                const RatePoint np = differential_rate(s, x, pol, {}, ev);
                const RatePoint pt = perturbative_rate(s, x, pol, {}, {}, ev);
                if (np.excluded || pt.excluded || np.value <= 0 || pt.value <= 0) continue;
                max_ratio = std::max({max_ratio, np.value / pt.value, pt.value / np.value});
            }
        }
    MESSAGE("largest map ratio " << max_ratio);
    CHECK(max_ratio > 1.5);
}

TEST_CASE("integrated rates: determinism and estimator consistency")
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    const PhaseSpaceCuts cuts;
    RateOptions ro;
    ro.n_max = 25;
    IntegrationOptions io;
    io.divisions = 2;
    io.samples_per_stratum = 2;
    io.seed = 5;
    io.execution = Execution::serial;
    const IntegratedRate serial = integrated_rate_theta_c(s, cuts, 0.8e-3, RateMode::nonperturbative, ro, io);
    CHECK(serial.estimate.value > 0);
    io.execution = Execution::parallel;
    for (int w : {1, 3}) {
        io.workers = w;
        const IntegratedRate par = integrated_rate_theta_c(s, cuts, 0.8e-3, RateMode::nonperturbative, ro, io);
        CHECK(par.estimate.value == serial.estimate.value);
        CHECK(par.estimate.error == serial.estimate.error);
    }

    // doubling the samples moves the estimate by less than twice the
    // combined standard error in at least 90% of trials
    int within = 0;
    const int trials = 20;
    io.workers = 0;
    for (int t = 0; t < trials; ++t) {
        io.seed = 100 + std::uint64_t(t);
        io.samples_per_stratum = 2;
        const IntegralEstimate a = integrated_rate_theta_c(s, cuts, 0.8e-3, RateMode::nonperturbative, ro, io).estimate;
        io.seed = 1000 + std::uint64_t(t);
        io.samples_per_stratum = 4;
        const IntegralEstimate b = integrated_rate_theta_c(s, cuts, 0.8e-3, RateMode::nonperturbative, ro, io).estimate;
        if (std::abs(a.value - b.value) < 2 * std::hypot(a.error, b.error)) ++within;
    }
    MESSAGE(within << " of " << trials << " trials within two sigma");
    CHECK(within >= 18);

    CHECK(integrated_rate_theta_c(s, cuts, 0.0, RateMode::nonperturbative, ro, io).estimate.value == 0.0);
    PhaseSpaceCuts bad;
    bad.omega_b = {2.0, 1.0};
    CHECK_THROWS_AS(integrated_rate_theta_c(s, bad, 1e-3, RateMode::nonperturbative, ro, io), std::invalid_argument);
}

TEST_CASE("single Compton rate")
{
    SingleComptonOptions o;
    o.n_max = 10;
    o.psi_points = 48;
    const Setup s = make_setup(1000, 2.5, 1.0);
    const double a = single_compton_total_rate(s, o).total;
    o.psi_offset = 0.37;
    const double b = single_compton_total_rate(s, o).total;
    CHECK(rel_diff(a, b) < 1e-5);

    SingleComptonOptions w;
    w.n_max = 4;
    const SingleComptonResult r2 = single_compton_total_rate(make_setup(1000, 2.5, 1e-2), w);
    const SingleComptonResult r3 = single_compton_total_rate(make_setup(1000, 2.5, 1e-3), w);
    CHECK(rel_diff(r2.total / r3.total, 100.0) < 1e-3);
    CHECK(r2.per_n.size() == 4);
    CHECK(r2.per_n[1] < 1e-3 * r2.per_n[0]);
}

TEST_CASE("pairs per shot")
{
    CHECK(pairs_per_shot(3.5e7, 1e9, 100e-15) == doctest::Approx(3.5e3).epsilon(1e-12));
    CHECK(pairs_per_shot(3.5e7, 1e9, 0.0) == 0.0);
    CHECK(pairs_per_shot(7e7, 1e9, 100e-15) == doctest::Approx(2 * pairs_per_shot(3.5e7, 1e9, 100e-15)));
    CHECK(pairs_per_shot(3.5e7, 3e9, 100e-15) == doctest::Approx(3 * pairs_per_shot(3.5e7, 1e9, 100e-15)));
    CHECK(pairs_per_shot(3.5e7, 1e9, 50e-15) == doctest::Approx(0.5 * pairs_per_shot(3.5e7, 1e9, 100e-15)));
    CHECK_THROWS_AS(pairs_per_shot(-1.0, 1e9, 1e-13), std::invalid_argument);
}
