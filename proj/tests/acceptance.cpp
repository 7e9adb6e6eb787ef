// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nldc/entanglement.hpp"
#include "nldc/scan.hpp"
#include "nldc/units.hpp"
#include "oracles/bessel_series.hpp"
#include "oracles/energy_jacobian.hpp"

using namespace nldc;

namespace {

const double MeV = units::MeV_to_natural(1.0);

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what)
    {
        pass = pass && ok;
        if (detail.tellp() > 0) detail << "; ";
        detail << what << (ok ? "" : " [x]");
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

int failures = 0;

void criterion(const std::string& id, const std::string& title, const std::function<void(Verdict&)>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        body(v);
    } catch (const std::exception& e) {
        v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("%s  %-8s %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
                v.detail.str().c_str(), secs);
    std::fflush(stdout);
}

PhaseSpacePoint random_point(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0, 1);
    const PhaseSpaceCuts cuts;
    return {cuts.omega_b.lo * std::pow(cuts.omega_b.hi / cuts.omega_b.lo, u(rng)), cuts.theta_b.hi * u(rng),
            2 * units::pi * u(rng), cuts.theta_c.hi * u(rng), 2 * units::pi * u(rng)};
}

Eigen::Matrix4cd bell()
{
    Eigen::Vector4cd v(1, 0, 0, 1);
    v /= std::sqrt(2.0);
    return v * v.adjoint();
}

PolarizationDensityMatrix wrap(const Eigen::Matrix4cd& m)
{
    PolarizationDensityMatrix d;
    d.rho = m;
    return d;
}

void gauge(Verdict& v)
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    const DressedElectron di = s.initial();
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> nd(1, 30);
    int points = 0;
    double worst = 0;
    AmplitudeEvaluator ev;
    while (points < 120) {
        const PhaseSpacePoint x = random_point(rng);
        const auto ep = make_emission_point(s.laser, di, nd(rng), x.omega_b, x.theta_b, x.psi_b, x.theta_c, x.psi_c);
        if (!ep) continue;
        const PolarizationPair pb{CFourVector(ep->b.eps1), CFourVector(ep->b.eps2)};
        const PolarizationPair pc{CFourVector(ep->c.eps1), CFourVector(ep->c.eps2)};
        AmplitudeSet a;
        try {
            a = ev.evaluate(*ep, pb, pc);
        } catch (const ResonanceError&) {
            continue;
        }
        ++points;
        const cplx lb{u(rng) / ep->b.omega, u(rng) / ep->b.omega}, lc{u(rng) / ep->c.omega, u(rng) / ep->c.omega};
        const PolarizationPair gb{gauge_shift(pb[0], ep->b.k, lb), gauge_shift(pb[1], ep->b.k, lb)};
        const PolarizationPair gc{gauge_shift(pc[0], ep->c.k, lc), gauge_shift(pc[1], ep->c.k, lc)};
        const AmplitudeSet shifted[3] = {ev.evaluate(*ep, gb, pc), ev.evaluate(*ep, pb, gc), ev.evaluate(*ep, gb, gc)};
        double total = 0;
        for (int x1 = 1; x1 <= 2; ++x1)
            for (int x2 = 1; x2 <= 2; ++x2) total += a.spin_summed_square(x1, x2);
        for (const AmplitudeSet& g : shifted)
            for (int x1 = 1; x1 <= 2; ++x1)
                for (int x2 = 1; x2 <= 2; ++x2) {
                    const double ref = a.spin_summed_square(x1, x2);
                    worst = std::max(worst, std::abs(g.spin_summed_square(x1, x2) - ref) / std::max(ref, 1e-12 * total));
                }
    }
    v.check(worst < 1e-8, std::to_string(points) + " points, largest relative change " + fmt("%.2e", worst) + " < 1e-8");
}

void bessel(Verdict& v)
{
    double d = 0;
    const BesselBatch z = genbessel_batch({0, 0}, -6, 6);
    for (int N = -6; N <= 6; ++N) {
        d = std::max(d, std::abs(z(0, N) - (N == 0 ? 1.0 : 0.0)));
        d = std::max(d, std::abs(z(1, N) - (std::abs(N) == 1 ? 0.5 : 0.0)));
        d = std::max(d, std::abs(z(2, N) - (N == 0 ? 0.5 : std::abs(N) == 2 ? 0.25 : 0.0)));
    }
    v.check(d < 1e-15, "delta reduction " + fmt("%.1e", d));

    double dj = 0;
    for (double alpha : {0.5, 3.7, 12.0}) {
        const BesselBatch b = genbessel_batch({alpha, 0}, -15, 15);
        for (int N = -15; N <= 15; ++N) dj = std::max(dj, std::abs(b(0, N) - oracle::bessel_j_series(N, alpha)));
    }
    v.check(dj < 1e-10, "J_N vs series " + fmt("%.1e", dj));

    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> ua(-50, 50), ub(-25, 25);
    double ds = 0, dr = 0;
    for (int t = 0; t < 10; ++t) {
        const BesselArgs a{ua(rng), ub(rng)};
        const int cut = bessel_order_cutoff(a);
        const BesselBatch b = genbessel_batch(a, -cut, cut);
        long double sum = 0;
        for (int N = -cut; N <= cut; ++N) sum += b(0, N);
        ds = std::max(ds, std::abs(double(sum) - 1.0));
        for (int N = -cut + 2; N <= cut - 2; N += 7) {
            dr = std::max(dr, std::abs(b(1, N) - 0.5 * (b(0, N - 1) + b(0, N + 1))));
            dr = std::max(dr, std::abs(b(2, N) - 0.25 * (b(0, N - 2) + 2 * b(0, N) + b(0, N + 2))));
        }
    }
    v.check(ds < 1e-12, "sum A_0N - 1 = " + fmt("%.1e", ds));
    v.check(dr < 1e-10, "h recurrences " + fmt("%.1e", dr));
}

void dressed_mass(Verdict& v)
{
    double dm = 0;
    for (double xi : {0.0, 0.1, 1.0, 5.0}) {
        const LaserConfig l = laser_from_intensity(2.5, xi);
        const DressedElectron d = dress(head_on_electron(1000), l);
        dm = std::max(dm, rel(std::sqrt(minkowski_dot(d.q, d.q)), std::sqrt(1 + xi * xi)));
        dm = std::max(dm, rel(d.m_star, std::sqrt(1 + xi * xi)));
    }
    v.check(dm < 1e-12, "m_* identity " + fmt("%.1e", dm));

    const LaserConfig l = laser_from_intensity(2.5, 1.0);
    const DressedElectron di = dress(head_on_electron(1000), l);
    double da = 0, da20 = 0;
    for (int n = 1; n <= 20; ++n) {
        const auto ep = make_emission_point(l, di, n, 1 * MeV, 1e-3, 0, 1e-3, 0);
        const double r = rel(approx_omega_c(n, l, 1000, 1 * MeV, 1e-3, 1e-3), ep->c.omega);
        if (n <= 5) da = std::max(da, r);
        da20 = std::max(da20, r);
    }
    v.check(da < 0.05, "approximate vs exact omega_c " + fmt("%.3f", da) + " for n <= 5 (n omega/m << m/E)");
    v.detail << " (n <= 20: " << fmt("%.3f", da20) << ")";
    const auto ep = make_emission_point(l, di, 20, 1 * MeV, 1e-3, 0, 1e-3, 0);
    const double wc = units::natural_to_MeV(ep->c.omega);
    v.check(rel(wc, 60) < 0.15, "omega_c(n=20) = " + fmt("%.1f", wc) + " MeV vs 60 MeV (15%)");
}

void jacobian(Verdict& v)
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    const DressedElectron di = s.initial();
    std::mt19937_64 rng(104);
    std::uniform_int_distribution<int> nd(1, 30);
    int done = 0;
    double worst = 0;
    while (done < 100) {
        const PhaseSpacePoint x = random_point(rng);
        const auto ep = make_emission_point(s.laser, di, nd(rng), x.omega_b, x.theta_b, x.psi_b, x.theta_c, x.psi_c);
        if (!ep) continue;
        ++done;
        worst = std::max(worst, rel(energy_jacobian(*ep), oracle::inverse_energy_derivative(*ep)));
    }
    v.check(worst < 1e-6, "100 points, largest deviation " + fmt("%.2e", worst));
}

void perturbative(Verdict& v)
{
    RateOptions one;
    one.n_max = 1;
    std::mt19937_64 rng(105);
    double dxi = 0, dref = 0;
    int done = 0;
    while (done < 20) {
        PhaseSpacePoint x = random_point(rng);
        x.omega_b *= 0.5;
        const RatePoint a = differential_rate(make_setup(1000, 2.5, 1e-3), x, {}, one);
        if (a.excluded || a.value <= 0) continue;
        ++done;
        const RatePoint b = differential_rate(make_setup(1000, 2.5, 1e-4), x, {}, one);
        dxi = std::max(dxi, rel(a.value / 1e-6, b.value / 1e-8));
        const Setup weak = make_setup(1000, 2.5, 1e-3);
        dref = std::max(dref, rel(perturbative_rate(weak, x).value, differential_rate(weak, x).value));
    }
    v.check(dxi < 5e-3, "rate/xi^2 between 1e-3 and 1e-4 " + fmt("%.1e", dxi) + " (0.5%)");
    v.check(dref < 1e-2, "reference vs full at xi = 1e-3 " + fmt("%.1e", dref) + " (1%)");
}

void concurrence_suite(Verdict& v)
{
    v.check(std::abs(concurrence(wrap(bell())).C - 1) < 1e-12, "Bell 1");
    Eigen::Matrix4cd prod = Eigen::Matrix4cd::Zero();
    prod(0, 0) = 1;
    v.check(concurrence(wrap(prod)).C == 0, "product 0");
    for (double p : {0.2, 0.5, 0.9}) {
        const Eigen::Matrix4cd w = p * bell() + (1 - p) * Eigen::Matrix4cd::Identity() / 4.0;
        const double c = concurrence(wrap(w)).C;
        v.check(std::abs(c - std::max(0.0, (3 * p - 1) / 2)) < 1e-12, "Werner " + fmt("%.1f", p) + " -> " + fmt("%.4f", c));
    }
    std::mt19937_64 rng(106);
    std::normal_distribution<double> g(0, 1);
    double lu = 0;
    for (int t = 0; t < 50; ++t) {
        Eigen::Matrix4cd G;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) G(i, j) = cplx{g(rng), g(rng)};
        Eigen::Matrix4cd r = G * G.adjoint();
        r /= r.trace().real();
        Eigen::Matrix2cd a, b;
        for (Eigen::Matrix2cd* m : {&a, &b}) {
            Eigen::Vector4d q(g(rng), g(rng), g(rng), g(rng));
            q.normalize();
            *m << cplx{q(0), q(1)}, cplx{q(2), q(3)}, cplx{-q(2), q(3)}, cplx{q(0), -q(1)};
        }
        Eigen::Matrix4cd U;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) U.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        lu = std::max(lu, std::abs(concurrence(wrap(U * r * U.adjoint())).C - concurrence(wrap(r)).C));
    }
    v.check(lu < 1e-8, "local unitaries " + fmt("%.1e", lu));

    const Setup s = make_setup(1000, 2.5, 1.0);
    AmplitudeEvaluator ev;
    double herm = 0, tr = 0, mine = 1;
    int pts = 0;
    for (int t = 0; t < 40; ++t) {
        const PhaseSpacePoint x = random_point(rng);
        try {
            const DensityResult d = density_matrix(s, x, NPolicy::per_n, {}, ev);
            ++pts;
            for (const auto* m : {&d.combined}) {
                herm = std::max(herm, m->hermiticity_defect());
                tr = std::max(tr, std::abs(m->trace() - 1));
                mine = std::min(mine, m->min_eigenvalue());
            }
            for (const auto& m : d.per_n) {
                herm = std::max(herm, m.hermiticity_defect());
                tr = std::max(tr, std::abs(m.trace() - 1));
                mine = std::min(mine, m.min_eigenvalue());
            }
        } catch (const std::exception&) {
        }
    }
    v.check(herm < 1e-12 && tr < 1e-10 && mine >= -1e-10,
            "rho_f at " + std::to_string(pts) + " points: Hermitian " + fmt("%.0e", herm) + ", trace " + fmt("%.0e", tr) +
                ", min eigenvalue " + fmt("%.0e", mine));
}

void totals(Verdict& v, int divisions, int samples, double tol)
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    IntegrationOptions io;
    io.divisions = divisions;
    io.samples_per_stratum = samples;
    io.seed = 7;
    const IntegratedRate np = total_rate(s, {}, RateMode::nonperturbative, {}, io);
    const IntegratedRate pt = total_rate(s, {}, RateMode::perturbative, {}, io);
    const double W = np.estimate.value, Wp = pt.estimate.value;
    v.check(rel(W, 3.5e7) < tol, "W = " + fmt("%.3e", W) + " +- " + fmt("%.1e", np.estimate.error) + " vs 3.5e7 (" +
                                     fmt("%+.0f%%", 100 * (W / 3.5e7 - 1)) + ", tol " + fmt("%.0f%%", 100 * tol) + ")");
    v.check(rel(Wp, 2.5e7) < tol, "W_pert = " + fmt("%.3e", Wp) + " +- " + fmt("%.1e", pt.estimate.error) + " vs 2.5e7 (" +
                                      fmt("%+.0f%%", 100 * (Wp / 2.5e7 - 1)) + ")");
    v.check(rel(W / Wp, 1.4) < 0.2, "ratio " + fmt("%.3f", W / Wp) + " vs 1.4 (20%)");
    v.detail << "; theta_c in (0, 1.5 mrad), " << divisions << "^5 strata x " << samples;
}

void single_compton(Verdict& v)
{
    const double W = single_compton_total_rate(make_setup(1000, 2.5, 1.0)).total;
    v.check(rel(W, 3e13) < 0.25, fmt("%.3e", W) + " s^-1 vs 3e13 (25%)");
}

void pairs(Verdict& v)
{
    const double p = pairs_per_shot(3.5e7, 1e9, 100e-15);
    v.check(std::abs(p - 3.5e3) < 1e-9, "3.5e7 s^-1 x 1e9 x 100 fs = " + fmt("%.4g", p));
    v.check(p / 2e3 <= 2 && p / 2e3 >= 0.5, "vs about 2e3: factor " + fmt("%.2f", p / 2e3) + " (perfect overlap assumed)");
}

void figures(Verdict& v)
{
    const Setup s = make_setup(1000, 2.5, 1.0);
    AmplitudeEvaluator ev;
    const int N = 16;
    double neg = 0, refl = 0, ratio = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double pb = 2 * units::pi * i / N, pc = 2 * units::pi * j / N;
            const PhaseSpacePoint x{1 * MeV, 1e-3, pb, 1e-3, pc};
            const PhaseSpacePoint m{1 * MeV, 1e-3, 2 * units::pi - pb, 1e-3, 2 * units::pi - pc};
            for (PolarizationSelect pol : {PolarizationSelect{1, 1}, PolarizationSelect{2, 2}, PolarizationSelect{}}) {
                const RatePoint a = differential_rate(s, x, pol, {}, ev);
                const RatePoint b = differential_rate(s, m, pol, {}, ev);
                const RatePoint p = perturbative_rate(s, x, pol, {}, {}, ev);
                if (a.excluded || b.excluded || p.excluded) continue;
                neg = std::min({neg, a.value, p.value});
                if (pol.summed()) refl = std::max(refl, rel(b.value, a.value));
                if (a.value > 0 && p.value > 0) ratio = std::max({ratio, a.value / p.value, p.value / a.value});
            }
        }
    v.check(neg >= 0, "fig2 rates nonnegative");
    v.check(refl < 1e-8, "psi reflection " + fmt("%.1e", refl));
    v.check(ratio > 1.5, "max np/pert ratio " + fmt("%.3g", ratio));

    std::vector<PhaseSpacePoint> grid, tilted, mirrored;
    const int M = 12;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            const double tb = 0.05e-3 + 1.95e-3 * i / (M - 1), tc = 0.05e-3 + 1.95e-3 * j / (M - 1);
            grid.push_back({1 * MeV, tb, 0, tc, 0});
            tilted.push_back({1 * MeV, tb, 0.7, tc, 1.9});
            mirrored.push_back({1 * MeV, tb, 2 * units::pi - 0.7, tc, 2 * units::pi - 1.9});
        }
    const auto c_np = concurrence_map(s, grid, RateMode::nonperturbative, {});
    const auto c_tilt = concurrence_map(s, tilted, RateMode::nonperturbative, {});
    const auto c_mir = concurrence_map(s, mirrored, RateMode::nonperturbative, {});
    const auto c_pt = concurrence_map(s, grid, RateMode::perturbative, {});
    double dc = 0, crefl = 0;
    bool in_range = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!c_tilt[i].masked && !c_mir[i].masked)
            crefl = std::max(crefl, std::abs(c_tilt[i].concurrence - c_mir[i].concurrence));
        if (c_np[i].masked || c_pt[i].masked) continue;
        in_range = in_range && c_np[i].concurrence >= 0 && c_np[i].concurrence <= 1 && c_pt[i].concurrence >= 0 &&
                   c_pt[i].concurrence <= 1;
        dc = std::max(dc, std::abs(c_np[i].concurrence - c_pt[i].concurrence));
    }
    v.check(in_range, "fig4 C in [0,1]");
    v.check(crefl < 1e-8, "C reflection " + fmt("%.1e", crefl));
    v.check(dc > 0.1, "max |dC| " + fmt("%.3f", dc));

    scan::ScanConfig c = scan::preset("fig2");
    for (auto& a : c.scan.axes) a.points = 8;
    c.execution.workers = 1;
    const scan::ScanResult r1 = scan::run_scan(c);
    c.execution.workers = 3;
    const scan::ScanResult r3 = scan::run_scan(c);
    scan::ScanConfig t = scan::preset("fig3");
    t.scan.axes[0].points = 3;
    t.scan.single_compton = false;
    t.execution.mc_divisions = 2;
    t.execution.mc_samples = 2;
    t.execution.workers = 1;
    const scan::ScanResult t1 = scan::run_scan(t);
    t.execution.workers = 3;
    const scan::ScanResult t3 = scan::run_scan(t);
    v.check(scan::csv_text(r1) == scan::csv_text(r3) && scan::sidecar_text(r1) == scan::sidecar_text(r3) &&
                scan::csv_text(t1) == scan::csv_text(t3) && scan::sidecar_text(t1) == scan::sidecar_text(t3),
            "outputs byte-identical for 1 and 3 workers");
}

} // namespace

int main(int argc, char** argv)
{
    // --quick skips the long-running full criterion 7 variant
    const bool quick = argc > 1 && std::string(argv[1]) == "--quick";
    criterion("1", "gauge invariance", gauge);
    criterion("2", "generalized Bessel suite", bessel);
    criterion("3", "dressed mass and omega_c", dressed_mass);
    criterion("4", "phase-space Jacobian oracle", jacobian);
    criterion("5", "perturbative limit", perturbative);
    criterion("6", "concurrence suite", concurrence_suite);
    criterion("7-smoke", "double Compton totals, coarse (50%)", [](Verdict& v) { totals(v, 3, 4, 0.5); });
    if (!quick) criterion("7", "double Compton totals (25%)", [](Verdict& v) { totals(v, 4, 8, 0.25); });
    criterion("8", "single Compton rate", single_compton);
    criterion("9", "pairs per shot", pairs);
    criterion("10", "Fig. 2 / Fig. 4 properties", figures);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
