#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nldc/amplitude.hpp"
#include "nldc/units.hpp"
#include "oracles/tree_double_compton.hpp"

using namespace nldc;
using testutil::rel_diff;

namespace {

const double MeV = units::MeV_to_natural(1.0);

double max_diff(const DiracMatrix& a, const DiracMatrix& b) { return (a - b).max_abs(); }

// Random open, non-resonant emission points at the Fig. 2 electron and laser.
struct PointSource {
    std::mt19937_64 rng;
    LaserConfig laser;
    DressedElectron initial;

    explicit PointSource(std::uint64_t seed, double xi = 1.0)
        : rng(seed), laser(laser_from_intensity(2.5, xi)), initial(dress(head_on_electron(1000), laser))
    {
    }

    EmissionPoint next(int n_max = 20)
    {
        std::uniform_real_distribution<double> u(0, 1);
        for (;;) {
            const int n = 1 + int(u(rng) * n_max);
            const auto ep = make_emission_point(laser, initial, n, MeV * std::exp(std::log(1e-3) * u(rng)),
                                                1.5e-3 * u(rng), 2 * units::pi * u(rng), 1.5e-3 * u(rng),
                                                2 * units::pi * u(rng));
            if (!ep) continue;
            try {
                AmplitudeEvaluator().evaluate(*ep);
            } catch (const ResonanceError&) {
                continue;
            }
            return *ep;
        }
    }
};

double set_scale(const AmplitudeSet& a)
{
    double m = 0;
    for (const auto& v : a.value) m = std::max(m, std::norm(v));
    return m;
}

} // namespace

TEST_CASE("vertex_M: free limit, transverse polarization and conjugation")
{
    const LaserConfig off = laser_from_intensity(2.5, 0.0);
    const FourVector p1 = testutil::on_shell(0.1, -0.2, 900);
    const FourVector p2 = testutil::on_shell(0.3, 0.1, 700);
    const PhotonMode mode = photon_mode(2.0, 0.8e-3, 1.0);
    const CFourVector eps(mode.eps1);
    for (const DiracRep* rep : {&DiracRep::dirac(), &DiracRep::weyl()}) {
        CHECK(max_diff(vertex_M(0, p1, p2, eps, off, *rep), rep->slash(eps)) < 1e-15);
        for (int N : {-2, -1, 1, 3}) CHECK(vertex_M(N, p1, p2, eps, off, *rep).max_abs() < 1e-15);
    }

    const LaserConfig l = laser_from_intensity(2.5, 1.0);
    const double e = units::electron_charge;
    const BesselArgs args = bessel_args(vertex_args(p1, l), vertex_args(p2, l));
    const BesselBatch bb = genbessel_batch(args, -10, 10);
    const DiracRep& rep = DiracRep::dirac();
    const PhotonMode axial = photon_mode(2.0, 0.0, 0.4);
    for (int lam = 1; lam <= 2; ++lam) {
        const CFourVector el(axial.basis(lam));
        CHECK(std::abs(minkowski_dot(el, l.kappa)) == 0.0);
        for (int N = -3; N <= 3; ++N) {
            const DiracMatrix two_terms =
                rep.slash(el) * cplx{bb(0, N)}
                + (rep.slash(el) * rep.slash(l.kappa) * rep.slash(l.a) * cplx{e / (2 * minkowski_dot(l.kappa, p1))}
                   + rep.slash(l.a) * rep.slash(l.kappa) * rep.slash(el) * cplx{e / (2 * minkowski_dot(l.kappa, p2))})
                      * cplx{bb(1, N)};
            const DiracMatrix m = vertex_M(N, p1, p2, el, l, rep);
            CHECK(max_diff(m, two_terms) <= 1e-13 * std::max(1.0, m.max_abs()));
        }
    }

    // gamma0 M(N, j, k, eps)^dagger gamma0 = M(-N, k, j, eps*)
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
        const FourVector pj = testutil::on_shell(u(rng), u(rng), 500 + 400 * u(rng));
        const FourVector pk = testutil::on_shell(u(rng), u(rng), 500 + 400 * u(rng));
        const CFourVector ec{cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}, cplx{u(rng), u(rng)}};
        for (const DiracRep* r : {&DiracRep::dirac(), &DiracRep::weyl()}) {
            for (int N : {-4, 0, 1, 5}) {
                const DiracMatrix m = vertex_M(N, pj, pk, ec, l, *r);
                const DiracMatrix bar = r->gamma(0) * m.adjoint() * r->gamma(0);
                const DiracMatrix swapped = vertex_M(-N, pk, pj, ec.conj(), l, *r);
                CHECK(max_diff(bar, swapped) <= 1e-12 * std::max(1e-300, m.max_abs()));
                const Spinor a = free_spinor(pj, 1, *r), b = free_spinor(pk, 2, *r);
                CHECK(std::abs(bilinear(b, m, a, *r) - std::conj(bilinear(a, swapped, b, *r)))
                      <= 1e-12 * std::max(1e-300, m.max_abs()) * 1e3);
            }
        }
    }
    CHECK_THROWS_AS(vertex_M(0, FourVector::light_cone(0.0, 2.0, 0, 0), p2, eps, l), std::invalid_argument);
}

TEST_CASE("dressed propagator")
{
    const FourVector p = FourVector::from_txyz(300, 0.2, -0.1, 299.5);
    const LaserConfig off = laser_from_intensity(2.5, 0.0);
    const DressedPropagator free = dressed_propagator(p, off);
    CHECK(max_diff(free.numerator, DiracRep::dirac().slash(p) + DiracMatrix::identity()) < 1e-12);
    CHECK(free.denominator == doctest::Approx(minkowski_dot(p, p) - 1.0).epsilon(1e-14));

    for (double xi : {0.1, 1.0, 5.0}) {
        const LaserConfig l = laser_from_intensity(2.5, xi);
        for (const DiracRep* rep : {&DiracRep::dirac(), &DiracRep::weyl()}) {
            const DressedPropagator d = dressed_propagator(p, l, 1e-3, *rep);
            const DiracMatrix fs = d.numerator - DiracMatrix::identity();
            // f.f from the Clifford square and from the closed form p^2 - m_*^2 + m^2
            const cplx ff_clifford = (fs * fs).trace() / 4.0;
            const double ff_closed = minkowski_dot(p, p) - l.m_star_squared() + 1.0;
            CHECK(std::abs(ff_clifford - ff_closed) <= 1e-12 * std::max(1.0, std::abs(ff_closed)) * 1e4);
            CHECK(rel_diff(d.denominator, minkowski_dot(p, p) - l.m_star_squared()) < 1e-12);
        }
        const DressedElectron on = dress(testutil::on_shell(0.3, 0.0, 400), l);
        CHECK_THROWS_AS(dressed_propagator(on.q, l), ResonanceError);
    }
}

TEST_CASE("gauge_shift helper")
{
    const PhotonMode m = photon_mode(1.3, 0.7e-3, 0.5);
    const CFourVector e1(m.eps1);
    const CFourVector same = gauge_shift(e1, m.k, 0.0);
    for (int mu = 0; mu < 4; ++mu) CHECK(same[mu] == e1[mu]);
    const CFourVector s1 = gauge_shift(e1, m.k, 1.0);
    const cplx spatial = s1.x * m.k.x + s1.y * m.k.y + s1.z * m.k.z();
    CHECK(std::abs(spatial) > 1.0);
    const cplx l1{0.3, -0.2}, l2{-1.1, 0.7};
    const CFourVector twice = gauge_shift(gauge_shift(e1, m.k, l1), m.k, l2);
    const CFourVector once = gauge_shift(e1, m.k, l1 + l2);
    for (int mu = 0; mu < 4; ++mu) CHECK(std::abs(twice[mu] - once[mu]) < 1e-15);
}

TEST_CASE("gauge invariance at random kinematics")
{
    PointSource src(11);
    std::uniform_real_distribution<double> u(-1, 1);
    double worst = 0;
    for (int t = 0; t < 120; ++t) {
        const EmissionPoint ep = src.next();
        AmplitudeEvaluator ev;
        const PolarizationPair pb{CFourVector(ep.b.eps1), CFourVector(ep.b.eps2)};
        const PolarizationPair pc{CFourVector(ep.c.eps1), CFourVector(ep.c.eps2)};
        const AmplitudeSet a = ev.evaluate(ep, pb, pc);
        const cplx lb{u(src.rng) / ep.b.omega, u(src.rng) / ep.b.omega};
        const cplx lc{u(src.rng) / ep.c.omega, u(src.rng) / ep.c.omega};
        const PolarizationPair gb{gauge_shift(pb[0], ep.b.k, lb), gauge_shift(pb[1], ep.b.k, lb)};
        const PolarizationPair gc{gauge_shift(pc[0], ep.c.k, lc), gauge_shift(pc[1], ep.c.k, lc)};
        const AmplitudeSet ab = ev.evaluate(ep, gb, pc);
        const AmplitudeSet ac = ev.evaluate(ep, pb, gc);
        for (int x = 1; x <= 2; ++x)
            for (int y = 1; y <= 2; ++y) {
                const double ref = a.spin_summed_square(x, y);
                const double scale = std::max(ref, 1e-6 * set_scale(a));
                worst = std::max(worst, std::abs(ab.spin_summed_square(x, y) - ref) / scale);
                worst = std::max(worst, std::abs(ac.spin_summed_square(x, y) - ref) / scale);
            }
    }
    MESSAGE("largest relative gauge defect " << worst);
    CHECK(worst < 1e-8);
}

TEST_CASE("Bose symmetry and s_max doubling")
{
    PointSource src(12);
    for (int t = 0; t < 40; ++t) {
        const EmissionPoint ep = src.next();
        EmissionPoint swapped = ep;
        std::swap(swapped.b, swapped.c);
        const AmplitudeSet a = AmplitudeEvaluator().evaluate(ep);
        const AmplitudeSet s = AmplitudeEvaluator().evaluate(swapped);
        const double scale = std::sqrt(set_scale(a));
        for (int ri = 1; ri <= 2; ++ri)
            for (int rf = 1; rf <= 2; ++rf)
                for (int x = 1; x <= 2; ++x)
                    for (int y = 1; y <= 2; ++y) CHECK(std::abs(a(ri, rf, x, y) - s(ri, rf, y, x)) <= 1e-10 * scale);

        AmplitudeOptions wide;
        wide.s_max = 1200;
        const AmplitudeSet w = AmplitudeEvaluator(wide).evaluate(ep);
        for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(w.value[i] - a.value[i]) <= 1e-9 * scale);
        for (int x = 1; x <= 2; ++x)
            for (int y = 1; y <= 2; ++y) CHECK(a.spin_summed_square(x, y) >= 0);
    }
}

TEST_CASE("representation and spin-axis independence")
{
    PointSource src(13);
    for (int t = 0; t < 25; ++t) {
        const EmissionPoint ep = src.next();
        const AmplitudeSet ref = AmplitudeEvaluator().evaluate(ep);
        AmplitudeOptions wo, xo;
        wo.rep = &DiracRep::dirac();
        xo.spin_axis = SpinAxis::x;
        const AmplitudeSet w = AmplitudeEvaluator(wo).evaluate(ep);
        const AmplitudeSet x = AmplitudeEvaluator(xo).evaluate(ep);
        double total = 0;
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) total += ref.spin_summed_square(a, b);
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                CHECK(std::abs(w.spin_summed_square(a, b) - ref.spin_summed_square(a, b)) <= 1e-8 * total);
                CHECK(std::abs(x.spin_summed_square(a, b) - ref.spin_summed_square(a, b)) <= 1e-8 * total);
            }
    }
}

TEST_CASE("weak-field limit: xi^2 scaling and tree-level agreement")
{
    auto square = [](double xi) {
        const LaserConfig l = laser_from_intensity(2.5, xi);
        const auto ep = make_emission_point(l, 1000.0, 1, 0.3 * MeV, 0.7e-3, 0.4, 1.1e-3, 2.0);
        REQUIRE(ep);
        const AmplitudeSet a = AmplitudeEvaluator().evaluate(*ep);
        return a.spin_summed_square(1, 1) + a.spin_summed_square(1, 2) + a.spin_summed_square(2, 1)
               + a.spin_summed_square(2, 2);
    };
    CHECK(rel_diff(square(1e-3) / square(1e-4), 100.0) < 5e-3);
    // A / xi is Cauchy as xi -> 0
    const double r3 = std::sqrt(square(1e-3)) / 1e-3, r4 = std::sqrt(square(1e-4)) / 1e-4,
                 r5 = std::sqrt(square(1e-5)) / 1e-5;
    CHECK(std::abs(r4 - r5) < std::abs(r3 - r4));
    CHECK(rel_diff(r4, r5) < 1e-4);

    // n = 1 against the six lowest-order Feynman diagrams with the laser as an
    // absorbed photon of polarization (e/2) a.
    const double xi = 1e-4;
    const LaserConfig l = laser_from_intensity(2.5, xi);
    const auto ep = make_emission_point(l, 1000.0, 1, 0.3 * MeV, 0.7e-3, 0.4, 1.1e-3, 2.0);
    REQUIRE(ep);
    const DiracRep& rep = DiracRep::weyl();
    AmplitudeOptions o;
    o.rep = &rep;
    const AmplitudeSet a = AmplitudeEvaluator(o).evaluate(*ep);
    const double e = units::electron_charge;
    for (int ri = 1; ri <= 2; ++ri)
        for (int rf = 1; rf <= 2; ++rf)
            for (int lb = 1; lb <= 2; ++lb)
                for (int lc = 1; lc <= 2; ++lc) {
                    const Spinor4 ui = free_spinor(ep->initial.p, ri, rep).u;
                    const Spinor4 uf = dirac_adjoint(free_spinor(ep->final.p, rf, rep).u, rep);
                    const std::array<oracle::TreePhoton, 3> ph{{
                        {l.kappa, CFourVector(l.a) * cplx{e / 2}, +1},
                        {ep->b.k, CFourVector(ep->b.basis(lb)).conj(), -1},
                        {ep->c.k, CFourVector(ep->c.basis(lc)).conj(), -1},
                    }};
                    const cplx tree = oracle::tree_double_compton(uf, ui, ep->initial.p, ph, rep) * a.prefactor;
                    CHECK(std::abs(a(ri, rf, lb, lc) / tree - 1.0) < 1e-3);
                }
}
