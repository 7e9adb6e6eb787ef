#include "nldc/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nldc/units.hpp"

namespace nldc {

namespace {

std::string resonance_message(char channel, int s, double distance)
{
    std::ostringstream os;
    os << "intermediate state of channel " << channel << " within resonance threshold at s = " << s
       << " (|p^2 - m*^2| = " << distance << ")";
    return os.str();
}

// M^N_{jkl} = sum_h A_{h,N} g[h].
struct VertexPieces {
    DiracMatrix g[3];
};

VertexPieces vertex_pieces(const FourVector& p_j, const FourVector& p_k, const CFourVector& eps,
                           const LaserConfig& laser, const DiracRep& rep)
{
    const double e = units::electron_charge;
    const double kpj = minkowski_dot(laser.kappa, p_j);
    const double kpk = minkowski_dot(laser.kappa, p_k);
    if (kpj == 0.0 || kpk == 0.0) throw std::invalid_argument("vertex_M: kappa.p vanishes");
    const DiracMatrix ks = rep.slash(laser.kappa);
    const DiracMatrix as = rep.slash(laser.a);
    const DiracMatrix es = rep.slash(eps);
    VertexPieces v;
    v.g[0] = es;
    v.g[1] = es * (ks * as) * cplx{e / (2.0 * kpj)} + (as * ks) * es * cplx{e / (2.0 * kpk)};
    v.g[2] = ks * (-laser.e2a2() * minkowski_dot(eps, laser.kappa) / (2.0 * kpj * kpk));
    return v;
}

Spinor4 row_times(const Spinor4& row, const DiracMatrix& m)
{
    Spinor4 r{};
    for (int j = 0; j < 4; ++j) r[j] = row[0] * m(0, j) + row[1] * m(1, j) + row[2] * m(2, j) + row[3] * m(3, j);
    return r;
}

bool same_args(const BesselArgs& a, const BesselArgs& b) { return a.alpha == b.alpha && a.beta == b.beta; }

} // namespace

ResonanceError::ResonanceError(char channel_, int s_, double distance_)
    : std::runtime_error(resonance_message(channel_, s_, distance_)), channel(channel_), s(s_), distance(distance_)
{
}

DiracMatrix vertex_M(int N, const BesselBatch& bessel, const FourVector& p_j, const FourVector& p_k,
                     const CFourVector& eps, const LaserConfig& laser, const DiracRep& rep)
{
    const VertexPieces v = vertex_pieces(p_j, p_k, eps, laser, rep);
    return v.g[0] * cplx{bessel(0, N)} + v.g[1] * cplx{bessel(1, N)} + v.g[2] * cplx{bessel(2, N)};
}

DiracMatrix vertex_M(int N, const FourVector& p_j, const FourVector& p_k, const CFourVector& eps,
                     const LaserConfig& laser, const DiracRep& rep)
{
    const BesselArgs args = bessel_args(vertex_args(p_j, laser), vertex_args(p_k, laser));
    return vertex_M(N, genbessel_batch(args, N, N), p_j, p_k, eps, laser, rep);
}

DressedPropagator dressed_propagator(const FourVector& p, const LaserConfig& laser, double threshold,
                                     const DiracRep& rep)
{
    const double kp = minkowski_dot(laser.kappa, p);
    if (kp == 0.0) throw std::invalid_argument("dressed_propagator: kappa.p vanishes");
    const FourVector f = p + laser.kappa * (laser.e2a2() / (4.0 * kp));
    DressedPropagator prop{rep.slash(f) + DiracMatrix::identity(), minkowski_dot(p, p) - laser.m_star_squared()};
    if (std::abs(prop.denominator) < threshold * laser.m_star_squared())
        throw ResonanceError('?', 0, std::abs(prop.denominator));
    return prop;
}

CFourVector gauge_shift(const CFourVector& eps, const FourVector& k, cplx lambda)
{
    return eps + CFourVector(k) * lambda;
}

double AmplitudeSet::spin_summed_square(int lb, int lc) const
{
    double sum = 0;
    for (int ri = 1; ri <= 2; ++ri)
        for (int rf = 1; rf <= 2; ++rf) sum += std::norm((*this)(ri, rf, lb, lc));
    return sum;
}

const BesselBatch& AmplitudeEvaluator::batch(CachedBatch& slot, const BesselArgs& args, int lo, int hi)
{
    if (!(same_args(slot.args, args) && slot.lo <= lo && slot.hi >= hi)) {
        slot.args = args;
        slot.lo = lo;
        slot.hi = hi;
        slot.batch = genbessel_batch(args, lo, hi);
    }
    return slot.batch;
}

AmplitudeSet AmplitudeEvaluator::evaluate(const EmissionPoint& ep)
{
    return evaluate(ep, {CFourVector(ep.b.eps1), CFourVector(ep.b.eps2)},
                    {CFourVector(ep.c.eps1), CFourVector(ep.c.eps2)});
}

AmplitudeSet AmplitudeEvaluator::evaluate(const EmissionPoint& ep, const PolarizationPair& pol_b,
                                          const PolarizationPair& pol_c)
{
    const DiracRep& rep = *opts_.rep;
    const LaserConfig& laser = ep.laser;
    const int n = ep.n;

    Spinor4 ui[2], ubar_f[2];
    for (int r = 0; r < 2; ++r) {
        ui[r] = free_spinor(ep.initial.p, r + 1, rep, opts_.spin_axis).u;
        ubar_f[r] = dirac_adjoint(free_spinor(ep.final.p, r + 1, rep, opts_.spin_axis).u, rep);
    }
    // Emission vertices carry eps*.
    const CFourVector eb[2] = {pol_b[0].conj(), pol_b[1].conj()};
    const CFourVector ec[2] = {pol_c[0].conj(), pol_c[1].conj()};

    AmplitudeSet out;
    out.n = n;
    out.s_lo = 0;
    out.s_hi = -1;

    const VertexArgs vi = vertex_args(ep.initial.p, laser);
    const VertexArgs vf = vertex_args(ep.final.p, laser);
    const double ms2 = laser.m_star_squared();

    // One emission ordering: photon X at the first vertex, photon Y at the second.
    auto channel = [&](char name, const FourVector& kX, const CFourVector* epsX, const CFourVector* epsY,
                       CachedBatch& slot1, CachedBatch& slot2) {
        const FourVector pX = ep.initial.q - kX;
        const VertexArgs vX = vertex_args(pX, laser);
        const BesselArgs args1 = bessel_args(vi, vX);
        const BesselArgs args2 = bessel_args(vX, vf);

        VertexPieces first[2], second[2];
        for (int l = 0; l < 2; ++l) {
            first[l] = vertex_pieces(ep.initial.p, pX, epsX[l], laser, rep);
            second[l] = vertex_pieces(pX, ep.final.p, epsY[l], laser, rep);
        }
        const FourVector f0 = pX + laser.kappa * (laser.e2a2() / (4.0 * minkowski_dot(laser.kappa, pX)));
        const DiracMatrix prop[2] = {rep.slash(f0) + DiracMatrix::identity(), rep.slash(laser.kappa)};

        // T[h2][h1][part][combo], combo = ((ri*2 + rf)*2 + lX)*2 + lY.
        std::array<std::array<std::array<std::array<cplx, 16>, 2>, 3>, 3> T;
        Spinor4 pa[2][3][2][2]; // [part][h1][lX][ri]
        for (int part = 0; part < 2; ++part)
            for (int h = 0; h < 3; ++h)
                for (int l = 0; l < 2; ++l)
                    for (int r = 0; r < 2; ++r) pa[part][h][l][r] = prop[part] * (first[l].g[h] * ui[r]);
        Spinor4 rows[3][2][2]; // [h2][lY][rf]
        for (int h = 0; h < 3; ++h)
            for (int l = 0; l < 2; ++l)
                for (int r = 0; r < 2; ++r) rows[h][l][r] = row_times(ubar_f[r], second[l].g[h]);
        double tnorm[3][3][2] = {};
        for (int h2 = 0; h2 < 3; ++h2)
            for (int h1 = 0; h1 < 3; ++h1)
                for (int part = 0; part < 2; ++part) {
                    auto& t = T[h2][h1][part];
                    for (int ri = 0; ri < 2; ++ri)
                        for (int rf = 0; rf < 2; ++rf)
                            for (int lX = 0; lX < 2; ++lX)
                                for (int lY = 0; lY < 2; ++lY) {
                                    const cplx v = contract(rows[h2][lY][rf], pa[part][h1][lX][ri]);
                                    t[std::size_t(((ri * 2 + rf) * 2 + lX) * 2 + lY)] = v;
                                    tnorm[h2][h1][part] = std::max(tnorm[h2][h1][part], std::abs(v));
                                }
                }

        int k1 = bessel_order_cutoff(args1), k2 = bessel_order_cutoff(args2);
        for (;;) {
            const int lo = std::max(-k1, n - k2), hi = std::min(k1, n + k2);
            if (lo > hi) return;
            const BesselBatch& b1 = batch(slot1, args1, -k1, k1);
            const BesselBatch& b2 = batch(slot2, args2, -k2, k2);

            cplx W[3][3][2] = {};
            auto edge_size = [&](int s, cplx inv) {
                double m = 0;
                for (int h2 = 0; h2 < 3; ++h2)
                    for (int h1 = 0; h1 < 3; ++h1) {
                        const double c = std::abs(b2(h2, n - s) * b1(h1, s) * inv);
                        m += c * (tnorm[h2][h1][0] + std::abs(double(s)) * tnorm[h2][h1][1]);
                    }
                return m;
            };
            double edge = 0;
            for (int s = lo; s <= hi; ++s) {
                const double d = propagator_offshell(ep.initial, kX, s, laser);
                if (s >= 1 && s <= n - 1 && std::abs(d) < opts_.resonance_threshold * ms2
                    && b1.magnitude(s) > 1e-15 && b2.magnitude(n - s) > 1e-15)
                    throw ResonanceError(name, s, std::abs(d));
                const cplx inv = 1.0 / cplx{d, opts_.width};
                for (int h2 = 0; h2 < 3; ++h2) {
                    const double a2 = b2(h2, n - s);
                    for (int h1 = 0; h1 < 3; ++h1) {
                        const cplx c = a2 * b1(h1, s) * inv;
                        W[h2][h1][0] += c;
                        W[h2][h1][1] += c * double(s);
                    }
                }
                if (s < lo + 5 || s > hi - 5) edge = std::max(edge, edge_size(s, inv));
            }

            std::array<cplx, 16> amp{};
            for (int h2 = 0; h2 < 3; ++h2)
                for (int h1 = 0; h1 < 3; ++h1)
                    for (int part = 0; part < 2; ++part) {
                        const cplx w = W[h2][h1][part];
                        const auto& t = T[h2][h1][part];
                        for (std::size_t i = 0; i < 16; ++i) amp[i] += w * t[i];
                    }
            double total = 0;
            for (const auto& v : amp) total = std::max(total, std::abs(v));

            if (edge <= opts_.s_tolerance * total) {
                for (int ri = 0; ri < 2; ++ri)
                    for (int rf = 0; rf < 2; ++rf)
                        for (int lX = 0; lX < 2; ++lX)
                            for (int lY = 0; lY < 2; ++lY) {
                                const int lb = name == 'b' ? lX : lY;
                                const int lc = name == 'b' ? lY : lX;
                                out.value[std::size_t(AmplitudeSet::index(ri + 1, rf + 1, lb + 1, lc + 1))] +=
                                    amp[std::size_t(((ri * 2 + rf) * 2 + lX) * 2 + lY)];
                            }
                if (out.s_lo > out.s_hi) {
                    out.s_lo = lo;
                    out.s_hi = hi;
                } else {
                    out.s_lo = std::min(out.s_lo, lo);
                    out.s_hi = std::max(out.s_hi, hi);
                }
                return;
            }
            k1 += 20;
            k2 += 20;
            if (std::max(k1, k2) > opts_.s_max) {
                std::ostringstream os;
                os << "s-sum of channel " << name << " not converged at |s| <= " << opts_.s_max
                   << " (edge/total = " << edge / total << ")";
                throw ConvergenceError(os.str());
            }
        }
    };

    channel('b', ep.b.k, eb, ec, first_b_, second_b_);
    channel('c', ep.c.k, ec, eb, first_c_, second_c_);

    const double e2 = units::electron_charge * units::electron_charge;
    out.prefactor = e2 / std::sqrt(ep.b.omega * ep.c.omega * ep.initial.Q() * ep.final.Q());
    for (auto& v : out.value) v *= out.prefactor;
    return out;
}

cplx reduced_amplitude(const EmissionPoint& ep, int r_i, int r_f, const CFourVector& eps_b,
                       const CFourVector& eps_c, const AmplitudeOptions& opts)
{
    AmplitudeEvaluator ev(opts);
    return ev.evaluate(ep, {eps_b, eps_b}, {eps_c, eps_c})(r_i, r_f, 1, 1);
}

std::optional<SingleEmissionPoint> make_single_emission_point(const LaserConfig& laser,
                                                              const DressedElectron& initial, int n,
                                                              double theta, double psi)
{
    const FourVector c_hat = null_direction(theta, psi);
    const FourVector total = initial.q + laser.kappa * double(n);
    const double numerator = n * minkowski_dot(laser.kappa, initial.q);
    const double denominator = minkowski_dot(c_hat, total);
    if (!(numerator > 0) || !(denominator > 0)) return std::nullopt;
    SingleEmissionPoint sp;
    sp.laser = laser;
    sp.initial = initial;
    sp.n = n;
    sp.k = photon_mode(numerator / denominator, theta, psi);
    FourVector qf = total - sp.k.k;
    if (!(qf.plus > 0)) return std::nullopt;
    qf.minus = (laser.m_star_squared() + qf.x * qf.x + qf.y * qf.y) / qf.plus;
    sp.final = undress(qf, laser);
    return sp;
}

std::array<cplx, 8> single_vertex_amplitudes(const SingleEmissionPoint& sp, const AmplitudeOptions& opts)
{
    const DiracRep& rep = *opts.rep;
    const BesselArgs args = bessel_args(vertex_args(sp.initial.p, sp.laser), vertex_args(sp.final.p, sp.laser));
    const BesselBatch bessel = genbessel_batch(args, sp.n, sp.n);
    const double pref = std::abs(units::electron_charge) / std::sqrt(sp.k.omega * sp.initial.Q() * sp.final.Q());
    std::array<cplx, 8> out{};
    for (int l = 0; l < 2; ++l) {
        const DiracMatrix m =
            vertex_M(sp.n, bessel, sp.initial.p, sp.final.p, CFourVector(sp.k.basis(l + 1)).conj(), sp.laser, rep);
        for (int ri = 0; ri < 2; ++ri) {
            const Spinor ui = free_spinor(sp.initial.p, ri + 1, rep, opts.spin_axis);
            for (int rf = 0; rf < 2; ++rf) {
                const Spinor uf = free_spinor(sp.final.p, rf + 1, rep, opts.spin_axis);
                out[std::size_t((ri * 2 + rf) * 2 + l)] = pref * bilinear(uf, m, ui, rep);
            }
        }
    }
    return out;
}

} // namespace nldc
