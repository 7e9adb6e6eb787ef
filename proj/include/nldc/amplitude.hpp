#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nldc/genbessel.hpp"
#include "nldc/kinematics.hpp"

namespace nldc {

struct AmplitudeOptions {
    /// Cascade resonances closer than this (relative to m_*^2) are rejected.
    double resonance_threshold = 1e-3;
    /// Constant imaginary part added to every propagator denominator, units m^2.
    double width = 0.0;
    /// Relative size of the outermost s terms at which the s-sum is accepted.
    double s_tolerance = 1e-9;
    /// Largest |s| the adaptive s-sum may reach.
    int s_max = 600;
    /// The chiral representation keeps the ultrarelativistic spinors free of
    /// large/small component cancellations.
    const DiracRep* rep = &DiracRep::weyl();
    SpinAxis spin_axis = SpinAxis::z;
};

/// An intermediate state came within the resonance threshold of the dressed
/// mass shell while its vertex functions were non-negligible.
class ResonanceError : public std::runtime_error {
public:
    ResonanceError(char channel, int s, double distance);
    char channel;    ///< 'b' when photon b is emitted first
    int s;
    double distance; ///< |p^2 - m_*^2| in units of m^2
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dressed vertex M^N_{jkl} with incoming p_j, outgoing p_k and photon
/// polarization eps (used as given; emission vertices take eps*).
DiracMatrix vertex_M(int N, const FourVector& p_j, const FourVector& p_k, const CFourVector& eps,
                     const LaserConfig& laser, const DiracRep& rep = DiracRep::dirac());

/// Same, with the Bessel functions supplied by the caller.
DiracMatrix vertex_M(int N, const BesselBatch& bessel, const FourVector& p_j, const FourVector& p_k,
                     const CFourVector& eps, const LaserConfig& laser, const DiracRep& rep = DiracRep::dirac());

struct DressedPropagator {
    DiracMatrix numerator; ///< f-slash + m, f = p + e^2 a^2 kappa / (4 kappa.p)
    double denominator;    ///< p^2 - m_*^2
};

/// Throws ResonanceError when |p^2 - m_*^2| < threshold * m_*^2.
DressedPropagator dressed_propagator(const FourVector& p, const LaserConfig& laser, double threshold = 1e-3,
                                     const DiracRep& rep = DiracRep::dirac());

/// eps + Lambda k
CFourVector gauge_shift(const CFourVector& eps, const FourVector& k, cplx lambda);

/// Reduced amplitudes for all spin and polarization labels at one n: the
/// spinor matrix element of both emission orderings summed over s, times
/// e^2 m / sqrt(omega_b omega_c Q_i Q_f). The delta function and volume
/// factors are not included.
struct AmplitudeSet {
    int n = 0;
    std::array<cplx, 16> value{};
    int s_lo = 0, s_hi = -1; ///< s range summed (union over channels)
    double prefactor = 0;

    static constexpr int index(int ri, int rf, int lb, int lc)
    {
        return ((ri - 1) * 2 + (rf - 1)) * 4 + (lb - 1) * 2 + (lc - 1);
    }
    cplx operator()(int ri, int rf, int lb, int lc) const { return value[std::size_t(index(ri, rf, lb, lc))]; }
    /// sum over r_i, r_f of |M|^2 at fixed polarization slots.
    double spin_summed_square(int lb, int lc) const;
};

using PolarizationPair = std::array<CFourVector, 2>;

/// Per-worker evaluator. Keeps the n-independent Bessel batch of the first
/// vertex of the b-first ordering between calls with the same initial
/// electron and photon b.
class AmplitudeEvaluator {
public:
    explicit AmplitudeEvaluator(AmplitudeOptions opts = {}) : opts_(opts) {}

    const AmplitudeOptions& options() const { return opts_; }

    /// Polarization slots default to the real basis vectors eps^1, eps^2.
    AmplitudeSet evaluate(const EmissionPoint& ep);
    AmplitudeSet evaluate(const EmissionPoint& ep, const PolarizationPair& pol_b, const PolarizationPair& pol_c);

private:
    struct CachedBatch {
        BesselArgs args;
        int lo = 0, hi = -1;
        BesselBatch batch;
    };
    const BesselBatch& batch(CachedBatch& slot, const BesselArgs& args, int lo, int hi);

    AmplitudeOptions opts_;
    CachedBatch first_b_, second_b_, first_c_, second_c_;
};

/// Single (r_i, r_f) amplitude for explicit polarization vectors.
cplx reduced_amplitude(const EmissionPoint& ep, int r_i, int r_f, const CFourVector& eps_b,
                       const CFourVector& eps_c, const AmplitudeOptions& opts = {});

/// One-photon emission: photon k from harmonic n, q_i + n kappa = q_f + k.
struct SingleEmissionPoint {
    LaserConfig laser;
    DressedElectron initial;
    DressedElectron final;
    int n = 0;
    PhotonMode k;
};

std::optional<SingleEmissionPoint> make_single_emission_point(const LaserConfig& laser,
                                                              const DressedElectron& initial, int n,
                                                              double theta, double psi);

/// u_f-bar M^n_{ifk}(eps*) u_i for all spins and both basis polarizations,
/// times e m / sqrt(omega Q_i Q_f). Index ((ri-1)*2 + (rf-1))*2 + (lambda-1).
std::array<cplx, 8> single_vertex_amplitudes(const SingleEmissionPoint& sp, const AmplitudeOptions& opts = {});

} // namespace nldc
