#pragma once

#include <vector>

#include "nldc/kinematics.hpp"

namespace nldc {

/// Argument pair (alpha_j - alpha_k, beta_j - beta_k) of a vertex's
/// generalized Bessel functions.
struct BesselArgs {
    double alpha = 0;
    double beta = 0;
};

/// Single-particle arguments alpha_j = e a.p_j / (kappa.p_j) and
/// beta_j = e^2 a^2 / (8 kappa.p_j).
struct VertexArgs {
    double alpha = 0;
    double beta = 0;
};

/// Throws std::invalid_argument when kappa.p_j == 0.
VertexArgs vertex_args(const FourVector& p_j, const LaserConfig& laser);

/// Arguments of A^{jk}: incoming j, outgoing k.
inline BesselArgs bessel_args(const VertexArgs& j, const VertexArgs& k)
{
    return {j.alpha - k.alpha, j.beta - k.beta};
}

/// Order beyond which |A_{h,N}| is below 1e-15.
int bessel_order_cutoff(const BesselArgs& args);

/// A_{h,N}(alpha, beta) = (1/2pi) int cos^h(t) exp(iNt - i alpha sin t + i beta sin 2t) dt
/// for h in {0, 1, 2} and N in [n_min, n_max]. The values are real for real
/// arguments and stored as such.
class BesselBatch {
public:
    BesselBatch() = default;

    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    int samples() const { return samples_; }
    double max_imag_residue() const { return max_imag_; }
    const BesselArgs& args() const { return args_; }

    double operator()(int h, int N) const { return v_[h][std::size_t(N - n_min_)]; }
    /// |A_{h,N}| maximized over h.
    double magnitude(int N) const;

private:
    friend BesselBatch genbessel_batch(const BesselArgs&, int, int, int);

    BesselArgs args_;
    int n_min_ = 0, n_max_ = -1;
    int samples_ = 0;
    double max_imag_ = 0;
    std::vector<double> v_[3];
};

/// Evaluates all orders from one set of integrand samples: uniform periodic
/// trapezoidal rule, all N extracted with a single inverse DFT. min_samples
/// raises the sample count above the automatic choice (used for refinement
/// checks).
BesselBatch genbessel_batch(const BesselArgs& args, int n_min, int n_max, int min_samples = 0);

/// Trapezoidal sample count used for the given arguments and largest |N|.
int genbessel_sample_count(const BesselArgs& args, int max_abs_order);

} // namespace nldc
