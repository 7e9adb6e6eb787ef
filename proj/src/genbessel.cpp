#include "nldc/genbessel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "nldc/units.hpp"

namespace nldc {

VertexArgs vertex_args(const FourVector& p_j, const LaserConfig& laser)
{
    const double kp = minkowski_dot(laser.kappa, p_j);
    if (kp == 0.0) throw std::invalid_argument("vertex_args: kappa.p vanishes");
    return {units::electron_charge * minkowski_dot(laser.a, p_j) / kp, laser.e2a2() / (8.0 * kp)};
}

int bessel_order_cutoff(const BesselArgs& args)
{
    // Beyond the classical turning point |alpha| + 2|beta| the coefficients
    // decay like an Airy tail whose width grows as the cube root of the argument.
    const double reach = std::abs(args.alpha) + 2.0 * std::abs(args.beta);
    return int(std::ceil(reach + 40.0 + 12.0 * std::cbrt(reach)));
}

int genbessel_sample_count(const BesselArgs& args, int max_abs_order)
{
    const double need = 4.0 * (max_abs_order + std::abs(args.alpha) + 2.0 * std::abs(args.beta)) + 64.0;
    int m = 64;
    while (m < need) m *= 2;
    return m;
}

namespace {

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

struct Transform {
    fftw_plan plan = nullptr;
    std::vector<double> sin1, sin2;
};

// Plans and sine tables per sample count. fftw planning is not thread safe;
// execution on caller-provided arrays is.
const Transform& transform_for(int m)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Transform>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[m];
    if (!slot) {
        auto t = std::make_unique<Transform>();
        std::vector<std::complex<double>> in(static_cast<std::size_t>(m)), out(static_cast<std::size_t>(m));
        t->plan = fftw_plan_dft_1d(m, as_fftw(in.data()), as_fftw(out.data()), FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
        t->sin1.resize(std::size_t(m));
        t->sin2.resize(std::size_t(m));
        for (int i = 0; i < m; ++i) {
            const double th = 2.0 * units::pi * i / m;
            t->sin1[std::size_t(i)] = std::sin(th);
            t->sin2[std::size_t(i)] = std::sin(2.0 * th);
        }
        slot = std::move(t);
    }
    return *slot;
}

} // namespace

double BesselBatch::magnitude(int N) const
{
    const std::size_t i = std::size_t(N - n_min_);
    return std::max({std::abs(v_[0][i]), std::abs(v_[1][i]), std::abs(v_[2][i])});
}

BesselBatch genbessel_batch(const BesselArgs& args, int n_min, int n_max, int min_samples)
{
    if (n_max < n_min) throw std::invalid_argument("genbessel_batch: empty order range");
    const int max_abs = std::max(std::abs(n_min), std::abs(n_max)) + 2;
    int m = genbessel_sample_count(args, max_abs);
    while (m < min_samples) m *= 2;
    const Transform& tr = transform_for(m);

    thread_local std::vector<std::complex<double>> in, out;
    in.resize(static_cast<std::size_t>(m));
    out.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double phase = -args.alpha * tr.sin1[std::size_t(i)] + args.beta * tr.sin2[std::size_t(i)];
        in[std::size_t(i)] = std::polar(1.0, phase);
    }
    fftw_execute_dft(tr.plan, as_fftw(in.data()), as_fftw(out.data()));

    BesselBatch batch;
    batch.args_ = args;
    batch.n_min_ = n_min;
    batch.n_max_ = n_max;
    batch.samples_ = m;

    // A_{0,N} over [n_min - 2, n_max + 2] for the cos^h recurrences.
    const int lo = n_min - 2, count = n_max - n_min + 5;
    std::vector<double> a0(static_cast<std::size_t>(count));
    double max_imag = 0;
    const double inv_m = 1.0 / m;
    for (int j = 0; j < count; ++j) {
        const int N = lo + j;
        const int idx = ((N % m) + m) % m;
        a0[std::size_t(j)] = out[std::size_t(idx)].real() * inv_m;
        max_imag = std::max(max_imag, std::abs(out[std::size_t(idx)].imag() * inv_m));
    }
    if (max_imag > 1e-10) throw std::logic_error("genbessel_batch: imaginary residue above tolerance");
    batch.max_imag_ = max_imag;

    const std::size_t len = std::size_t(n_max - n_min + 1);
    for (auto& v : batch.v_) v.resize(len);
    for (std::size_t j = 0; j < len; ++j) {
        const double c = a0[j + 2];
        batch.v_[0][j] = c;
        batch.v_[1][j] = 0.5 * (a0[j + 1] + a0[j + 3]);
        batch.v_[2][j] = 0.25 * (a0[j] + 2.0 * c + a0[j + 4]);
    }
    return batch;
}

} // namespace nldc
