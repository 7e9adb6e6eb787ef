#pragma once

#include <cmath>
#include <random>

#include "nldc/dirac.hpp"

namespace testutil {

inline double rel_diff(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0.0 : std::abs(a - b) / s;
}

inline nldc::FourVector random_vector(std::mt19937_64& rng, double scale = 2.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    return nldc::FourVector::from_txyz(u(rng), u(rng), u(rng), u(rng));
}

inline nldc::FourVector on_shell(double px, double py, double pz)
{
    // builds the small light-cone component from the mass shell to keep it exact
    const double t = std::sqrt(1 + px * px + py * py + pz * pz);
    const double big = t + std::abs(pz), small = (1 + px * px + py * py) / big;
    return pz >= 0 ? nldc::FourVector::light_cone(big, small, px, py) : nldc::FourVector::light_cone(small, big, px, py);
}

} // namespace testutil
