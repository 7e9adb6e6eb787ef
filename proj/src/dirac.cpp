#include "nldc/dirac.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nldc {

DiracMatrix DiracMatrix::identity()
{
    DiracMatrix m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

DiracMatrix DiracMatrix::operator+(const DiracMatrix& o) const
{
    DiracMatrix r;
    for (int i = 0; i < 16; ++i) r.m_[i] = m_[i] + o.m_[i];
    return r;
}

DiracMatrix DiracMatrix::operator-(const DiracMatrix& o) const
{
    DiracMatrix r;
    for (int i = 0; i < 16; ++i) r.m_[i] = m_[i] - o.m_[i];
    return r;
}

DiracMatrix& DiracMatrix::operator+=(const DiracMatrix& o)
{
    for (int i = 0; i < 16; ++i) m_[i] += o.m_[i];
    return *this;
}

DiracMatrix DiracMatrix::operator*(const DiracMatrix& o) const
{
    DiracMatrix r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx a = (*this)(i, k);
            if (a == cplx{}) continue;
            for (int j = 0; j < 4; ++j) r(i, j) += a * o(k, j);
        }
    return r;
}

DiracMatrix DiracMatrix::operator*(cplx s) const
{
    DiracMatrix r;
    for (int i = 0; i < 16; ++i) r.m_[i] = s * m_[i];
    return r;
}

Spinor4 DiracMatrix::operator*(const Spinor4& v) const
{
    Spinor4 r{};
    for (int i = 0; i < 4; ++i)
        r[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2] + (*this)(i, 3) * v[3];
    return r;
}

DiracMatrix DiracMatrix::adjoint() const
{
    DiracMatrix r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

cplx DiracMatrix::trace() const
{
    return m_[0] + m_[5] + m_[10] + m_[15];
}

double DiracMatrix::max_abs() const
{
    double mx = 0;
    for (const auto& v : m_) mx = std::max(mx, std::abs(v));
    return mx;
}

namespace {

// Fills the 2x2 block (br, bc) of m with s * sigma.
void set_block(DiracMatrix& m, int br, int bc, const std::array<cplx, 4>& sigma, cplx s)
{
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(2 * br + i, 2 * bc + j) = s * sigma[2 * i + j];
}

const std::array<std::array<cplx, 4>, 3> pauli = {{
    {cplx{0}, cplx{1}, cplx{1}, cplx{0}},
    {cplx{0}, cplx{0, -1}, cplx{0, 1}, cplx{0}},
    {cplx{1}, cplx{0}, cplx{0}, cplx{-1}},
}};

} // namespace

DiracRep::DiracRep(Kind kind) : kind_(kind)
{
    // Standard (Dirac) representation first.
    std::array<DiracMatrix, 4> g;
    g[0](0, 0) = g[0](1, 1) = 1.0;
    g[0](2, 2) = g[0](3, 3) = -1.0;
    for (int i = 0; i < 3; ++i) {
        set_block(g[i + 1], 0, 1, pauli[i], 1.0);
        set_block(g[i + 1], 1, 0, pauli[i], -1.0);
    }

    if (kind == Kind::dirac) {
        gamma_ = g;
        from_dirac_ = DiracMatrix::identity();
        return;
    }

    // Chiral representation: gamma_W = U gamma_D U^dagger, U = [[1,-1],[1,1]]/sqrt2.
    const double h = 1.0 / std::sqrt(2.0);
    DiracMatrix u;
    for (int i = 0; i < 2; ++i) {
        u(i, i) = h;
        u(i, i + 2) = -h;
        u(i + 2, i) = h;
        u(i + 2, i + 2) = h;
    }
    const DiracMatrix ud = u.adjoint();
    for (int mu = 0; mu < 4; ++mu) gamma_[mu] = u * g[mu] * ud;
    from_dirac_ = u;
}

const DiracRep& DiracRep::dirac()
{
    static const DiracRep rep(Kind::dirac);
    return rep;
}

const DiracRep& DiracRep::weyl()
{
    static const DiracRep rep(Kind::weyl);
    return rep;
}

DiracMatrix DiracRep::slash(const FourVector& p) const
{
    DiracMatrix r;
    const double c[4] = {p.t(), -p.x, -p.y, -p.z()};
    for (int mu = 0; mu < 4; ++mu) r += gamma_[mu] * cplx{c[mu]};
    return r;
}

DiracMatrix DiracRep::slash(const CFourVector& p) const
{
    DiracMatrix r;
    const cplx c[4] = {p.t, -p.x, -p.y, -p.z};
    for (int mu = 0; mu < 4; ++mu) r += gamma_[mu] * c[mu];
    return r;
}

Spinor free_spinor(const FourVector& p, int r, const DiracRep& rep, SpinAxis axis)
{
    if (r != 1 && r != 2) throw std::invalid_argument("free_spinor: spin label must be 1 or 2");
    const double p2 = minkowski_dot(p, p);
    if (!(p.t() > 0) || std::abs(p2 - 1.0) > 1e-8)
        throw std::invalid_argument("free_spinor: momentum off mass shell, p^2 = " + std::to_string(p2));

    std::array<cplx, 2> chi;
    if (axis == SpinAxis::z) {
        chi = r == 1 ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
    } else {
        const double h = 1.0 / std::sqrt(2.0);
        chi = r == 1 ? std::array<cplx, 2>{h, h} : std::array<cplx, 2>{h, -h};
    }

    // sigma . p chi
    const cplx pm{p.x, -p.y};
    const cplx pp{p.x, p.y};
    const double pz = p.z();
    const std::array<cplx, 2> sp = {pz * chi[0] + pm * chi[1], pp * chi[0] - pz * chi[1]};

    const double e1 = p.t() + 1.0;
    const double norm = std::sqrt(e1 / 2.0);
    Spinor4 u = {norm * chi[0], norm * chi[1], norm * sp[0] / e1, norm * sp[1] / e1};
    if (rep.kind() != DiracRep::Kind::dirac) u = rep.from_dirac() * u;
    return {u, r, p};
}

Spinor4 dirac_adjoint(const Spinor4& u, const DiracRep& rep)
{
    const DiracMatrix& g0 = rep.gamma(0);
    Spinor4 row{};
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) row[j] += std::conj(u[i]) * g0(i, j);
    return row;
}

cplx bilinear(const Spinor& uf, const DiracMatrix& M, const Spinor& ui, const DiracRep& rep)
{
    return contract(dirac_adjoint(uf.u, rep), M * ui.u);
}

} // namespace nldc
