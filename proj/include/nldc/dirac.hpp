#pragma once

#include <array>
#include <complex>

namespace nldc {

using cplx = std::complex<double>;

/// Real Minkowski four-vector, metric (+,-,-,-).
///
/// Stored in light-cone form along the beam axis, plus = t + z and
/// minus = t - z, with the transverse components kept as-is. For electrons
/// with E >> m the small component t - z then keeps full relative precision,
/// which the invariants p^2, p.k and the propagator denominators depend on.
class FourVector {
public:
    double plus = 0, minus = 0, x = 0, y = 0;

    constexpr FourVector() = default;

    static constexpr FourVector from_txyz(double t, double x, double y, double z)
    {
        return light_cone(t + z, t - z, x, y);
    }
    static constexpr FourVector light_cone(double plus, double minus, double x, double y)
    {
        FourVector v;
        v.plus = plus;
        v.minus = minus;
        v.x = x;
        v.y = y;
        return v;
    }

    constexpr double t() const { return 0.5 * (plus + minus); }
    constexpr double z() const { return 0.5 * (plus - minus); }
    constexpr double operator[](int mu) const { return mu == 0 ? t() : mu == 1 ? x : mu == 2 ? y : z(); }

    constexpr FourVector operator+(const FourVector& o) const { return light_cone(plus + o.plus, minus + o.minus, x + o.x, y + o.y); }
    constexpr FourVector operator-(const FourVector& o) const { return light_cone(plus - o.plus, minus - o.minus, x - o.x, y - o.y); }
    constexpr FourVector operator-() const { return light_cone(-plus, -minus, -x, -y); }
    constexpr FourVector operator*(double s) const { return light_cone(s * plus, s * minus, s * x, s * y); }
    constexpr FourVector& operator+=(const FourVector& o) { *this = *this + o; return *this; }
};

constexpr FourVector operator*(double s, const FourVector& v) { return v * s; }

/// Complex four-vector, used for polarization vectors.
struct CFourVector {
    cplx t{}, x{}, y{}, z{};

    CFourVector() = default;
    CFourVector(cplx t_, cplx x_, cplx y_, cplx z_) : t(t_), x(x_), y(y_), z(z_) {}
    CFourVector(const FourVector& v) : t(v.t()), x(v.x), y(v.y), z(v.z()) {}

    CFourVector operator+(const CFourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    CFourVector operator*(cplx s) const { return {s * t, s * x, s * y, s * z}; }
    CFourVector conj() const { return {std::conj(t), std::conj(x), std::conj(y), std::conj(z)}; }
    cplx operator[](int mu) const { return mu == 0 ? t : mu == 1 ? x : mu == 2 ? y : z; }
};

inline CFourVector operator*(cplx s, const CFourVector& v) { return v * s; }

constexpr double minkowski_dot(const FourVector& p, const FourVector& q)
{
    return 0.5 * (p.plus * q.minus + p.minus * q.plus) - p.x * q.x - p.y * q.y;
}

inline cplx minkowski_dot(const CFourVector& p, const FourVector& q)
{
    return p.t * q.t() - p.x * q.x - p.y * q.y - p.z * q.z();
}

inline cplx minkowski_dot(const FourVector& p, const CFourVector& q) { return minkowski_dot(q, p); }

inline cplx minkowski_dot(const CFourVector& p, const CFourVector& q)
{
    return p.t * q.t - p.x * q.x - p.y * q.y - p.z * q.z;
}

using Spinor4 = std::array<cplx, 4>;

/// 4x4 complex matrix on Dirac spinor space, row-major.
class DiracMatrix {
public:
    DiracMatrix() { m_.fill(cplx{}); }

    static DiracMatrix identity();

    cplx& operator()(int r, int c) { return m_[4 * r + c]; }
    const cplx& operator()(int r, int c) const { return m_[4 * r + c]; }

    DiracMatrix operator+(const DiracMatrix& o) const;
    DiracMatrix operator-(const DiracMatrix& o) const;
    DiracMatrix operator*(const DiracMatrix& o) const;
    DiracMatrix operator*(cplx s) const;
    DiracMatrix& operator+=(const DiracMatrix& o);
    Spinor4 operator*(const Spinor4& v) const;

    DiracMatrix adjoint() const;
    cplx trace() const;
    double max_abs() const;

private:
    std::array<cplx, 16> m_;
};

inline DiracMatrix operator*(cplx s, const DiracMatrix& m) { return m * s; }

/// A concrete representation of the gamma matrices. The amplitude code is
/// written against this object so that observables can be checked for
/// representation independence.
class DiracRep {
public:
    enum class Kind { dirac, weyl };

    static const DiracRep& dirac();
    static const DiracRep& weyl();

    Kind kind() const { return kind_; }
    const DiracMatrix& gamma(int mu) const { return gamma_[mu]; }

    /// gamma . p
    DiracMatrix slash(const FourVector& p) const;
    DiracMatrix slash(const CFourVector& p) const;

    /// Unitary map from Dirac-representation spinors to this representation.
    const DiracMatrix& from_dirac() const { return from_dirac_; }

private:
    explicit DiracRep(Kind kind);

    Kind kind_;
    std::array<DiracMatrix, 4> gamma_;
    DiracMatrix from_dirac_;
};

enum class SpinAxis { z, x };

/// Positive-energy free spinor normalized to u-bar u = 1.
struct Spinor {
    Spinor4 u{};
    int r = 1;
    FourVector p;
};

/// Free positive-energy spinor with rest-frame spin r in {1, 2} (up, down)
/// along the chosen axis. Throws std::invalid_argument when p is off shell.
Spinor free_spinor(const FourVector& p, int r, const DiracRep& rep = DiracRep::dirac(),
                   SpinAxis axis = SpinAxis::z);

/// Row vector u-bar = u^dagger gamma^0.
Spinor4 dirac_adjoint(const Spinor4& u, const DiracRep& rep);

/// Plain contraction sum_a row[a] col[a] (no conjugation).
inline cplx contract(const Spinor4& row, const Spinor4& col)
{
    return row[0] * col[0] + row[1] * col[1] + row[2] * col[2] + row[3] * col[3];
}

/// u_f^dagger gamma^0 M u_i
cplx bilinear(const Spinor& uf, const DiracMatrix& M, const Spinor& ui,
              const DiracRep& rep = DiracRep::dirac());

} // namespace nldc
