#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>
#include <ostream>

#include <Eigen/Dense>

namespace cwtori {

using cd = std::complex<double>;

// Dense complex types backing the rank-4 picture (V,i).
using CVec4 = Eigen::Vector4cd;
using CMat4 = Eigen::Matrix4cd;
using CMat2 = Eigen::Matrix2cd;
using CVec2 = Eigen::Vector2cd;

//! Quaternion w + xi + yj + zk over doubles. Plain value type, no implicit
//! normalization; unit-ness is an invariant of the consumers that need it.
struct Quaternion {
    double w = 0, x = 0, y = 0, z = 0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion zero() { return {0, 0, 0, 0}; }
    static constexpr Quaternion one() { return {1, 0, 0, 0}; }
    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    //! q = alpha + j*beta with alpha, beta in C = span{1,i}.
    static Quaternion from_complex_pair(cd alpha, cd beta) {
        return {alpha.real(), alpha.imag(), beta.real(), -beta.imag()};
    }
    cd alpha() const { return {w, x}; }
    cd beta() const { return {y, -z}; }

    static Quaternion from_complex(cd a) { return {a.real(), a.imag(), 0, 0}; }

    double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Quaternion conj() const { return {w, -x, -y, -z}; }
    Quaternion inverse() const {
        double n2 = norm2();
        return {w / n2, -x / n2, -y / n2, -z / n2};
    }
    Quaternion operator-() const { return {-w, -x, -y, -z}; }

    Quaternion& operator+=(const Quaternion& r) { w += r.w; x += r.x; y += r.y; z += r.z; return *this; }
    Quaternion& operator-=(const Quaternion& r) { w -= r.w; x -= r.x; y -= r.y; z -= r.z; return *this; }
    Quaternion& operator*=(double s) { w *= s; x *= s; y *= s; z *= s; return *this; }
};

inline Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
inline Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
inline Quaternion operator*(Quaternion a, double s) { return a *= s; }
inline Quaternion operator*(double s, Quaternion a) { return a *= s; }

//! Hamilton product (noncommutative).
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quaternion qmul(const Quaternion& a, const Quaternion& b) { return a * b; }

inline double real_part(const Quaternion& q) { return q.w; }
inline Quaternion imag_part(const Quaternion& q) { return {0, q.x, q.y, q.z}; }

//! Euclidean inner product on H = R^4.
inline double dot(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

//! exp(i t) as a quaternion in span{1,i}.
inline Quaternion exp_i(double t) { return {std::cos(t), std::sin(t), 0, 0}; }

inline Quaternion qexp(const Quaternion& q) {
    double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    double ew = std::exp(q.w);
    double sc = vn > 1e-300 ? ew * std::sin(vn) / vn : ew;
    return {ew * std::cos(vn), sc * q.x, sc * q.y, sc * q.z};
}

//! Principal branch; q must be nonzero.
inline Quaternion qlog(const Quaternion& q) {
    double n = q.norm();
    double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    double th = std::atan2(vn, q.w);
    double sc = vn > 1e-300 ? th / vn : 0.0;
    return {std::log(n), sc * q.x, sc * q.y, sc * q.z};
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << "(" << q.w << " " << q.x << "i " << q.y << "j " << q.z << "k)";
}

//! Column vector in H^2, a right H-module: (v*p)*q = v*(p*q).
struct QVec2 {
    Quaternion a, b;

    QVec2() = default;
    QVec2(Quaternion a_, Quaternion b_) : a(a_), b(b_) {}

    QVec2 operator*(const Quaternion& q) const { return {a * q, b * q}; }
    QVec2 operator+(const QVec2& r) const { return {a + r.a, b + r.b}; }
    QVec2 operator-(const QVec2& r) const { return {a - r.a, b - r.b}; }
    QVec2 operator*(double s) const { return {a * s, b * s}; }
    double norm() const { return std::sqrt(a.norm2() + b.norm2()); }
};

//! 2x2 quaternionic matrix acting on QVec2 by left multiplication.
struct QMat2 {
    Quaternion a, b, c, d;  // [[a, b], [c, d]]

    QMat2() = default;
    QMat2(Quaternion a_, Quaternion b_, Quaternion c_, Quaternion d_) : a(a_), b(b_), c(c_), d(d_) {}

    static QMat2 identity() { return {Quaternion::one(), {}, {}, Quaternion::one()}; }
    static QMat2 zero() { return {}; }

    QVec2 operator*(const QVec2& v) const { return {a * v.a + b * v.b, c * v.a + d * v.b}; }
    QMat2 operator*(const QMat2& m) const {
        return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
    }
    QMat2 operator+(const QMat2& m) const { return {a + m.a, b + m.b, c + m.c, d + m.d}; }
    QMat2 operator-(const QMat2& m) const { return {a - m.a, b - m.b, c - m.c, d - m.d}; }
    QMat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    QMat2 operator-() const { return {-a, -b, -c, -d}; }

    Quaternion trace() const { return a + d; }
    double norm() const { return std::sqrt(a.norm2() + b.norm2() + c.norm2() + d.norm2()); }
};

inline QMat2 operator*(double s, const QMat2& m) { return m * s; }

//! <B>: one quarter of the trace of B acting on H^2 = R^8, i.e. Re tr_H(B).
inline double quarter_real_trace(const QMat2& m) { return m.a.w + m.d.w; }

// ---------------------------------------------------------------------------
// Complexification: V = H^2 viewed as C^4 by restricting scalars to C = <1,i>.
// Slot convention: q = alpha + j beta maps to (alpha, beta); a QVec2 (q1, q2)
// maps to (alpha1, beta1, alpha2, beta2). Right multiplication by i becomes
// componentwise multiplication by i.
// ---------------------------------------------------------------------------

inline CVec4 complexify(const QVec2& v) {
    CVec4 out;
    out << v.a.alpha(), v.a.beta(), v.b.alpha(), v.b.beta();
    return out;
}

inline QVec2 decomplexify(const CVec4& v) {
    return {Quaternion::from_complex_pair(v(0), v(1)), Quaternion::from_complex_pair(v(2), v(3))};
}

//! 2x2 complex block of left multiplication by q = alpha + j beta.
inline CMat2 embed_quaternion(const Quaternion& q) {
    CMat2 m;
    m << q.alpha(), -std::conj(q.beta()), q.beta(), std::conj(q.alpha());
    return m;
}

//! Left-multiplication representation on (V,i): embed(M N) = embed(M) embed(N).
inline CMat4 embed_qmat(const QMat2& m) {
    CMat4 out;
    out.block<2, 2>(0, 0) = embed_quaternion(m.a);
    out.block<2, 2>(0, 2) = embed_quaternion(m.b);
    out.block<2, 2>(2, 0) = embed_quaternion(m.c);
    out.block<2, 2>(2, 2) = embed_quaternion(m.d);
    return out;
}

//! The constant matrix J with apply_j(v) = J * conj(v).
inline const CMat4& j_structure_matrix() {
    static const CMat4 J = [] {
        CMat4 m = CMat4::Zero();
        m(0, 1) = -1; m(1, 0) = 1;
        m(2, 3) = -1; m(3, 2) = 1;
        return m;
    }();
    return J;
}

//! Right multiplication by j on (V,i); complex anti-linear, squares to -Id.
inline CVec4 apply_j(const CVec4& v) { return j_structure_matrix() * v.conjugate(); }

//! Conjugation of an endomorphism by the antilinear j-structure:
//! X ~> j^{-1} X j = J conj(X) J^{-1}.
inline CMat4 j_conjugate(const CMat4& x) {
    const CMat4& J = j_structure_matrix();
    return -(J * x.conjugate() * J);  // J^{-1} = -J
}

}  // namespace cwtori
