#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace nsc {

/// Point / velocity in R^3.  Plain value type, no hidden normalization.
struct Vec3 {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double a, double b, double c) : x1(a), x2(b), x3(c) {}

    constexpr Vec3 operator+(const Vec3& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
    constexpr Vec3 operator-() const { return {-x1, -x2, -x3}; }
    constexpr Vec3 operator*(double c) const { return {c * x1, c * x2, c * x3}; }
    constexpr Vec3 operator/(double c) const { return {x1 / c, x2 / c, x3 / c}; }
    Vec3& operator+=(const Vec3& o) { x1 += o.x1; x2 += o.x2; x3 += o.x3; return *this; }
    Vec3& operator-=(const Vec3& o) { x1 -= o.x1; x2 -= o.x2; x3 -= o.x3; return *this; }
    Vec3& operator*=(double c) { x1 *= c; x2 *= c; x3 *= c; return *this; }
};

constexpr Vec3 operator*(double c, const Vec3& v) { return v * c; }

constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.x2 * b.x3 - a.x3 * b.x2,
            a.x3 * b.x1 - a.x1 * b.x3,
            a.x1 * b.x2 - a.x2 * b.x1};
}

/// Denormal guard: samplers produce |y| > 0 a.s., so this only traps logic errors.
inline constexpr double kZeroNormGuard = 1e-300;

inline void require_nonzero(const Vec3& y, const char* who) {
    if (!(norm(y) >= kZeroNormGuard))
        throw std::domain_error(std::string(who) + ": zero vector");
}

/// e_y = y/|y|
inline Vec3 unit(const Vec3& y) {
    require_nonzero(y, "unit");
    return y / norm(y);
}

/// P_y u = u - (u.e_y) e_y, projection onto the plane perpendicular to y.
inline Vec3 proj_perp(const Vec3& y, const Vec3& u) {
    require_nonzero(y, "proj_perp");
    const Vec3 e = y / norm(y);
    return u - dot(u, e) * e;
}

/// (I - 3 e_y e_y^t) u
inline Vec3 reflect(const Vec3& y, const Vec3& u) {
    require_nonzero(y, "reflect");
    const Vec3 e = y / norm(y);
    return u - 3.0 * dot(u, e) * e;
}

/// b_1(y;u,v) = (u.e_y) P_y v + (v.e_y) P_y u
inline Vec3 b1(const Vec3& y, const Vec3& u, const Vec3& v) {
    require_nonzero(y, "b1");
    const Vec3 e = y / norm(y);
    const double ue = dot(u, e), ve = dot(v, e);
    const Vec3 pu = u - ue * e, pv = v - ve * e;
    return ue * pv + ve * pu;
}

/// b_2(y;u,v) = b_1(y;u,v) + (u . (I - 3 e_y e_y^t) v) e_y
inline Vec3 b2(const Vec3& y, const Vec3& u, const Vec3& v) {
    require_nonzero(y, "b2");
    const Vec3 e = y / norm(y);
    const double ue = dot(u, e), ve = dot(v, e);
    const Vec3 pu = u - ue * e, pv = v - ve * e;
    return ue * pv + ve * pu + (dot(u, v) - 3.0 * ue * ve) * e;
}

/// 3x3 matrix, row-major.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }

    Vec3 operator*(const Vec3& v) const {
        return {a[0] * v.x1 + a[1] * v.x2 + a[2] * v.x3,
                a[3] * v.x1 + a[4] * v.x2 + a[5] * v.x3,
                a[6] * v.x1 + a[7] * v.x2 + a[8] * v.x3};
    }
    Mat3 operator+(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] + o.a[i];
        return m;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = a[i] - o.a[i];
        return m;
    }
    Mat3 operator*(double c) const {
        Mat3 m;
        for (int i = 0; i < 9; ++i) m.a[i] = c * a[i];
        return m;
    }
    double trace() const { return a[0] + a[4] + a[8]; }
    Mat3 transpose() const {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = (*this)(j, i);
        return m;
    }
};

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 m;
    m(0, 0) = a.x1 * b.x1; m(0, 1) = a.x1 * b.x2; m(0, 2) = a.x1 * b.x3;
    m(1, 0) = a.x2 * b.x1; m(1, 1) = a.x2 * b.x2; m(1, 2) = a.x2 * b.x3;
    m(2, 0) = a.x3 * b.x1; m(2, 1) = a.x3 * b.x2; m(2, 2) = a.x3 * b.x3;
    return m;
}

}  // namespace nsc
