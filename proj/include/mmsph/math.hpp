#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

// Small dense vector/tensor types. Everything is stored as 3-component
// even in 2D runs (plane strain keeps sigma_zz alive), with z entries zero
// for kinematic quantities.

namespace mmsph {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double a) { x *= a; y *= a; z *= a; return *this; }
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(Vec3 a, double s) { return a *= s; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline Vec3 operator/(Vec3 a, double s) { return a *= (1.0 / s); }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline bool is_finite(const Vec3& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Row-major 3x3 tensor.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[3 * r + c]; }
    double operator()(int r, int c) const { return m[3 * r + c]; }

    static Mat3 zero() { return {}; }
    static Mat3 identity() {
        Mat3 a;
        a(0, 0) = a(1, 1) = a(2, 2) = 1.0;
        return a;
    }
    static Mat3 diag(double a, double b, double c) {
        Mat3 d;
        d(0, 0) = a; d(1, 1) = b; d(2, 2) = c;
        return d;
    }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) m[i] += o.m[i];
        return *this;
    }
    Mat3& operator-=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) m[i] -= o.m[i];
        return *this;
    }
    Mat3& operator*=(double a) {
        for (int i = 0; i < 9; ++i) m[i] *= a;
        return *this;
    }
};

inline Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
inline Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
inline Mat3 operator*(Mat3 a, double s) { return a *= s; }
inline Mat3 operator*(double s, Mat3 a) { return a *= s; }

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return c;
}

inline Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 c;
    c(0, 0) = a.x * b.x; c(0, 1) = a.x * b.y; c(0, 2) = a.x * b.z;
    c(1, 0) = a.y * b.x; c(1, 1) = a.y * b.y; c(1, 2) = a.y * b.z;
    c(2, 0) = a.z * b.x; c(2, 1) = a.z * b.y; c(2, 2) = a.z * b.z;
    return c;
}

inline Mat3 transpose(const Mat3& a) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = a(j, i);
    return t;
}

inline double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

inline Mat3 inverse(const Mat3& a) {
    const double d = det(a);
    if (d == 0.0 || !std::isfinite(d))
        throw std::domain_error("Mat3::inverse: singular matrix");
    const double id = 1.0 / d;
    Mat3 r;
    r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) * id;
    r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) * id;
    r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) * id;
    r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) * id;
    r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) * id;
    r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) * id;
    r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) * id;
    r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) * id;
    r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) * id;
    return r;
}

// A - tr(A)/3 I
inline Mat3 deviatoric(const Mat3& a) {
    Mat3 d = a;
    const double t = trace(a) / 3.0;
    d(0, 0) -= t; d(1, 1) -= t; d(2, 2) -= t;
    return d;
}

inline double double_dot(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int i = 0; i < 9; ++i) s += a.m[i] * b.m[i];
    return s;
}

inline double frobenius_norm(const Mat3& a) { return std::sqrt(double_dot(a, a)); }

inline bool is_finite(const Mat3& a) {
    for (double v : a.m)
        if (!std::isfinite(v)) return false;
    return true;
}

// sqrt(3 J2) with J2 = s:s/2, for a deviatoric tensor s.
inline double von_mises(const Mat3& s) { return std::sqrt(1.5 * double_dot(s, s)); }

}  // namespace mmsph
