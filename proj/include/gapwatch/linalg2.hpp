#pragma once

#include <array>
#include <cmath>

#include "gapwatch/errors.hpp"

namespace gapwatch {

struct Vec2 {
    double x0 = 0.0;
    double x1 = 0.0;

    double& operator[](int i) { return i == 0 ? x0 : x1; }
    double operator[](int i) const { return i == 0 ? x0 : x1; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x0 + b.x0, a.x1 + b.x1}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x0 - b.x0, a.x1 - b.x1}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x0, s * a.x1}; }
inline double dot(Vec2 a, Vec2 b) { return a.x0 * b.x0 + a.x1 * b.x1; }

/// Symmetric-by-use 2x2 matrix with closed-form inverse. Row-major.
struct Mat2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    double det() const { return a00 * a11 - a01 * a10; }

    Mat2 transposed() const { return {a00, a10, a01, a11}; }

    /// (M + M^T)/2; removes floating-point asymmetry drift.
    Mat2 symmetrized() const {
        const double off = 0.5 * (a01 + a10);
        return {a00, off, off, a11};
    }

    bool is_symmetric(double tol = 1e-12) const { return std::abs(a01 - a10) <= tol; }

    /// Positive definite test for a symmetric 2x2: leading minors > 0.
    bool is_positive_definite() const { return a00 > 0.0 && det() > 0.0; }
};

inline Mat2 operator+(Mat2 a, Mat2 b) {
    return {a.a00 + b.a00, a.a01 + b.a01, a.a10 + b.a10, a.a11 + b.a11};
}
inline Mat2 operator-(Mat2 a, Mat2 b) {
    return {a.a00 - b.a00, a.a01 - b.a01, a.a10 - b.a10, a.a11 - b.a11};
}
inline Mat2 operator*(double s, Mat2 m) {
    return {s * m.a00, s * m.a01, s * m.a10, s * m.a11};
}
inline Vec2 operator*(Mat2 m, Vec2 v) {
    return {m.a00 * v.x0 + m.a01 * v.x1, m.a10 * v.x0 + m.a11 * v.x1};
}
inline Mat2 operator*(Mat2 a, Mat2 b) {
    return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
            a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
}

/// Closed-form adjugate/determinant inverse. Throws SingularPrior when the
/// determinant magnitude is at or below the floor.
inline Mat2 inverse(Mat2 m, double det_floor = 1e-300) {
    const double d = m.det();
    if (std::abs(d) <= det_floor) {
        throw SingularPrior("2x2 matrix not invertible to working precision (det = " +
                            std::to_string(d) + ")");
    }
    const double inv_d = 1.0 / d;
    return {m.a11 * inv_d, -m.a01 * inv_d, -m.a10 * inv_d, m.a00 * inv_d};
}

/// PSD test with a small tolerance for rounding; used by shrinkage checks.
inline bool is_positive_semidefinite(Mat2 m, double tol = 1e-12) {
    return m.a00 >= -tol && m.a11 >= -tol && m.det() >= -tol * (1.0 + std::abs(m.a00) + std::abs(m.a11));
}

}  // namespace gapwatch
