#pragma once

#include <Eigen/Core>
#include <cmath>

namespace ksreg {

// Basis axes of the imaginary part. Axis::i multiplies as ii = -1, ij = k, etc.
enum class Axis { i, j, k };

// Quaternion value w + x*i + y*j + z*k. Component indexing follows the
// 1..4 convention used throughout the library: q1 = w, q2 = x, q3 = y, q4 = z.
template <typename Scalar>
struct Quaternion {
    Scalar w{0}, x{0}, y{0}, z{0};

    Quaternion() = default;
    Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_) : w(w_), x(x_), y(y_), z(z_) {}

    static Quaternion zero() { return {0, 0, 0, 0}; }
    static Quaternion identity() { return {1, 0, 0, 0}; }

    // Pure unit quaternion along an axis, optionally negated.
    static Quaternion unit(Axis a, int sign = +1) {
        const Scalar s = static_cast<Scalar>(sign);
        switch (a) {
            case Axis::i: return {0, s, 0, 0};
            case Axis::j: return {0, 0, s, 0};
            default:      return {0, 0, 0, s};
        }
    }

    Eigen::Matrix<Scalar, 3, 1> vec() const { return {x, y, z}; }
    Eigen::Matrix<Scalar, 4, 1> coeffs() const { return {w, x, y, z}; }

    static Quaternion from_coeffs(const Eigen::Matrix<Scalar, 4, 1>& v) {
        return {v[0], v[1], v[2], v[3]};
    }
    static Quaternion pure(const Eigen::Matrix<Scalar, 3, 1>& v) {
        return {0, v[0], v[1], v[2]};
    }

    Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    Quaternion operator*(Scalar s) const { return {w * s, x * s, y * s, z * s}; }
    Quaternion operator/(Scalar s) const { return {w / s, x / s, y / s, z / s}; }

    friend Quaternion operator*(Scalar s, const Quaternion& q) { return q * s; }
};

// Hamilton product via the scalar/vector split:
// (a1, a)(b1, b) = (a1 b1 - a.b, a1 b + b1 a + a x b).
template <typename Scalar>
Quaternion<Scalar> mul(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + b.w * a.x + a.y * b.z - a.z * b.y,
            a.w * b.y + b.w * a.y + a.z * b.x - a.x * b.z,
            a.w * b.z + b.w * a.z + a.x * b.y - a.y * b.x};
}

template <typename Scalar>
Quaternion<Scalar> mul(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b,
                       const Quaternion<Scalar>& c) {
    return mul(mul(a, b), c);
}

template <typename Scalar>
Quaternion<Scalar> conj(const Quaternion<Scalar>& a) {
    return {a.w, -a.x, -a.y, -a.z};
}

template <typename Scalar>
Scalar norm_squared(const Quaternion<Scalar>& a) {
    return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z;
}

template <typename Scalar>
Scalar norm(const Quaternion<Scalar>& a) {
    return std::sqrt(norm_squared(a));
}

template <typename Scalar>
Scalar dot(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

// Rotor cos(angle) + axis*sin(angle). Unit norm for every angle.
template <typename Scalar>
Quaternion<Scalar> rotor(Axis axis, Scalar angle) {
    const Scalar c = std::cos(angle), s = std::sin(angle);
    switch (axis) {
        case Axis::i: return {c, s, 0, 0};
        case Axis::j: return {c, 0, s, 0};
        default:      return {c, 0, 0, s};
    }
}

template <typename Scalar>
Quaternion<Scalar> inverse(const Quaternion<Scalar>& a) {
    return conj(a) / norm_squared(a);
}

using Quat = Quaternion<double>;

}  // namespace ksreg
