#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "ksreg/quaternion.hpp"

namespace ksreg {

using Vector2d = Eigen::Vector2d;
using Vector3d = Eigen::Vector3d;
using Vector4d = Eigen::Vector4d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Vector8d = Eigen::Matrix<double, 8, 1>;
using Matrix4d = Eigen::Matrix4d;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

// Cotangent point (q, p) over the punctured quaternions. Maps that divide by
// |q|^2 require q != 0; construction itself is unrestricted.
struct PhasePoint8 {
    Quat q;
    Quat p;

    Vector8d flat() const {
        Vector8d v;
        v << q.w, q.x, q.y, q.z, p.w, p.x, p.y, p.z;
        return v;
    }
    static PhasePoint8 from_flat(const Vector8d& v) {
        return {Quat{v[0], v[1], v[2], v[3]}, Quat{v[4], v[5], v[6], v[7]}};
    }
};

// Spatial point (x, y) with |x| > 0 wherever it arises as a KS image.
struct PhasePoint6 {
    Vector3d x;
    Vector3d y;

    Vector6d flat() const {
        Vector6d v;
        v << x, y;
        return v;
    }
    static PhasePoint6 from_flat(const Vector6d& v) {
        return {v.head<3>(), v.tail<3>()};
    }
};

// Planar point (x, y).
struct PhasePoint4 {
    Vector2d x;
    Vector2d y;

    Vector4d flat() const {
        Vector4d v;
        v << x, y;
        return v;
    }
    static PhasePoint4 from_flat(const Vector4d& v) {
        return {v.head<2>(), v.tail<2>()};
    }
};

// Canonical symplectic matrix [[0, I], [-I, 0]] acting on (positions, momenta).
template <int N>
Eigen::Matrix<double, 2 * N, 2 * N> symplectic_matrix() {
    Eigen::Matrix<double, 2 * N, 2 * N> omega = Eigen::Matrix<double, 2 * N, 2 * N>::Zero();
    omega.template topRightCorner<N, N>() = Eigen::Matrix<double, N, N>::Identity();
    omega.template bottomLeftCorner<N, N>() = -Eigen::Matrix<double, N, N>::Identity();
    return omega;
}

// Fourth-order five-point Jacobian of an R^8 -> R^8 map; accurate enough
// (~1e-12 relative) for symplecticity measurements of the chart maps.
template <typename F>
Matrix8d numerical_jacobian8(const F& f, const Vector8d& at) {
    Matrix8d jac;
    for (int j = 0; j < 8; ++j) {
        const double h = 5e-5 * std::max(1.0, std::abs(at[j]));
        Vector8d p1 = at, p2 = at, m1 = at, m2 = at;
        p1[j] += h;
        p2[j] += 2 * h;
        m1[j] -= h;
        m2[j] -= 2 * h;
        jac.col(j) = (-f(p2) + 8 * f(p1) - 8 * f(m1) + f(m2)) / (12 * h);
    }
    return jac;
}

}  // namespace ksreg
