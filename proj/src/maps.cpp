#include "ksreg/maps.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ksreg/charts.hpp"

namespace ksreg {

DefiningVector DefiningVector::parse(const std::string& s) {
    if (s.size() != 2 || (s[0] != '+' && s[0] != '-'))
        throw std::invalid_argument("defining vector must be one of +i,-i,+j,-j,+k,-k");
    DefiningVector dv;
    dv.sign = s[0] == '+' ? +1 : -1;
    switch (s[1]) {
        case 'i': dv.axis = Axis::i; break;
        case 'j': dv.axis = Axis::j; break;
        case 'k': dv.axis = Axis::k; break;
        default: throw std::invalid_argument("defining vector axis must be i, j or k");
    }
    return dv;
}

std::string DefiningVector::str() const {
    std::string s = sign > 0 ? "+" : "-";
    s += axis == Axis::i ? 'i' : axis == Axis::j ? 'j' : 'k';
    return s;
}

LCVariant lc_variant_from_string(const std::string& s) {
    if (s == "+1") return LCVariant::plus_one;
    if (s == "-1") return LCVariant::minus_one;
    if (s == "+i") return LCVariant::plus_i;
    if (s == "-i") return LCVariant::minus_i;
    throw std::invalid_argument("LC variant must be one of +1,-1,+i,-i");
}

PhasePoint4 lc_map(const Vector2d& q2, const Vector2d& p2, LCVariant variant) {
    const double r2 = q2.squaredNorm();
    if (r2 == 0) throw std::domain_error("lc_map: q = 0 (lift divides by |q|^2)");
    // Complex arithmetic: x = m q^2, y = m p q / (2 |q|^2); m in {1,-1,i,-i}.
    const std::complex<double> q(q2[0], q2[1]), p(p2[0], p2[1]);
    std::complex<double> m;
    switch (variant) {
        case LCVariant::plus_one: m = {1, 0}; break;
        case LCVariant::minus_one: m = {-1, 0}; break;
        case LCVariant::plus_i: m = {0, 1}; break;
        default: m = {0, -1}; break;
    }
    const std::complex<double> x = m * q * q;
    const std::complex<double> y = m * p * q / (2.0 * r2);
    return {{x.real(), x.imag()}, {y.real(), y.imag()}};
}

namespace {

PhasePoint8 apply_form(const PhasePoint8& z, KsForm form) {
    if (form == KsForm::standard) return z;
    return {Quat{z.q.z, z.q.x, z.q.y, z.q.w}, Quat{z.p.z, z.p.x, z.p.y, z.p.w}};
}

}  // namespace

Quat ks_point(const Quat& q_in, DefiningVector dv, KsForm form) {
    const Quat q = apply_form({q_in, Quat::zero()}, form).q;
    if (norm_squared(q) == 0) throw std::domain_error("ks_point: q = 0");
    return mul(conj(q), mul(dv.quat(), q));
}

KsImage ks_map(const PhasePoint8& z_in, DefiningVector dv, KsForm form) {
    const PhasePoint8 z = apply_form(z_in, form);
    const double r2 = norm_squared(z.q);
    if (r2 == 0) throw std::domain_error("ks_map: q = 0");
    const Quat xq = mul(conj(z.q), mul(dv.quat(), z.q));
    const Quat yq = mul(conj(z.q), mul(dv.quat(), z.p)) / (2.0 * r2);
    return {xq.vec(), yq.vec(), yq.w};
}

Matrix4d chi_matrix(int which, double alpha) {
    if (which != 0 && which != 1) throw std::invalid_argument("chi_action: which must be 0 or 1");
    const double c = std::cos(alpha), s = std::sin(alpha);
    const double e = which == 0 ? 1.0 : -1.0;  // sign of the inner 2x2 block
    Matrix4d r;
    r << c, 0, 0, -s,
         0, c, -e * s, 0,
         0, e * s, c, 0,
         s, 0, 0, c;
    return r;
}

PhasePoint8 chi_action(int which, double alpha, const PhasePoint8& z) {
    const Matrix4d r = chi_matrix(which, alpha);
    return {Quat::from_coeffs(r * z.q.coeffs()), Quat::from_coeffs(r * z.p.coeffs())};
}

namespace {

Quat basis_quat(int i) {
    Quat e = Quat::zero();
    switch (i) {
        case 0: e.w = 1; break;
        case 1: e.x = 1; break;
        case 2: e.y = 1; break;
        default: e.z = 1; break;
    }
    return e;
}

}  // namespace

std::array<Vector8d, 3> ks_position_gradients(const PhasePoint8& z, DefiningVector dv) {
    const Quat a = dv.quat();
    std::array<Vector8d, 3> grads;
    for (auto& g : grads) g.setZero();
    for (int i = 0; i < 4; ++i) {
        const Quat e = basis_quat(i);
        const Quat d = mul(conj(e), mul(a, z.q)) + mul(conj(z.q), mul(a, e));
        const Vector3d v = d.vec();
        for (int c = 0; c < 3; ++c) grads[c][i] = v[c];
    }
    return grads;
}

std::array<Vector8d, 3> ks_momentum_gradients(const PhasePoint8& z, DefiningVector dv) {
    const Quat a = dv.quat();
    const double denom = 2 * norm_squared(z.q);
    if (denom == 0) throw std::domain_error("ks_momentum_gradients: q = 0");
    const Quat numerator = mul(conj(z.q), mul(a, z.p));
    const Vector3d y = numerator.vec() / denom;
    std::array<Vector8d, 3> grads;
    for (auto& g : grads) g.setZero();
    const Vector4d qc = z.q.coeffs();
    for (int i = 0; i < 4; ++i) {
        const Quat e = basis_quat(i);
        const Vector3d dnum_dq = mul(conj(e), mul(a, z.p)).vec();
        const Vector3d dnum_dp = mul(conj(z.q), mul(a, e)).vec();
        for (int c = 0; c < 3; ++c) {
            grads[c][i] = (dnum_dq[c] - y[c] * 4 * qc[i]) / denom;
            grads[c][4 + i] = dnum_dp[c] / denom;
        }
    }
    return grads;
}

PhasePoint8 ks_preimage(const Vector3d& x, const Vector3d& y, double gauge_psi) {
    if (x.norm() == 0) throw std::domain_error("ks_preimage: |x| = 0");
    if (x.head<2>().squaredNorm() == 0)
        throw std::domain_error("ks_preimage: x1 = x2 = 0 (chart-singular axis)");
    const SphericalChart sph = cartesian_to_spherical({x, y});
    EulerChart c;
    c.rho = sph.rho;
    c.phi = sph.phi;
    c.theta = sph.theta;
    c.psi = gauge_psi;
    c.P = sph.P;
    c.Phi = sph.Phi;
    c.Theta = sph.Theta;
    c.Psi = 0.0;  // twin-bilinear constraint
    return euler_to_phase(c);
}

}  // namespace ksreg
