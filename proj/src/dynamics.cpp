#include "ksreg/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ksreg/flow.hpp"

namespace ksreg {

namespace {

// Euler-chart state layout: (rho, phi, theta, psi, P, Phi, Theta, Psi).
constexpr int RHO = 0, PHI = 1, THETA = 2, PSI = 3, PP = 4, PPHI = 5, PTHETA = 6, PPSI = 7;

void require_size(const HamiltonianSpec& spec, const StateVector& s) {
    if (s.size() != spec.dimension())
        throw std::invalid_argument("state has length " + std::to_string(s.size()) +
                                    ", expected " + std::to_string(spec.dimension()) +
                                    " for " + hamiltonian_kind_name(spec.kind));
}

void require_chart(const StateVector& s, bool need_theta) {
    if (!(s[RHO] > 0)) throw std::domain_error("chart state: rho <= 0");
    if (need_theta && std::abs(std::sin(s[THETA])) <= 1e-8)
        throw std::domain_error("chart state: sin(theta) too small (theta near chart singularity)");
}

double spherical_rotor_value(double theta, double Phi, double Psi, double Theta) {
    const double st = std::sin(theta);
    return 0.5 * (Theta * Theta +
                  (Phi * Phi + Psi * Psi - 2 * Phi * Psi * std::cos(theta)) / (st * st));
}

// -d/dtheta of (Phi^2 + Psi^2 - 2 Phi Psi cos th) / (2 sin^2 th).
double spherical_rotor_torque(double theta, double Phi, double Psi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double angular = Phi * Phi + Psi * Psi - 2 * Phi * Psi * ct;
    return (ct * angular - Phi * Psi * st * st) / (st * st * st);
}

}  // namespace

HamiltonianKind hamiltonian_kind_from_string(const std::string& s) {
    if (s == "osc4") return HamiltonianKind::osc4;
    if (s == "kepler3") return HamiltonianKind::kepler3;
    if (s == "kepler2") return HamiltonianKind::kepler2;
    if (s == "aux_kepler2") return HamiltonianKind::aux_kepler2;
    if (s == "euler_osc") return HamiltonianKind::euler_osc;
    if (s == "euler_separable_rho") return HamiltonianKind::euler_separable_rho;
    if (s == "euler_separable_theta") return HamiltonianKind::euler_separable_theta;
    if (s == "euler_regularized") return HamiltonianKind::euler_regularized;
    if (s == "kepler_spherical") return HamiltonianKind::kepler_spherical;
    if (s == "andoyer_regularized") return HamiltonianKind::andoyer_regularized;
    throw std::invalid_argument("unknown hamiltonian kind: " + s);
}

std::string hamiltonian_kind_name(HamiltonianKind k) {
    switch (k) {
        case HamiltonianKind::osc4: return "osc4";
        case HamiltonianKind::kepler3: return "kepler3";
        case HamiltonianKind::kepler2: return "kepler2";
        case HamiltonianKind::aux_kepler2: return "aux_kepler2";
        case HamiltonianKind::euler_osc: return "euler_osc";
        case HamiltonianKind::euler_separable_rho: return "euler_separable_rho";
        case HamiltonianKind::euler_separable_theta: return "euler_separable_theta";
        case HamiltonianKind::euler_regularized: return "euler_regularized";
        case HamiltonianKind::kepler_spherical: return "kepler_spherical";
        case HamiltonianKind::andoyer_regularized: return "andoyer_regularized";
    }
    return "?";
}

int HamiltonianSpec::dimension() const {
    switch (kind) {
        case HamiltonianKind::osc4: return 8;
        case HamiltonianKind::kepler3: return 6;
        case HamiltonianKind::kepler2:
        case HamiltonianKind::aux_kepler2: return 4;
        case HamiltonianKind::kepler_spherical: return 6;
        default: return 8;  // Euler / Andoyer chart kinds
    }
}

double ham_value(const HamiltonianSpec& spec, const StateVector& s) {
    require_size(spec, s);
    switch (spec.kind) {
        case HamiltonianKind::osc4:
            return 0.5 * (s.tail<4>().squaredNorm() + spec.omega * s.head<4>().squaredNorm());
        case HamiltonianKind::kepler3: {
            const double r = s.head<3>().norm();
            if (r == 0) throw std::domain_error("kepler3: |x| = 0");
            return 0.5 * s.tail<3>().squaredNorm() - spec.grav_param / r;
        }
        case HamiltonianKind::kepler2: {
            const double r = s.head<2>().norm();
            if (r == 0) throw std::domain_error("kepler2: |x| = 0");
            return 0.5 * s.tail<2>().squaredNorm() - spec.grav_param / r;
        }
        case HamiltonianKind::aux_kepler2: {
            const double r = s.head<2>().norm();
            if (r == 0) throw std::domain_error("aux_kepler2: |x| = 0");
            if (spec.h == 0) throw std::domain_error("aux_kepler2: h = 0");
            const double kepler = 0.5 * s.tail<2>().squaredNorm() - spec.grav_param / r;
            return (r / spec.h) * (kepler + 2 * spec.h * spec.h) + spec.grav_param / spec.h;
        }
        case HamiltonianKind::euler_osc: {
            require_chart(s, true);
            const double rho = s[RHO];
            return rho * spec.omega / 2 + 2 * rho * s[PP] * s[PP] +
                   (4.0 / rho) * spherical_rotor_value(s[THETA], s[PPHI], s[PPSI], s[PTHETA]);
        }
        case HamiltonianKind::euler_separable_rho: {
            require_chart(s, false);
            const double rho = s[RHO], P = s[PP];
            return spec.omega * rho * rho / 8 + rho * rho * P * P / 2 - spec.h * rho / 4;
        }
        case HamiltonianKind::euler_separable_theta:
            require_chart(s, true);
            return spherical_rotor_value(s[THETA], s[PPHI], s[PPSI], s[PTHETA]);
        case HamiltonianKind::euler_regularized: {
            require_chart(s, true);
            const double rho = s[RHO];
            return 0.5 * s[PP] * s[PP] +
                   spherical_rotor_value(s[THETA], s[PPHI], s[PPSI], s[PTHETA]) / (rho * rho) -
                   spec.h / (4 * rho);
        }
        case HamiltonianKind::kepler_spherical: {
            // state (rho, theta, phi, P, Theta, Phi)
            if (!(s[0] > 0)) throw std::domain_error("spherical state: rho <= 0");
            const double st = std::sin(s[1]);
            if (std::abs(st) <= 1e-8)
                throw std::domain_error("spherical state: sin(theta) too small");
            const double rho = s[0];
            return 0.5 * (s[3] * s[3] + s[4] * s[4] / (rho * rho) +
                          s[5] * s[5] / (rho * rho * st * st)) -
                   spec.gamma() / rho;
        }
        case HamiltonianKind::andoyer_regularized: {
            if (!(s[RHO] > 0)) throw std::domain_error("andoyer state: rho <= 0");
            const double rho = s[RHO], M = s[6];
            return 0.5 * (s[PP] * s[PP] + M * M / (rho * rho)) - spec.gamma() / rho;
        }
    }
    throw std::logic_error("unreachable");
}

StateVector ham_field(const HamiltonianSpec& spec, const StateVector& s) {
    require_size(spec, s);
    StateVector f = StateVector::Zero(s.size());
    switch (spec.kind) {
        case HamiltonianKind::osc4:
            f.head<4>() = s.tail<4>();
            f.tail<4>() = -spec.omega * s.head<4>();
            return f;
        case HamiltonianKind::kepler3: {
            const double r = s.head<3>().norm();
            if (r == 0) throw std::domain_error("kepler3: |x| = 0");
            f.head<3>() = s.tail<3>();
            f.tail<3>() = -spec.grav_param * s.head<3>() / (r * r * r);
            return f;
        }
        case HamiltonianKind::kepler2: {
            const double r = s.head<2>().norm();
            if (r == 0) throw std::domain_error("kepler2: |x| = 0");
            f.head<2>() = s.tail<2>();
            f.tail<2>() = -spec.grav_param * s.head<2>() / (r * r * r);
            return f;
        }
        case HamiltonianKind::aux_kepler2: {
            const Vector2d x = s.head<2>(), y = s.tail<2>();
            const double r = x.norm();
            if (r == 0) throw std::domain_error("aux_kepler2: |x| = 0");
            if (spec.h == 0) throw std::domain_error("aux_kepler2: h = 0");
            const double kepler = 0.5 * y.squaredNorm() - spec.grav_param / r;
            f.head<2>() = (r / spec.h) * y;
            f.tail<2>() = -(r / spec.h) * (spec.grav_param * x / (r * r * r)) -
                          (x / (spec.h * r)) * (kepler + 2 * spec.h * spec.h);
            return f;
        }
        case HamiltonianKind::euler_osc: {
            require_chart(s, true);
            const double rho = s[RHO], st = std::sin(s[THETA]), ct = std::cos(s[THETA]);
            const double Phi = s[PPHI], Psi = s[PPSI], Theta = s[PTHETA], P = s[PP];
            f[RHO] = 4 * rho * P;
            f[PHI] = (4.0 / rho) * (Phi - Psi * ct) / (st * st);
            f[THETA] = 4 * Theta / rho;
            f[PSI] = (4.0 / rho) * (Psi - Phi * ct) / (st * st);
            f[PP] = -(spec.omega / 2 + 2 * P * P -
                      (4.0 / (rho * rho)) *
                          spherical_rotor_value(s[THETA], Phi, Psi, Theta));
            f[PTHETA] = (4.0 / rho) * spherical_rotor_torque(s[THETA], Phi, Psi);
            return f;
        }
        case HamiltonianKind::euler_separable_rho: {
            require_chart(s, false);
            const double rho = s[RHO], P = s[PP];
            f[RHO] = rho * rho * P;
            f[PP] = -(spec.omega * rho / 4 + rho * P * P - spec.h / 4);
            return f;
        }
        case HamiltonianKind::euler_separable_theta: {
            require_chart(s, true);
            const double st = std::sin(s[THETA]), ct = std::cos(s[THETA]);
            f[THETA] = s[PTHETA];
            f[PTHETA] = spherical_rotor_torque(s[THETA], s[PPHI], s[PPSI]);
            f[PHI] = (s[PPHI] - s[PPSI] * ct) / (st * st);
            f[PSI] = (s[PPSI] - s[PPHI] * ct) / (st * st);
            return f;
        }
        case HamiltonianKind::euler_regularized: {
            require_chart(s, true);
            const double rho = s[RHO], st = std::sin(s[THETA]), ct = std::cos(s[THETA]);
            const double Phi = s[PPHI], Psi = s[PPSI], Theta = s[PTHETA];
            f[RHO] = s[PP];
            f[PHI] = (Phi - Psi * ct) / (rho * rho * st * st);
            f[THETA] = Theta / (rho * rho);
            f[PSI] = (Psi - Phi * ct) / (rho * rho * st * st);
            f[PP] = 2 * spherical_rotor_value(s[THETA], Phi, Psi, Theta) / (rho * rho * rho) -
                    spec.h / (4 * rho * rho);
            f[PTHETA] = spherical_rotor_torque(s[THETA], Phi, Psi) / (rho * rho);
            return f;
        }
        case HamiltonianKind::kepler_spherical: {
            if (!(s[0] > 0)) throw std::domain_error("spherical state: rho <= 0");
            const double rho = s[0], st = std::sin(s[1]), ct = std::cos(s[1]);
            if (std::abs(st) <= 1e-8)
                throw std::domain_error("spherical state: sin(theta) too small");
            const double P = s[3], Theta = s[4], Phi = s[5];
            f[0] = P;
            f[1] = Theta / (rho * rho);
            f[2] = Phi / (rho * rho * st * st);
            f[3] = Theta * Theta / (rho * rho * rho) +
                   Phi * Phi / (rho * rho * rho * st * st) - spec.gamma() / (rho * rho);
            f[4] = Phi * Phi * ct / (rho * rho * st * st * st);
            f[5] = 0;
            return f;
        }
        case HamiltonianKind::andoyer_regularized: {
            if (!(s[RHO] > 0)) throw std::domain_error("andoyer state: rho <= 0");
            const double rho = s[RHO], M = s[6];
            f[RHO] = s[PP];
            f[2] = M / (rho * rho);  // mu advances; lambda, nu are constant
            f[PP] = M * M / (rho * rho * rho) - spec.gamma() / (rho * rho);
            return f;
        }
    }
    throw std::logic_error("unreachable");
}

StateVector ham_field_fd(const HamiltonianSpec& spec, const StateVector& s) {
    require_size(spec, s);
    const int n = static_cast<int>(s.size());
    const int half = n / 2;
    const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
    StateVector grad(n), f(n);
    for (int i = 0; i < n; ++i) {
        const double step = cbrt_eps * std::max(1.0, std::abs(s[i]));
        StateVector sp = s, sm = s;
        sp[i] += step;
        sm[i] -= step;
        grad[i] = (ham_value(spec, sp) - ham_value(spec, sm)) / (2 * step);
    }
    f.head(half) = grad.tail(half);
    f.tail(half) = -grad.head(half);
    return f;
}

RegularizationResult regularize(const HamiltonianSpec& spec, RegularizationMode mode, double h) {
    if (spec.kind != HamiltonianKind::euler_osc)
        throw std::invalid_argument("regularize: expected euler_osc, got " +
                                    hamiltonian_kind_name(spec.kind));
    RegularizationResult result;
    if (mode == RegularizationMode::poincare_rho_over_4) {
        HamiltonianSpec radial = spec, rotor = spec;
        radial.kind = HamiltonianKind::euler_separable_rho;
        radial.h = h;
        rotor.kind = HamiltonianKind::euler_separable_theta;
        rotor.h = h;
        result.parts = {radial, rotor};
        result.manifold_value = 0;
    } else {
        HamiltonianSpec reg = spec;
        reg.kind = HamiltonianKind::euler_regularized;
        reg.h = h;
        result.parts = {reg};
        result.manifold_value = -spec.omega / 8;
    }
    return result;
}

double dH_dPhi(const HamiltonianSpec& spec, const StateVector& s) {
    require_size(spec, s);
    const double st = std::sin(s[THETA]), ct = std::cos(s[THETA]);
    const double Phi = s[PPHI], Psi = s[PPSI];
    switch (spec.kind) {
        case HamiltonianKind::euler_osc:
            return (4.0 / s[RHO]) * (Phi - Psi * ct) / (st * st);
        case HamiltonianKind::euler_separable_theta:
            return (Phi - Psi * ct) / (st * st);
        case HamiltonianKind::euler_regularized:
            return (Phi - Psi * ct) / (s[RHO] * s[RHO] * st * st);
        default:
            throw std::invalid_argument("dH_dPhi: not a Euler-chart kind");
    }
}

double dH_dPsi(const HamiltonianSpec& spec, const StateVector& s) {
    require_size(spec, s);
    const double st = std::sin(s[THETA]), ct = std::cos(s[THETA]);
    const double Phi = s[PPHI], Psi = s[PPSI];
    switch (spec.kind) {
        case HamiltonianKind::euler_osc:
            return (4.0 / s[RHO]) * (Psi - Phi * ct) / (st * st);
        case HamiltonianKind::euler_separable_theta:
            return (Psi - Phi * ct) / (st * st);
        case HamiltonianKind::euler_regularized:
            return (Psi - Phi * ct) / (s[RHO] * s[RHO] * st * st);
        default:
            throw std::invalid_argument("dH_dPsi: not a Euler-chart kind");
    }
}

QuadratureResult quadratures(const HamiltonianSpec& spec, const Trajectory& traj) {
    const auto& samples = traj.samples();
    if (samples.size() < 2) throw std::invalid_argument("quadratures: trajectory too short");
    const double phi0 = samples.front().state[PPHI], psi0 = samples.front().state[PPSI];
    for (const auto& smp : samples) {
        if (std::abs(smp.state[PPHI] - phi0) > 1e-8 || std::abs(smp.state[PPSI] - psi0) > 1e-8)
            throw std::invalid_argument("quadratures: Phi or Psi drifts beyond 1e-8");
    }
    QuadratureResult out;
    out.phi.resize(samples.size());
    out.psi.resize(samples.size());
    out.phi[0] = out.psi[0] = 0;
    for (size_t i = 1; i < samples.size(); ++i) {
        const double dt = samples[i].s - samples[i - 1].s;
        out.phi[i] = out.phi[i - 1] + 0.5 * dt *
                                          (dH_dPhi(spec, samples[i - 1].state) +
                                           dH_dPhi(spec, samples[i].state));
        out.psi[i] = out.psi[i - 1] + 0.5 * dt *
                                          (dH_dPsi(spec, samples[i - 1].state) +
                                           dH_dPsi(spec, samples[i].state));
    }
    return out;
}

}  // namespace ksreg
