#include "ksreg/charts.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ksreg/observables.hpp"
#include "ksreg/sampling.hpp"

namespace ksreg {

namespace {

double wrap_2pi(double a) {
    a = std::fmod(a, 2 * M_PI);
    return a < 0 ? a + 2 * M_PI : a;
}

void check_euler_domain(const EulerChart& c) {
    if (!(c.rho > 0)) throw std::domain_error("euler chart: rho <= 0");
    if (std::abs(std::sin(c.theta)) < 1e-13)
        throw std::domain_error("euler chart: sin(theta) = 0 (chart singularity)");
}

// dq/d(rho, phi, theta, psi) columns in that order.
Matrix4d euler_position_jacobian(const EulerChart& c) {
    const double s = std::sqrt(c.rho);
    const double c2 = std::cos(c.theta / 2), s2 = std::sin(c.theta / 2);
    const double A = (c.phi + c.psi) / 2, B = (c.phi - c.psi) / 2;
    const double sA = std::sin(A), cA = std::cos(A), sB = std::sin(B), cB = std::cos(B);
    Matrix4d J;
    // q1 = s c2 sA, q2 = s s2 cB, q3 = s s2 sB, q4 = s c2 cA
    J.col(0) << c2 * sA, s2 * cB, s2 * sB, c2 * cA;
    J.col(0) /= 2 * s;
    J.col(1) << s * c2 * cA / 2, -s * s2 * sB / 2, s * s2 * cB / 2, -s * c2 * sA / 2;
    J.col(2) << -s * s2 * sA / 2, s * c2 * cB / 2, s * c2 * sB / 2, -s * s2 * cA / 2;
    J.col(3) << s * c2 * cA / 2, s * s2 * sB / 2, -s * s2 * cB / 2, -s * c2 * sA / 2;
    return J;
}

}  // namespace

const std::array<const char*, 8>& EulerChart::header() {
    static const std::array<const char*, 8> h = {"rho", "phi", "theta", "psi",
                                                 "P", "Phi", "Theta", "Psi"};
    return h;
}

const std::array<const char*, 8>& AndoyerChart::header() {
    static const std::array<const char*, 8> h = {"rho", "lambda", "mu", "nu",
                                                 "P", "Lambda", "M", "N"};
    return h;
}

PhasePoint8 euler_to_phase(const EulerChart& c) {
    check_euler_domain(c);
    const double s = std::sqrt(c.rho);
    const double c2 = std::cos(c.theta / 2), s2 = std::sin(c.theta / 2);
    const double A = (c.phi + c.psi) / 2, B = (c.phi - c.psi) / 2;
    const Quat q{s * c2 * std::sin(A), s * s2 * std::cos(B), s * s2 * std::sin(B),
                 s * c2 * std::cos(A)};
    // Canonical lift: sum p_i dq_i = P drho + Phi dphi + Theta dtheta + Psi dpsi.
    const Matrix4d J = euler_position_jacobian(c);
    Vector4d rhs;
    rhs << c.P, c.Phi, c.Theta, c.Psi;
    const Vector4d p = J.transpose().partialPivLu().solve(rhs);
    return {q, Quat::from_coeffs(p)};
}

EulerChart phase_to_euler(const PhasePoint8& z) {
    const Vector4d q = z.q.coeffs(), p = z.p.coeffs();
    const double rho = q.squaredNorm();
    if (rho == 0) throw std::domain_error("phase_to_euler: q = 0");
    const double a14 = q[0] * q[0] + q[3] * q[3];
    const double a23 = q[1] * q[1] + q[2] * q[2];
    const double delta = std::sqrt(a14 * a23);
    if (delta < 1e-13 * rho)
        throw std::domain_error(
            "phase_to_euler: point on an exclusion manifold (q1=q4=0 or q2=q3=0)");

    EulerChart c;
    c.rho = rho;
    c.theta = std::atan2(2 * delta, a14 - a23);  // sin = 2 Delta / rho >= 0
    c.phi = wrap_2pi(std::atan2(q[0] * q[1] + q[2] * q[3], q[1] * q[3] - q[0] * q[2]));
    c.psi = wrap_2pi(std::atan2(q[0] * q[1] - q[2] * q[3], q[1] * q[3] + q[0] * q[2]));
    c.P = q.dot(p) / (2 * rho);
    // Theta from the transposed-Jacobian relation Theta = (dq/dtheta) . p,
    // written in the chart's own coordinates. (The cross-paired published
    // expression does not invert the canonical lift; this one does, which the
    // round-trip and symplecticity tests pin down.)
    c.Theta = (a14 * (q[1] * p[1] + q[2] * p[2]) - a23 * (q[0] * p[0] + q[3] * p[3])) /
              (2 * delta);
    c.Phi = 0.5 * (p[0] * q[3] - p[3] * q[0] - p[1] * q[2] + p[2] * q[1]);
    c.Psi = 0.5 * (p[0] * q[3] - p[3] * q[0] + p[1] * q[2] - p[2] * q[1]);
    return c;
}

PhasePoint6 spherical_to_cartesian(const SphericalChart& c) {
    if (!(c.rho > 0)) throw std::domain_error("spherical chart: rho <= 0");
    const double st = std::sin(c.theta), ct = std::cos(c.theta);
    if (std::abs(st) < 1e-13) throw std::domain_error("spherical chart: sin(theta) = 0");
    const double sp = std::sin(c.phi), cp = std::cos(c.phi);
    Vector3d x{c.rho * st * cp, c.rho * st * sp, c.rho * ct};
    const double common = c.Theta * std::sin(2 * c.theta) + 2 * c.P * c.rho * st * st;
    Vector3d y;
    y[0] = (cp * common - 2 * c.Phi * sp) / (2 * c.rho * st);
    y[1] = (sp * common + 2 * c.Phi * cp) / (2 * c.rho * st);
    y[2] = c.P * ct - c.Theta * st / c.rho;
    return {x, y};
}

SphericalChart cartesian_to_spherical(const PhasePoint6& pt) {
    const double rho = pt.x.norm();
    if (rho == 0) throw std::domain_error("cartesian_to_spherical: x = 0");
    if (pt.x.head<2>().squaredNorm() == 0)
        throw std::domain_error("cartesian_to_spherical: x on the polar axis (x1 = x2 = 0)");
    SphericalChart c;
    c.rho = rho;
    c.theta = std::acos(pt.x[2] / rho);
    c.phi = wrap_2pi(std::atan2(pt.x[1], pt.x[0]));
    c.P = pt.x.dot(pt.y) / rho;
    c.Phi = pt.x[0] * pt.y[1] - pt.x[1] * pt.y[0];
    const double st = std::sin(c.theta);
    c.Theta = (c.P * std::cos(c.theta) - pt.y[2]) * rho / st;
    return c;
}

namespace {

void check_andoyer_domain(const AndoyerChart& c) {
    if (!(c.rho > 0)) throw std::domain_error("andoyer chart: rho <= 0");
    if (!(c.M > 0))
        throw std::domain_error("andoyer chart: M <= 0 (undefined for rectilinear motion)");
    if (std::abs(c.N) > c.M) throw std::domain_error("andoyer chart: |N| > M");
    if (std::abs(c.Lambda) > c.M) throw std::domain_error("andoyer chart: |Lambda| > M");
}

PhasePoint8 andoyer_build(const AndoyerChart& c, double angle_scale, double prefactor,
                          double w1, bool left_side, double wj_sign) {
    const double inclination = std::acos(std::clamp(c.Lambda / c.M, -1.0, 1.0));
    const double tilt = std::acos(std::clamp(c.N / c.M, -1.0, 1.0));
    const double s = angle_scale;
    const Quat R = mul(mul(rotor(Axis::k, s * c.nu), rotor(Axis::i, s * tilt)),
                       mul(mul(rotor(Axis::k, s * c.mu_angle), rotor(Axis::i, s * inclination)),
                           rotor(Axis::k, s * c.lambda)));
    const Quat q = std::sqrt(c.rho) * R;
    const double transverse = 2 * std::sqrt(std::max(0.0, c.M * c.M - c.N * c.N));
    const Quat w{w1, transverse * std::sin(c.nu), wj_sign * transverse * std::cos(c.nu),
                 2 * c.N};
    const Quat p = left_side ? prefactor * mul(w, q) : prefactor * mul(q, conj(w));
    return {q, p};
}

PhasePoint8 andoyer_printed(const AndoyerChart& c) {
    return andoyer_build(c, 1.0, 1.0 / (4 * c.rho * c.rho), c.rho * c.P, false, +1.0);
}

PhasePoint8 andoyer_calibrated(const AndoyerChart& c) {
    return andoyer_build(c, 0.5, 1.0 / c.rho, 2 * c.rho * c.P, true, -1.0);
}

}  // namespace

PhasePoint8 andoyer_to_phase(const AndoyerChart& c, AndoyerConvention conv) {
    check_andoyer_domain(c);
    return conv == AndoyerConvention::printed ? andoyer_printed(c) : andoyer_calibrated(c);
}

PhasePoint4 polar_to_cartesian2(double rho, double mu_angle, double P, double M) {
    if (!(rho > 0)) throw std::domain_error("polar chart: rho <= 0");
    const double c = std::cos(mu_angle), s = std::sin(mu_angle);
    return {{rho * c, rho * s}, {P * c - (M / rho) * s, P * s + (M / rho) * c}};
}

std::string AndoyerCalibration::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"sweep\":[";
    for (size_t i = 0; i < sweep.size(); ++i) {
        const auto& e = sweep[i];
        os << (i ? ",{" : "{") << "\"prefactor\":\"" << e.prefactor << "\",\"w1\":\"" << e.w1
           << "\",\"esat_residual\":" << e.esat_residual
           << ",\"centralizer_residual\":" << e.centralizer_residual
           << ",\"selected\":" << (e.selected ? "true" : "false") << "}";
    }
    os << "],\"unique_winner\":" << (unique_winner ? "true" : "false")
       << ",\"chosen_prefactor\":\"" << chosen_prefactor << "\",\"chosen_w1\":\"" << chosen_w1
       << "\",\"symplectic_defect\":" << symplectic_defect
       << ",\"xi0_vs_minus_2N\":" << xi0_vs_minus_2N
       << ",\"xi1_vs_minus_2Lambda\":" << xi1_vs_minus_2Lambda << "}";
    return os.str();
}

const AndoyerCalibration& calibrate_andoyer() {
    static const AndoyerCalibration result = [] {
        AndoyerCalibration cal;
        const double omega = 1.25, h = 0.8;
        const struct {
            const char* label;
            double value_at(double rho) const { return kind == 0 ? 1 / (4 * rho * rho)
                                                     : kind == 1 ? 1 / (2 * rho)
                                                                 : 1 / rho; }
            int kind;
        } prefs[3] = {{"1/(4rho^2)", 0}, {"1/(2rho)", 1}, {"1/rho", 2}};
        const char* w1_labels[2] = {"rho*P", "2*rho*P"};

        Rng rng(811);
        std::vector<AndoyerChart> charts;
        for (int i = 0; i < 40; ++i)
            charts.push_back(AndoyerChart::from_flat(sample_andoyer_domain(rng)));

        int idx = 0, selected_count = 0;
        for (int pi = 0; pi < 3; ++pi) {
            for (int wi = 0; wi < 2; ++wi) {
                AndoyerCalibrationEntry entry;
                entry.prefactor = prefs[pi].label;
                entry.w1 = w1_labels[wi];
                double esat = 0, cent = 0;
                for (const AndoyerChart& c : charts) {
                    const double w1 = (wi == 0 ? 1.0 : 2.0) * c.rho * c.P;
                    // The sweep probes only the momentum scaling; the scale
                    // residuals are independent of rotor-angle convention.
                    const PhasePoint8 z =
                        andoyer_build(c, 0.5, prefs[pi].value_at(c.rho), w1, true, -1.0);
                    const double h_osc =
                        0.5 * (norm_squared(z.p) + omega * norm_squared(z.q));
                    const double lhs = (h_osc - h) / (4 * c.rho) - omega / 8;
                    const double rhs =
                        0.5 * (c.P * c.P + c.M * c.M / (c.rho * c.rho)) - (h / 4) / c.rho;
                    esat = std::max(esat, std::abs(lhs - rhs));
                    cent = std::max(cent,
                                    std::abs(eval(ObservableId::centralizerM, z) - c.M));
                }
                entry.esat_residual = esat;
                entry.centralizer_residual = cent;
                entry.selected = esat < 1e-10 && cent < 1e-10;
                if (entry.selected) {
                    ++selected_count;
                    cal.chosen_prefactor = entry.prefactor;
                    cal.chosen_w1 = entry.w1;
                }
                cal.sweep[idx++] = entry;
            }
        }
        cal.unique_winner = selected_count == 1;

        const Matrix8d omega_mat = symplectic_matrix<4>();
        for (int i = 0; i < 10; ++i) {
            const AndoyerChart c = charts[i];
            const Matrix8d jac = numerical_jacobian8(
                [](const Vector8d& v) {
                    return andoyer_to_phase(AndoyerChart::from_flat(v),
                                            AndoyerConvention::calibrated)
                        .flat();
                },
                c.flat());
            cal.symplectic_defect =
                std::max(cal.symplectic_defect,
                         (jac.transpose() * omega_mat * jac - omega_mat).cwiseAbs().maxCoeff());
            const PhasePoint8 z = andoyer_to_phase(c, AndoyerConvention::calibrated);
            cal.xi0_vs_minus_2N =
                std::max(cal.xi0_vs_minus_2N, std::abs(eval(ObservableId::xi0, z) + 2 * c.N));
            cal.xi1_vs_minus_2Lambda = std::max(
                cal.xi1_vs_minus_2Lambda, std::abs(eval(ObservableId::xi1, z) + 2 * c.Lambda));
        }
        return cal;
    }();
    return result;
}

}  // namespace ksreg
