#pragma once

#include <array>
#include <cmath>
#include <string>

#include "ksreg/types.hpp"

namespace ksreg {

// Projective Euler chart: Euler-angle coordinates extended by the radial pair
// (rho, P), with rho = |q|^2 on the image. Domain: rho > 0, theta in (0, pi),
// phi and psi in (0, 2*pi). The cyclic angles' momenta are half the bilinear
// functions: Phi = Xi1/2, Psi = Xi0/2.
struct EulerChart {
    double rho = 1, phi = 0, theta = M_PI_2, psi = 0;
    double P = 0, Phi = 0, Theta = 0, Psi = 0;

    Vector8d flat() const {
        Vector8d v;
        v << rho, phi, theta, psi, P, Phi, Theta, Psi;
        return v;
    }
    static EulerChart from_flat(const Vector8d& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    }
    static const std::array<const char*, 8>& header();
};

// Projective Andoyer chart: the spherical-rotor block of the Euler chart is
// replaced by its action-angle variables. M > 0 is required (the chart is
// undefined for rectilinear motion); |Lambda| <= M and |N| <= M.
struct AndoyerChart {
    double rho = 1, lambda = 0, mu_angle = 0, nu = 0;
    double P = 0, Lambda = 0, M = 1, N = 0;

    Vector8d flat() const {
        Vector8d v;
        v << rho, lambda, mu_angle, nu, P, Lambda, M, N;
        return v;
    }
    static AndoyerChart from_flat(const Vector8d& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    }
    static const std::array<const char*, 8>& header();
};

// Classical spherical chart of T*R^3 with momenta (P, Theta, Phi).
struct SphericalChart {
    double rho = 1, theta = M_PI_2, phi = 0;
    double P = 0, Theta = 0, Phi = 0;

    Vector6d flat() const {
        Vector6d v;
        v << rho, theta, phi, P, Theta, Phi;
        return v;
    }
    static SphericalChart from_flat(const Vector6d& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }
};

// Which Andoyer momentum normalization to use.
//  printed:    q built from full-angle rotors, p = q w^* / (4 rho^2) with
//              w1 = rho P, exactly as published. Not canonical; kept so the
//              discrepancy is reportable.
//  calibrated: half-angle rotors, p = (1/rho) w q with w1 = 2 rho P and the
//              j-component of w negated. Canonical (J^T Omega J = Omega) and
//              satisfies the planar-Kepler reduction identity; the selected
//              prefactor/w1 pair comes from calibrate_andoyer().
enum class AndoyerConvention { printed, calibrated };

// Chart -> phase space. q from the trigonometric parameterization; p solves
// the transposed-Jacobian system (dq/d(rho,phi,theta,psi))^T p = (P,Phi,Theta,Psi).
// Rejects rho <= 0 and sin(theta) = 0.
PhasePoint8 euler_to_phase(const EulerChart& c);

// Phase space -> chart, via two-argument arctangents on the (sin, cos) pairs.
// Rejects the exclusion manifolds q1 = q4 = 0 and q2 = q3 = 0
// (Delta < 1e-13 |q|^2). Round trip with euler_to_phase is the identity.
EulerChart phase_to_euler(const PhasePoint8& z);

// Spherical chart of T*R^3_0; rejects sin(theta) = 0 and rho <= 0.
PhasePoint6 spherical_to_cartesian(const SphericalChart& c);

// Inverse of the above; rejects points on the polar axis (x1 = x2 = 0).
SphericalChart cartesian_to_spherical(const PhasePoint6& pt);

// Andoyer chart -> phase space. Rejects M <= 0, |N| > M, |Lambda| > M, rho <= 0.
PhasePoint8 andoyer_to_phase(const AndoyerChart& c,
                             AndoyerConvention conv = AndoyerConvention::calibrated);

// Planar polar chart: x = rho (cos mu, sin mu),
// y = P (cos mu, sin mu) + (M/rho)(-sin mu, cos mu). Rejects rho <= 0.
PhasePoint4 polar_to_cartesian2(double rho, double mu_angle, double P, double M);

// One candidate of the Andoyer momentum-normalization sweep.
struct AndoyerCalibrationEntry {
    std::string prefactor;      // "1/(4rho^2)", "1/(2rho)", "1/rho"
    std::string w1;             // "rho*P", "2*rho*P"
    double esat_residual = 0;   // reduction-identity misfit (manifold offset removed)
    double centralizer_residual = 0;  // |M_eval - chart M|
    bool selected = false;
};

struct AndoyerCalibration {
    std::array<AndoyerCalibrationEntry, 6> sweep;
    bool unique_winner = false;
    std::string chosen_prefactor;
    std::string chosen_w1;
    // Properties of the calibrated chart, measured on the calibration sample:
    double symplectic_defect = 0;   // max |J^T Omega J - Omega|
    double xi0_vs_minus_2N = 0;     // |Xi0(z) + 2N|
    double xi1_vs_minus_2Lambda = 0;
    std::string to_json() const;
};

// Sweeps prefactor x w1 over the 3x2 grid, selecting the unique pair that
// satisfies both the centralizer identity M_eval = M and the planar-Kepler
// reduction identity to 1e-10 on seeded random charts. Also measures the
// calibrated chart's symplecticity and its bilinear values.
const AndoyerCalibration& calibrate_andoyer();

}  // namespace ksreg
