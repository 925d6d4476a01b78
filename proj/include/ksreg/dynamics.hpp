#pragma once

#include <string>
#include <vector>

#include "ksreg/types.hpp"

namespace ksreg {

// Every Hamiltonian in the library, identified by chart and functional form.
//
//  osc4                 4-D isotropic oscillator (q,p) in R^8
//  kepler3              spatial Kepler (x,y) in T*R^3_0
//  kepler2              planar Kepler (x,y) in T*R^2_0
//  aux_kepler2          planar auxiliary Hamiltonian |x|/h (K + 2h^2) + mu/h
//  euler_osc            oscillator in the projective Euler chart
//  euler_separable_rho  radial 1-DOF part of (rho/4)(H - h)
//  euler_separable_theta spherical-rotor 1-DOF part of the same split
//  euler_regularized    (1/(4 rho))(H - h) rearranged; Kepler plus coupling
//  kepler_spherical     spatial Kepler in spherical coordinates, gamma = h/4
//  andoyer_regularized  planar Kepler in (rho, P, M), gamma = h/4
enum class HamiltonianKind {
    osc4,
    kepler3,
    kepler2,
    aux_kepler2,
    euler_osc,
    euler_separable_rho,
    euler_separable_theta,
    euler_regularized,
    kepler_spherical,
    andoyer_regularized,
};

HamiltonianKind hamiltonian_kind_from_string(const std::string& s);
std::string hamiltonian_kind_name(HamiltonianKind k);

struct HamiltonianSpec {
    HamiltonianKind kind = HamiltonianKind::osc4;
    double omega = 1.0;       // oscillator strength, >= 0
    double grav_param = 1.0;  // mu > 0 for the Kepler kinds
    double h = 0.0;           // fixed energy level of the regularizations

    // gamma is always derived, never stored, so it cannot drift out of sync.
    double gamma() const { return h / 4.0; }

    int dimension() const;    // expected state length
};

using StateVector = Eigen::VectorXd;

// Value of the Hamiltonian. Rejects states outside the chart domain with the
// offending coordinate named.
double ham_value(const HamiltonianSpec& spec, const StateVector& s);

// Canonical vector field (dq/dt, dp/dt) from analytic gradients.
StateVector ham_field(const HamiltonianSpec& spec, const StateVector& s);

// Central-difference field for gradient cross-checks; independent of the
// analytic route above.
StateVector ham_field_fd(const HamiltonianSpec& spec, const StateVector& s);

enum class RegularizationMode {
    poincare_rho_over_4,  // d tau = (rho/4) ds; separable split
    poincare_inv_4rho,    // d tau = ds / (4 rho); Kepler form
};

struct RegularizationResult {
    std::vector<HamiltonianSpec> parts;  // one or two specs on the Euler chart
    double manifold_value = 0;           // value of the new Hamiltonian on H = h
};

// Fictitious-time regularizations of the oscillator in the Euler chart.
// poincare_rho_over_4 returns the separable pair {K_rho, K_theta} with
// manifold value 0; poincare_inv_4rho returns the single rearranged spec with
// manifold value -omega/8. Rejects kinds other than euler_osc.
RegularizationResult regularize(const HamiltonianSpec& spec, RegularizationMode mode, double h);

// Partial derivatives with respect to the cyclic momenta Phi and Psi, used by
// the quadratures. Defined for the Euler-chart kinds.
double dH_dPhi(const HamiltonianSpec& spec, const StateVector& s);
double dH_dPsi(const HamiltonianSpec& spec, const StateVector& s);

struct QuadratureResult {
    std::vector<double> phi;  // cumulative integral of dH/dPhi
    std::vector<double> psi;  // cumulative integral of dH/dPsi
};

class Trajectory;  // defined in flow.hpp

// Cumulative trapezoidal quadratures of the cyclic angles along a trajectory
// integrated under a Euler-chart spec. Rejects trajectories whose Phi or Psi
// drift exceeds 1e-8.
QuadratureResult quadratures(const HamiltonianSpec& spec, const Trajectory& traj);

}  // namespace ksreg
