#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ksreg/types.hpp"

namespace ksreg {

// The quadratic phase-space functions spanning sl(2,R) and the two so(3)
// factors, the two bilinear functions, and the centralizer.
enum class ObservableId {
    tau1, tau2, tau3,
    rho1, rho2, rho3,
    sigma1, sigma2, sigma3,
    xi0, xi1,
    centralizerM,
};

// Sign conventions for the rho/sigma triples.
//  printed:   component formulas exactly as published. Under this convention
//             rho3 == xi1 and sigma3 == xi0, but the triples do not close
//             under the Poisson bracket (rho1 and rho2 commute).
//  corrected: momentum maps of left multiplication q -> exp(a*t)q (rho) and
//             right multiplication q -> q exp(a*t) (sigma), a in {i,j,k}.
//             Both triples close with structure constants +/-2 and satisfy
//             rho1^2+rho2^2+rho3^2 = sigma1^2+...= 4M^2 identically.
// tau, xi0, xi1 and the centralizer are identical in both conventions.
enum class Convention { printed, corrected };

constexpr int kObservableBasisSize = 11;  // tau(3) + rho(3) + sigma(3) + xi0 + xi1

const std::array<ObservableId, kObservableBasisSize>& observable_basis();
std::string observable_name(ObservableId id);

double eval(ObservableId id, const PhasePoint8& z, Convention conv = Convention::printed);

// Analytic gradient as an 8-vector (d/dq1..q4, d/dp1..p4).
// centralizerM requires M(z) > 0.
Vector8d gradient(ObservableId id, const PhasePoint8& z, Convention conv = Convention::printed);

// A scalar field on T*H_0 for bracket computations beyond the built-ins.
using ScalarField = std::function<double(const PhasePoint8&)>;

// Central-difference gradient with step eps^(1/3) * max(1, |coordinate|).
Vector8d numerical_gradient(const ScalarField& f, const PhasePoint8& z);

// Standard Poisson bracket sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i).
double poisson_bracket(ObservableId f, ObservableId g, const PhasePoint8& z,
                       Convention conv = Convention::printed);
double poisson_bracket(const ScalarField& f, const ScalarField& g, const PhasePoint8& z);
double poisson_bracket(const Vector8d& grad_f, const Vector8d& grad_g);

struct ClosureFit {
    ObservableId f, g;
    double bracket_at_sample = 0;                 // {f,g} at the table's sample point
    Eigen::Matrix<double, kObservableBasisSize, 1> coefficients;  // best fit over the basis
    double residual = 0;                          // RMS misfit over the auxiliary points
};

struct BracketTable {
    Convention convention = Convention::printed;
    Vector8d sample_point;
    Eigen::Matrix<double, kObservableBasisSize, kObservableBasisSize> entries;
    std::vector<ClosureFit> fits;                 // upper triangle, row-major
    std::array<double, kObservableBasisSize> centralizer_brackets;  // {M, basis_k} at sample
    double antisymmetry_defect = 0;

    const ClosureFit& fit(ObservableId f, ObservableId g) const;
    std::string to_json() const;
};

// Evaluates all pairwise brackets of the 11-function basis at z and fits each
// bracket as a linear combination of the basis by least squares over
// `aux_points` auxiliary random points (coordinates uniform in [-2,2]^8).
BracketTable bracket_table(const PhasePoint8& z, Convention conv,
                           unsigned seed = 2024, int aux_points = 24);

}  // namespace ksreg
