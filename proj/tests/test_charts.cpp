#include <doctest.h>

#include <cmath>
#include <limits>

#include "ksreg/charts.hpp"
#include "ksreg/maps.hpp"
#include "ksreg/observables.hpp"
#include "ksreg/sampling.hpp"

using namespace ksreg;

namespace {

double angle_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2 * M_PI);
    return std::min(d, 2 * M_PI - d);
}

}  // namespace

TEST_CASE("euler chart forward example") {
    EulerChart c;
    c.rho = 1;
    c.phi = 0;
    c.theta = M_PI_2;
    c.psi = 0;
    const PhasePoint8 z = euler_to_phase(c);
    const double r2 = std::sqrt(2.0) / 2;
    CHECK((z.q.coeffs() - Vector4d(0, r2, 0, r2)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(z.p.coeffs().norm() < 1e-14);

    const EulerChart back = phase_to_euler(z);
    CHECK(back.rho == doctest::Approx(1.0));
    CHECK(back.theta == doctest::Approx(M_PI_2));
    CHECK(angle_distance(back.phi, 0) < 1e-14);
    CHECK(angle_distance(back.psi, 0) < 1e-14);
}

TEST_CASE("euler chart identities: |q|^2 = rho, Xi relations, P relation") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        const EulerChart c = EulerChart::from_flat(sample_euler_domain(rng));
        const PhasePoint8 z = euler_to_phase(c);
        CHECK(norm_squared(z.q) == doctest::Approx(c.rho).epsilon(1e-13));
        CHECK(eval(ObservableId::xi0, z) == doctest::Approx(2 * c.Psi).epsilon(1e-11));
        CHECK(eval(ObservableId::xi1, z) == doctest::Approx(2 * c.Phi).epsilon(1e-11));
        const EulerChart back = phase_to_euler(z);
        CHECK(back.P ==
              doctest::Approx(eval(ObservableId::tau1, z) / (2 * c.rho)).epsilon(1e-12));
    }
}

TEST_CASE("euler round trip on 1000 random charts") {
    Rng rng(32);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        const EulerChart c = EulerChart::from_flat(sample_euler_domain(rng));
        const EulerChart back = phase_to_euler(euler_to_phase(c));
        worst = std::max({worst, std::abs(back.rho - c.rho), angle_distance(back.phi, c.phi),
                          std::abs(back.theta - c.theta), angle_distance(back.psi, c.psi),
                          std::abs(back.P - c.P), std::abs(back.Phi - c.Phi),
                          std::abs(back.Theta - c.Theta), std::abs(back.Psi - c.Psi)});
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("euler chart is symplectic") {
    Rng rng(33);
    const Matrix8d omega = symplectic_matrix<4>();
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
        const Vector8d cv = sample_euler_domain(rng);
        const Matrix8d jac = numerical_jacobian8(
            [](const Vector8d& v) { return euler_to_phase(EulerChart::from_flat(v)).flat(); },
            cv);
        worst = std::max(worst,
                         (jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("euler chart domain errors") {
    EulerChart bad;
    bad.rho = -1;
    CHECK_THROWS_AS(euler_to_phase(bad), std::domain_error);
    bad.rho = 1;
    bad.theta = 0;
    CHECK_THROWS_AS(euler_to_phase(bad), std::domain_error);

    // Exclusion manifolds M1 (q1 = q4 = 0) and M2 (q2 = q3 = 0).
    CHECK_THROWS_AS(phase_to_euler({Quat{0, 0.6, 0.8, 0}, Quat{1, 0, 0, 0}}),
                    std::domain_error);
    CHECK_THROWS_AS(phase_to_euler({Quat{0.6, 0, 0, 0.8}, Quat{1, 0, 0, 0}}),
                    std::domain_error);
    CHECK_THROWS_AS(phase_to_euler({Quat::zero(), Quat{1, 0, 0, 0}}), std::domain_error);
    // Just off the manifold: inside the domain, accepted.
    CHECK_NOTHROW(phase_to_euler({Quat{1, 1e-5, 0, 0}, Quat{0, 0, 0, 0}}));
}

TEST_CASE("spherical chart examples and round trip") {
    SphericalChart c;
    c.rho = 1;
    c.theta = M_PI_2;
    c.phi = 0;
    c.P = 0;
    c.Theta = 0;
    c.Phi = 1;
    const PhasePoint6 pt = spherical_to_cartesian(c);
    CHECK((pt.x - Vector3d(1, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((pt.y - Vector3d(0, 1, 0)).cwiseAbs().maxCoeff() < 1e-15);

    SphericalChart z;
    z.rho = 2;
    z.theta = M_PI_2;
    z.phi = 0;
    const PhasePoint6 rest = spherical_to_cartesian(z);
    CHECK((rest.x - Vector3d(2, 0, 0)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(rest.y.norm() < 1e-15);

    const SphericalChart back = cartesian_to_spherical(pt);
    CHECK(back.rho == doctest::Approx(1.0));
    CHECK(back.theta == doctest::Approx(M_PI_2));
    CHECK(back.Phi == doctest::Approx(1.0));

    Rng rng(34);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
        SphericalChart s;
        s.rho = rng.uniform(0.3, 2);
        s.theta = std::acos(rng.uniform(-0.95, 0.95));
        s.phi = rng.uniform(0.05, 2 * M_PI - 0.05);
        s.P = rng.uniform(-1.5, 1.5);
        s.Theta = rng.uniform(-1.5, 1.5);
        s.Phi = rng.uniform(-1.5, 1.5);
        const SphericalChart b = cartesian_to_spherical(spherical_to_cartesian(s));
        worst = std::max({worst, std::abs(b.rho - s.rho), std::abs(b.theta - s.theta),
                          angle_distance(b.phi, s.phi), std::abs(b.P - s.P),
                          std::abs(b.Theta - s.Theta), std::abs(b.Phi - s.Phi)});
    }
    CHECK(worst < 1e-10);

    CHECK_THROWS_AS(cartesian_to_spherical({Vector3d(0, 0, 1), Vector3d(1, 0, 0)}),
                    std::domain_error);
}

TEST_CASE("spherical chart evaluates the kepler hamiltonian consistently") {
    Rng rng(35);
    const double gamma = 0.7;
    for (int t = 0; t < 300; ++t) {
        SphericalChart s;
        s.rho = rng.uniform(0.3, 2);
        s.theta = std::acos(rng.uniform(-0.9, 0.9));
        s.phi = rng.uniform(0, 2 * M_PI);
        s.P = rng.uniform(-1.5, 1.5);
        s.Theta = rng.uniform(-1.5, 1.5);
        s.Phi = rng.uniform(-1.5, 1.5);
        const PhasePoint6 pt = spherical_to_cartesian(s);
        const double cart = 0.5 * pt.y.squaredNorm() - gamma / pt.x.norm();
        const double st = std::sin(s.theta);
        const double chart = 0.5 * (s.P * s.P + s.Theta * s.Theta / (s.rho * s.rho) +
                                    s.Phi * s.Phi / (s.rho * s.rho * st * st)) -
                             gamma / s.rho;
        CHECK(cart == doctest::Approx(chart).epsilon(1e-11));
    }
}

TEST_CASE("polar chart") {
    const PhasePoint4 a = polar_to_cartesian2(1, 0, 0, 1);
    CHECK((a.x - Vector2d(1, 0)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((a.y - Vector2d(0, 1)).cwiseAbs().maxCoeff() < 1e-15);

    const PhasePoint4 b = polar_to_cartesian2(2, M_PI_2, 0, 0);
    CHECK((b.x - Vector2d(0, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(b.y.norm() < 1e-15);

    Rng rng(36);
    const double grav = 1.3;
    for (int t = 0; t < 200; ++t) {
        const double rho = rng.uniform(0.2, 2), mu_angle = rng.uniform(0, 2 * M_PI);
        const double P = rng.uniform(-1.5, 1.5), M = rng.uniform(-1.5, 1.5);
        const PhasePoint4 pt = polar_to_cartesian2(rho, mu_angle, P, M);
        const double cart = 0.5 * pt.y.squaredNorm() - grav / pt.x.norm();
        const double chart = 0.5 * (P * P + M * M / (rho * rho)) - grav / rho;
        CHECK(cart == doctest::Approx(chart).epsilon(1e-12));
    }
    CHECK_THROWS_AS(polar_to_cartesian2(0, 0, 0, 0), std::domain_error);
}

TEST_CASE("andoyer domain errors") {
    AndoyerChart c;
    c.M = 0;
    CHECK_THROWS_AS(andoyer_to_phase(c), std::domain_error);
    c.M = 1;
    c.N = 1.5;
    CHECK_THROWS_AS(andoyer_to_phase(c), std::domain_error);
    c.N = 0;
    c.Lambda = -1.2;
    CHECK_THROWS_AS(andoyer_to_phase(c), std::domain_error);
    c.Lambda = 0;
    c.rho = 0;
    CHECK_THROWS_AS(andoyer_to_phase(c), std::domain_error);
}

TEST_CASE("andoyer calibrated chart at the degenerate rotor point") {
    AndoyerChart c;
    c.rho = 1;
    c.lambda = c.mu_angle = c.nu = 0;
    c.P = 0;
    c.Lambda = c.M = c.N = 1;
    const PhasePoint8 z = andoyer_to_phase(c, AndoyerConvention::calibrated);
    CHECK((z.q.coeffs() - Vector4d(1, 0, 0, 0)).cwiseAbs().maxCoeff() < 1e-14);
    // p is a pure multiple of k.
    CHECK(std::abs(z.p.w) < 1e-14);
    CHECK(std::abs(z.p.x) < 1e-14);
    CHECK(std::abs(z.p.y) < 1e-14);
    CHECK(std::abs(z.p.z) > 0.1);
    CHECK(eval(ObservableId::centralizerM, z) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("andoyer calibration selects 1/rho with w1 = 2 rho P uniquely") {
    const AndoyerCalibration& cal = calibrate_andoyer();
    CHECK(cal.unique_winner);
    CHECK(cal.chosen_prefactor == "1/rho");
    CHECK(cal.chosen_w1 == "2*rho*P");
    CHECK(cal.symplectic_defect < 1e-9);
    CHECK(cal.xi0_vs_minus_2N < 1e-12);
    CHECK(cal.xi1_vs_minus_2Lambda < 1e-12);
    int selected = 0;
    for (const auto& entry : cal.sweep) selected += entry.selected ? 1 : 0;
    CHECK(selected == 1);
    // The published pair fails both selection identities by a wide margin.
    for (const auto& entry : cal.sweep)
        if (entry.prefactor == "1/(4rho^2)" && entry.w1 == "rho*P")
            CHECK(entry.centralizer_residual > 1e-2);
    CHECK(cal.to_json().find("\"unique_winner\":true") != std::string::npos);
}

TEST_CASE("andoyer calibrated chart identities on random charts") {
    Rng rng(37);
    for (int t = 0; t < 300; ++t) {
        const AndoyerChart c = AndoyerChart::from_flat(sample_andoyer_domain(rng));
        const PhasePoint8 z = andoyer_to_phase(c, AndoyerConvention::calibrated);
        CHECK(norm_squared(z.q) == doctest::Approx(c.rho).epsilon(1e-13));
        CHECK(eval(ObservableId::centralizerM, z) == doctest::Approx(c.M).epsilon(1e-11));
        CHECK(eval(ObservableId::tau1, z) ==
              doctest::Approx(2 * c.rho * c.P).epsilon(1e-11));
        CHECK(eval(ObservableId::xi0, z) == doctest::Approx(-2 * c.N).epsilon(1e-11));
        CHECK(eval(ObservableId::xi1, z) == doctest::Approx(-2 * c.Lambda).epsilon(1e-11));
    }
}

TEST_CASE("printed andoyer normalization is not canonical") {
    Rng rng(38);
    const Matrix8d omega = symplectic_matrix<4>();
    double defect = 0;
    for (int t = 0; t < 20; ++t) {
        const Vector8d cv = sample_andoyer_domain(rng);
        const Matrix8d jac = numerical_jacobian8(
            [](const Vector8d& v) {
                return andoyer_to_phase(AndoyerChart::from_flat(v),
                                        AndoyerConvention::printed)
                    .flat();
            },
            cv);
        defect = std::max(defect,
                          (jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff());
    }
    CHECK(defect > 1e-2);
}

TEST_CASE("exclusion rejection threshold sits at Delta = 1e-13 |q|^2") {
    // Delta/rho = q2 * sqrt(rho)/rho-ish; pick q = (1, eps, 0, 0): Delta = eps.
    const Quat p{0.1, 0.2, 0.3, 0.4};
    CHECK_NOTHROW(phase_to_euler({Quat{1.0, 1e-12, 0, 0}, p}));
    CHECK_THROWS_AS(phase_to_euler({Quat{1.0, 1e-14, 0, 0}, p}), std::domain_error);
}

TEST_CASE("psi is the fiber angle: the KS image ignores it when Psi = 0") {
    Rng rng(39);
    for (int t = 0; t < 100; ++t) {
        Vector8d cv = sample_euler_domain(rng);
        cv[7] = 0;
        Vector8d shifted = cv;
        shifted[3] = rng.uniform(0.05, 2 * M_PI - 0.05);
        const KsImage a = ks_map(euler_to_phase(EulerChart::from_flat(cv)));
        const KsImage b = ks_map(euler_to_phase(EulerChart::from_flat(shifted)));
        const double sc = std::max(1.0, std::max(a.x.norm(), a.y.norm()));
        CHECK((a.x - b.x).cwiseAbs().maxCoeff() < 1e-12 * sc);
        CHECK((a.y - b.y).cwiseAbs().maxCoeff() < 1e-12 * sc);
    }
}
