#include <doctest.h>

#include <cmath>

#include "ksreg/flow.hpp"
#include "ksreg/maps.hpp"
#include "ksreg/observables.hpp"

using namespace ksreg;

namespace {

HamiltonianSpec osc_spec(double omega) {
    HamiltonianSpec s;
    s.kind = HamiltonianKind::osc4;
    s.omega = omega;
    return s;
}

HamiltonianSpec kepler_spec(double mu) {
    HamiltonianSpec s;
    s.kind = HamiltonianKind::kepler3;
    s.grav_param = mu;
    return s;
}

}  // namespace

TEST_CASE("oscillator closes after one period under fixed rk4") {
    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::rk4_fixed;
    cfg.step = 1e-3;
    StateVector s0(8);
    s0 << 1, 0, 0, 0, 0, 0, 0, 0;
    const Trajectory traj = integrate(osc_spec(1.0), s0, 2 * M_PI, cfg);
    REQUIRE(traj.ok());
    CHECK((traj.back().state - s0).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(traj.back().s == doctest::Approx(2 * M_PI));
}

TEST_CASE("circular kepler orbit closes") {
    IntegratorConfig cfg;
    StateVector s0(6);
    s0 << 1, 0, 0, 0, 1, 0;
    const Trajectory traj = integrate(kepler_spec(1.0), s0, 2 * M_PI, cfg);
    REQUIRE(traj.ok());
    CHECK((traj.back().state - s0).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(traj.energy_drift() < 1e-10);
}

TEST_CASE("energy conservation at rel_tol 1e-10 on an e = 0.9 orbit") {
    IntegratorConfig cfg;  // dopri5 1e-10 defaults
    StateVector s0(6);
    s0 << 1.9, 0, 0, 0, std::sqrt(0.1 / 1.9), 0;
    const Trajectory traj = integrate(kepler_spec(1.0), s0, 2 * M_PI, cfg);
    REQUIRE(traj.ok());
    CHECK(traj.energy_drift() / 0.5 < 1e-8);
    CHECK(traj.statistics().rejected < traj.statistics().accepted);
}

TEST_CASE("near-collision direct integration collapses structurally") {
    IntegratorConfig cfg;
    StateVector s0(6);
    s0 << 1, 0, 0, 0, 1e-3, 0;
    const Trajectory traj = integrate(kepler_spec(400.0), s0, 0.12, cfg);
    CHECK(traj.status() == FlowStatus::step_collapse);
    CHECK(!traj.failure_message().empty());
    CHECK(traj.samples().size() > 10);  // partial trajectory retained
    CHECK(traj.statistics().min_step < 1e-12);
}

TEST_CASE("step budget exhaustion is reported, not thrown") {
    IntegratorConfig cfg;
    cfg.max_steps = 5;
    StateVector s0(6);
    s0 << 1.9, 0, 0, 0, std::sqrt(0.1 / 1.9), 0;
    const Trajectory traj = integrate(kepler_spec(1.0), s0, 2 * M_PI, cfg);
    CHECK(traj.status() == FlowStatus::step_budget_exhausted);
}

TEST_CASE("time map accumulates physical time at integrator order") {
    // Circular orbit: rho is constant, so t = 4 rho s exactly.
    const Vector3d x0(1, 0, 0), y0(0, 1, 0);
    const PhasePoint8 z0 = ks_preimage(x0, y0, 0.0);
    const double rho = norm_squared(z0.q);
    IntegratorConfig cfg;
    const Trajectory traj =
        integrate_with_time_map(osc_spec(4.0), z0.flat(), 1.0, cfg, TimeFactor::four_rho);
    REQUIRE(traj.ok());
    double prev_t = -1;
    for (const TrajectorySample& smp : traj.samples()) {
        CHECK(std::abs(smp.t - 4 * rho * smp.s) < 1e-10);
        CHECK(smp.t > prev_t);
        prev_t = smp.t;
    }

    const Trajectory quarter =
        integrate_with_time_map(osc_spec(4.0), z0.flat(), 1.0, cfg, TimeFactor::rho_over_4);
    CHECK(std::abs(quarter.back().t - rho / 4 * quarter.back().s) < 1e-10);
}

TEST_CASE("time factor |x|/h on the planar auxiliary system") {
    HamiltonianSpec aux;
    aux.kind = HamiltonianKind::aux_kepler2;
    aux.grav_param = 1.0;
    aux.h = 0.5;
    StateVector s0(4);
    s0 << 1, 0, 0, 1;  // circular, |x| = 1
    IntegratorConfig cfg;
    const Trajectory traj =
        integrate_with_time_map(aux, s0, 0.5, cfg, TimeFactor::abs_x_over_h);
    REQUIRE(traj.ok());
    CHECK(std::abs(traj.back().t - traj.back().s * (1.0 / 0.5)) < 1e-8);
}

TEST_CASE("lift parameters follow the energy matching") {
    const Vector3d x0(1.9, 0, 0), y0(0, std::sqrt(0.1 / 1.9), 0);
    const LiftedOscillator lift = lift_parameters(x0, y0, 1.0);
    CHECK(lift.kepler_energy == doctest::Approx(-0.5));
    CHECK(lift.h == doctest::Approx(4.0));
    CHECK(lift.omega == doctest::Approx(4.0));
    CHECK(lift.fictitious_period == doctest::Approx(M_PI / 2));
}

TEST_CASE("regularized propagation of a circular orbit matches direct integration") {
    const Vector3d x0(1, 0, 0), y0(0, 1, 0);
    IntegratorConfig cfg;
    const Trajectory mapped = propagate_regularized_kepler(x0, y0, 1.0, cfg, 1.0);
    REQUIRE(mapped.ok());
    CHECK(mapped.back().t == doctest::Approx(2 * M_PI).epsilon(1e-8));

    StateVector k0(6);
    k0 << x0, y0;
    const Trajectory direct = integrate(kepler_spec(1.0), k0, 2 * M_PI, cfg);
    double worst = 0;
    for (const TrajectorySample& smp : mapped.samples()) {
        if (smp.t > direct.back().t) break;
        worst = std::max(worst,
                         (direct.state_at(smp.t) - smp.state).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("regularized propagation domain") {
    IntegratorConfig cfg;
    CHECK_THROWS_AS(propagate_regularized_kepler({0, 0, 1}, {0, 1, 0}, 1.0, cfg),
                    std::domain_error);
    // Unbounded orbit has no revolution span.
    CHECK_THROWS_AS(propagate_regularized_kepler({1, 0, 0}, {0, 2, 0}, 1.0, cfg),
                    std::domain_error);
}

TEST_CASE("dense interpolation against the closed-form oscillator") {
    IntegratorConfig cfg;
    StateVector s0(8);
    s0 << 1, 0.5, -0.3, 0.2, 0, 0.1, 0, -0.4;
    const Trajectory traj = integrate(osc_spec(1.0), s0, 3.0, cfg);
    for (double tau : {0.37, 1.234, 2.5}) {
        const StateVector got = traj.state_at(tau);
        StateVector expect(8);
        expect.head<4>() = std::cos(tau) * s0.head<4>() + std::sin(tau) * s0.tail<4>();
        expect.tail<4>() = -std::sin(tau) * s0.head<4>() + std::cos(tau) * s0.tail<4>();
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("integration input validation") {
    IntegratorConfig cfg;
    cfg.rel_tol = -1;
    StateVector s0(8);
    s0.setZero();
    s0[0] = 1;
    CHECK_THROWS_AS(integrate(osc_spec(1.0), s0, 1.0, cfg), std::invalid_argument);
    IntegratorConfig rk;
    rk.method = IntegrationMethod::rk4_fixed;
    rk.step = 0;
    CHECK_THROWS_AS(integrate(osc_spec(1.0), s0, 1.0, rk), std::invalid_argument);
    IntegratorConfig fine;
    CHECK_THROWS_AS(
        integrate(osc_spec(1.0), s0, std::numeric_limits<double>::infinity(), fine),
        std::invalid_argument);
}

TEST_CASE("trajectory diagnostics carry the bilinears where defined") {
    IntegratorConfig cfg;
    StateVector s0(8);
    s0 << 1, 0, 0, 0, 0, 0, 2, 0;
    const Trajectory traj = integrate(osc_spec(1.0), s0, 0.3, cfg);
    const PhasePoint8 z0 = PhasePoint8::from_flat(s0);
    CHECK(traj.front().xi0 == doctest::Approx(eval(ObservableId::xi0, z0)));
    CHECK(traj.front().xi1 == doctest::Approx(eval(ObservableId::xi1, z0)));

    StateVector k0(6);
    k0 << 1, 0, 0, 0, 1, 0;
    const Trajectory kep = integrate(kepler_spec(1.0), k0, 0.3, cfg);
    CHECK(std::isnan(kep.front().xi0));
}

TEST_CASE("auxiliary planar hamiltonian is the time-regularized kepler flow") {
    // On the energy level K = -2h^2 the auxiliary field is (|x|/h) times the
    // Kepler field, so integrating it with dt = (|x|/h) ds retraces the
    // Kepler trajectory in physical time.
    const Vector2d x0(1.1, -0.3), y0(0.2, 0.8);
    HamiltonianSpec kep;
    kep.kind = HamiltonianKind::kepler2;
    kep.grav_param = 1.0;
    StateVector s0(4);
    s0 << x0, y0;
    const double energy = ham_value(kep, s0);
    REQUIRE(energy < 0);
    const double h = std::sqrt(-energy / 2);

    HamiltonianSpec aux;
    aux.kind = HamiltonianKind::aux_kepler2;
    aux.grav_param = 1.0;
    aux.h = h;
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-14;
    const Trajectory reg = integrate_with_time_map(aux, s0, 1.5, cfg,
                                                   TimeFactor::abs_x_over_h);
    REQUIRE(reg.ok());
    const Trajectory direct = integrate(kep, s0, reg.back().t, cfg);
    CHECK((direct.back().state - reg.back().state).cwiseAbs().maxCoeff() < 1e-9);
}
