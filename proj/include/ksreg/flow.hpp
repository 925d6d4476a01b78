#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ksreg/dynamics.hpp"
#include "ksreg/types.hpp"

namespace ksreg {

enum class IntegrationMethod { rk4_fixed, dopri5_adaptive };

struct IntegratorConfig {
    IntegrationMethod method = IntegrationMethod::dopri5_adaptive;
    double step = 1e-3;       // rk4_fixed
    double rel_tol = 1e-10;   // dopri5
    double abs_tol = 1e-12;   // dopri5
    long max_steps = 2'000'000;
    double max_step_fraction = 1.0 / 16.0;  // cap on |h| relative to the span
};

enum class FlowStatus { ok, step_collapse, step_budget_exhausted };

// Multiplier g(state) in dt = g ds, appended to the ODE as an extra component
// so physical time carries integrator-order accuracy.
enum class TimeFactor { none, four_rho, rho_over_4, abs_x_over_h };

struct TrajectorySample {
    double s = 0;             // fictitious (integration) time
    double t = 0;             // accumulated physical time (= s without a time map)
    StateVector state;
    StateVector derivative;   // field at the sample, for dense interpolation
    double energy = 0;        // H(state)
    double xi0 = 0, xi1 = 0;  // bilinear values where defined, else NaN
};

struct StepStatistics {
    long accepted = 0;
    long rejected = 0;
    double min_step = 0;
    double max_step = 0;
    double mean_step = 0;
};

class Trajectory {
   public:
    Trajectory(HamiltonianSpec spec, IntegratorConfig cfg)
        : spec_(spec), config_(cfg) {}

    const std::vector<TrajectorySample>& samples() const { return samples_; }
    const HamiltonianSpec& spec() const { return spec_; }
    const IntegratorConfig& config() const { return config_; }
    const StepStatistics& statistics() const { return stats_; }
    FlowStatus status() const { return status_; }
    const std::string& failure_message() const { return failure_message_; }
    bool ok() const { return status_ == FlowStatus::ok; }

    const TrajectorySample& front() const { return samples_.front(); }
    const TrajectorySample& back() const { return samples_.back(); }

    // Cubic Hermite interpolation between stored samples.
    StateVector state_at(double s) const;

    double energy_drift() const;  // max |H - H(0)| over the samples

    // Construction hooks used by the integrators.
    void push(TrajectorySample sample) { samples_.push_back(std::move(sample)); }
    void set_status(FlowStatus st, std::string msg) {
        status_ = st;
        failure_message_ = std::move(msg);
    }
    void set_statistics(StepStatistics st) { stats_ = st; }

   private:
    HamiltonianSpec spec_;
    IntegratorConfig config_;
    std::vector<TrajectorySample> samples_;
    StepStatistics stats_;
    FlowStatus status_ = FlowStatus::ok;
    std::string failure_message_;
};

// Integrates the canonical field of `spec` from s0 over [0, span]. Step-size
// collapse (|h| < 1e-14 |span|) and budget exhaustion are reported in the
// returned trajectory's status together with the partial samples, not thrown.
Trajectory integrate(const HamiltonianSpec& spec, const StateVector& s0, double span,
                     const IntegratorConfig& cfg);

// Same, with dt/ds appended so every sample carries physical time.
Trajectory integrate_with_time_map(const HamiltonianSpec& spec, const StateVector& s0,
                                   double span, const IntegratorConfig& cfg,
                                   TimeFactor factor);

// Generic ODE entry point shared by the above; field maps (s, y) -> dy/ds.
using OdeField = std::function<StateVector(double, const StateVector&)>;
struct OdeResult {
    std::vector<double> s;
    std::vector<StateVector> y;
    std::vector<StateVector> f;
    StepStatistics stats;
    FlowStatus status = FlowStatus::ok;
    std::string message;
};
OdeResult integrate_ode(const OdeField& field, const StateVector& y0, double span,
                        const IntegratorConfig& cfg);

// Collision-regular propagation of the spatial Kepler system: lifts (x0, y0)
// through the gauge-fixed KS preimage, integrates the matched oscillator in
// fictitious time with dt = 4 rho ds, and maps every sample back. The
// returned trajectory is in Kepler coordinates (x, y); its xi columns carry
// the lifted point's bilinear values and its energy column the Kepler energy.
// `revs` counts pericenter-to-pericenter revolutions (requires a bounded
// orbit); x0 must avoid the polar axis.
Trajectory propagate_regularized_kepler(const Vector3d& x0, const Vector3d& y0,
                                        double grav_param, const IntegratorConfig& cfg,
                                        double revs = 1.0, double gauge_psi = 0.0);

// Oscillator parameters matched to a Kepler state: h = 4 mu, omega = -8 E.
struct LiftedOscillator {
    double omega = 0;
    double h = 0;
    double kepler_energy = 0;
    double fictitious_period = 0;  // span of one Kepler revolution (omega > 0)
};
LiftedOscillator lift_parameters(const Vector3d& x0, const Vector3d& y0, double grav_param);

}  // namespace ksreg
