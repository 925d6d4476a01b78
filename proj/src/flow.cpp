#include "ksreg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ksreg/maps.hpp"
#include "ksreg/observables.hpp"

namespace ksreg {

namespace {

constexpr double kCollapseFraction = 1e-14;

// Dormand-Prince 5(4) tableau.
const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
const double a21 = 1.0 / 5;
const double a31 = 3.0 / 40, a32 = 9.0 / 40;
const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
             a54 = -212.0 / 729;
const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
             a64 = 49.0 / 176, a65 = -5103.0 / 18656;
const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
             b6 = 11.0 / 84;
const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
             e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const StateVector& err, const StateVector& y0, const StateVector& y1,
                  double abs_tol, double rel_tol) {
    double sum = 0;
    for (int i = 0; i < err.size(); ++i) {
        const double sc = abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        sum += r * r;
    }
    return std::sqrt(sum / err.size());
}

double initial_step(const OdeField& field, const StateVector& y0, const StateVector& f0,
                    double span, double abs_tol, double rel_tol) {
    // Hairer's starting-step heuristic, simplified.
    double d0 = 0, d1 = 0;
    for (int i = 0; i < y0.size(); ++i) {
        const double sc = abs_tol + rel_tol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / y0.size());
    d1 = std::sqrt(d1 / y0.size());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(span) / 10);

    const StateVector y1 = y0 + h0 * f0;
    const StateVector f1 = field(h0, y1);
    double d2 = 0;
    for (int i = 0; i < y0.size(); ++i) {
        const double sc = abs_tol + rel_tol * std::abs(y0[i]);
        const double r = (f1[i] - f0[i]) / sc;
        d2 += r * r;
    }
    d2 = std::sqrt(d2 / y0.size()) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                    : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::copysign(std::min({100 * h0, h1, std::abs(span)}), span);
}

OdeResult integrate_dopri5(const OdeField& field, const StateVector& y0, double span,
                           const IntegratorConfig& cfg) {
    OdeResult out;
    const double direction = span >= 0 ? 1.0 : -1.0;
    const double h_floor = kCollapseFraction * std::abs(span);
    const double h_cap = cfg.max_step_fraction * std::abs(span);

    double s = 0;
    StateVector y = y0;
    StateVector f = field(s, y);
    out.s.push_back(s);
    out.y.push_back(y);
    out.f.push_back(f);

    double h = initial_step(field, y, f, span, cfg.abs_tol, cfg.rel_tol);
    h = direction * std::min(std::abs(h), h_cap);
    double facold = 1e-4;
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    long total = 0;
    StepStatistics st;
    st.min_step = std::numeric_limits<double>::infinity();

    // Remaining spans below the collapse floor count as arrival, so the
    // final clamped step cannot trip the collapse detector.
    while (direction * (span - s) > h_floor) {
        if (++total > cfg.max_steps) {
            out.status = FlowStatus::step_budget_exhausted;
            out.message = "step budget exhausted after " + std::to_string(cfg.max_steps) +
                          " steps at s = " + std::to_string(s);
            break;
        }
        if (direction * (s + h) > direction * span) h = span - s;
        if (std::abs(h) < h_floor) {
            out.status = FlowStatus::step_collapse;
            out.message = "step size collapsed to " + std::to_string(std::abs(h)) +
                          " at s = " + std::to_string(s);
            break;
        }

        const StateVector k1 = f;
        const StateVector k2 = field(s + c2 * h, y + h * (a21 * k1));
        const StateVector k3 = field(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const StateVector k4 = field(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const StateVector k5 =
            field(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const StateVector k6 =
            field(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const StateVector y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const StateVector k7 = field(s + h, y1);
        const StateVector err_vec =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double err = error_norm(err_vec, y, y1, cfg.abs_tol, cfg.rel_tol);

        const double fac11 = std::pow(std::max(err, 1e-16), expo1);
        if (err <= 1.0) {
            s += h;
            y = y1;
            f = k7;  // FSAL
            out.s.push_back(s);
            out.y.push_back(y);
            out.f.push_back(f);
            ++st.accepted;
            st.min_step = std::min(st.min_step, std::abs(h));
            st.max_step = std::max(st.max_step, std::abs(h));
            st.mean_step += std::abs(h);
            double fac = fac11 / std::pow(facold, beta);
            fac = std::max(0.1, std::min(5.0, fac / safe));
            facold = std::max(err, 1e-4);
            h = direction * std::min(std::abs(h) / fac, h_cap);
        } else {
            ++st.rejected;
            h = direction * std::min(std::abs(h) / std::min(5.0, fac11 / safe), h_cap);
        }
    }
    if (st.accepted > 0) st.mean_step /= st.accepted;
    if (!std::isfinite(st.min_step)) st.min_step = 0;
    out.stats = st;
    return out;
}

OdeResult integrate_rk4(const OdeField& field, const StateVector& y0, double span,
                        const IntegratorConfig& cfg) {
    OdeResult out;
    const double direction = span >= 0 ? 1.0 : -1.0;
    const double h_nominal = direction * std::abs(cfg.step);
    double s = 0;
    StateVector y = y0;
    out.s.push_back(s);
    out.y.push_back(y);
    out.f.push_back(field(s, y));
    StepStatistics st;
    st.min_step = std::numeric_limits<double>::infinity();
    long total = 0;
    while (direction * (span - s) > 1e-15 * std::abs(span)) {
        if (++total > cfg.max_steps) {
            out.status = FlowStatus::step_budget_exhausted;
            out.message = "step budget exhausted";
            break;
        }
        double h = h_nominal;
        if (direction * (s + h) > direction * span) h = span - s;
        const StateVector k1 = field(s, y);
        const StateVector k2 = field(s + h / 2, y + (h / 2) * k1);
        const StateVector k3 = field(s + h / 2, y + (h / 2) * k2);
        const StateVector k4 = field(s + h, y + h * k3);
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        s += h;
        out.s.push_back(s);
        out.y.push_back(y);
        out.f.push_back(field(s, y));
        ++st.accepted;
        st.min_step = std::min(st.min_step, std::abs(h));
        st.max_step = std::max(st.max_step, std::abs(h));
        st.mean_step += std::abs(h);
    }
    if (st.accepted > 0) st.mean_step /= st.accepted;
    if (!std::isfinite(st.min_step)) st.min_step = 0;
    out.stats = st;
    return out;
}

double time_factor_value(const HamiltonianSpec& spec, TimeFactor factor, const StateVector& s) {
    switch (factor) {
        case TimeFactor::none:
            return 1.0;
        case TimeFactor::four_rho:
        case TimeFactor::rho_over_4: {
            double rho;
            if (spec.kind == HamiltonianKind::osc4)
                rho = s.head<4>().squaredNorm();
            else
                rho = s[0];  // chart kinds carry rho as the first coordinate
            return factor == TimeFactor::four_rho ? 4 * rho : rho / 4;
        }
        case TimeFactor::abs_x_over_h: {
            if (spec.h == 0) throw std::domain_error("time factor |x|/h: h = 0");
            const int n = spec.dimension() / 2;
            return s.head(n).norm() / spec.h;
        }
    }
    return 1.0;
}

void fill_diagnostics(const HamiltonianSpec& spec, TrajectorySample& sample) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sample.energy = ham_value(spec, sample.state);
    switch (spec.kind) {
        case HamiltonianKind::osc4: {
            const PhasePoint8 z = PhasePoint8::from_flat(sample.state);
            sample.xi0 = eval(ObservableId::xi0, z);
            sample.xi1 = eval(ObservableId::xi1, z);
            break;
        }
        case HamiltonianKind::euler_osc:
        case HamiltonianKind::euler_separable_rho:
        case HamiltonianKind::euler_separable_theta:
        case HamiltonianKind::euler_regularized:
            sample.xi0 = 2 * sample.state[7];  // Psi
            sample.xi1 = 2 * sample.state[5];  // Phi
            break;
        default:
            sample.xi0 = nan;
            sample.xi1 = nan;
            break;
    }
}

Trajectory assemble(const HamiltonianSpec& spec, const IntegratorConfig& cfg,
                    const OdeResult& ode, bool time_augmented) {
    Trajectory traj(spec, cfg);
    const int n = spec.dimension();
    for (size_t i = 0; i < ode.y.size(); ++i) {
        TrajectorySample sample;
        sample.s = ode.s[i];
        sample.t = time_augmented ? ode.y[i][n] : ode.s[i];
        sample.state = ode.y[i].head(n);
        sample.derivative = ode.f[i].head(n);
        fill_diagnostics(spec, sample);
        traj.push(std::move(sample));
    }
    traj.set_statistics(ode.stats);
    traj.set_status(ode.status, ode.message);
    return traj;
}

}  // namespace

OdeResult integrate_ode(const OdeField& field, const StateVector& y0, double span,
                        const IntegratorConfig& cfg) {
    if (!std::isfinite(span)) throw std::invalid_argument("integrate: non-finite span");
    if (!y0.allFinite()) throw std::invalid_argument("integrate: non-finite initial state");
    if (cfg.method == IntegrationMethod::dopri5_adaptive) {
        if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0))
            throw std::invalid_argument("integrate: tolerances must be positive");
        return integrate_dopri5(field, y0, span, cfg);
    }
    if (!(cfg.step > 0)) throw std::invalid_argument("integrate: step must be positive");
    return integrate_rk4(field, y0, span, cfg);
}

Trajectory integrate(const HamiltonianSpec& spec, const StateVector& s0, double span,
                     const IntegratorConfig& cfg) {
    const OdeField field = [&spec](double, const StateVector& y) {
        return ham_field(spec, y);
    };
    return assemble(spec, cfg, integrate_ode(field, s0, span, cfg), false);
}

Trajectory integrate_with_time_map(const HamiltonianSpec& spec, const StateVector& s0,
                                   double span, const IntegratorConfig& cfg,
                                   TimeFactor factor) {
    const int n = spec.dimension();
    if (s0.size() != n) throw std::invalid_argument("integrate: bad state length");
    StateVector y0(n + 1);
    y0.head(n) = s0;
    y0[n] = 0;
    const OdeField field = [&spec, factor, n](double, const StateVector& y) {
        StateVector dy(n + 1);
        dy.head(n) = ham_field(spec, y.head(n));
        dy[n] = time_factor_value(spec, factor, y.head(n));
        return dy;
    };
    return assemble(spec, cfg, integrate_ode(field, y0, span, cfg), true);
}

StateVector Trajectory::state_at(double s) const {
    if (samples_.empty()) throw std::logic_error("state_at: empty trajectory");
    const auto cmp = [](const TrajectorySample& a, double v) { return a.s < v; };
    if (s <= samples_.front().s) return samples_.front().state;
    if (s >= samples_.back().s) return samples_.back().state;
    const auto hi = std::lower_bound(samples_.begin(), samples_.end(), s, cmp);
    const auto lo = hi - 1;
    const double h = hi->s - lo->s;
    const double u = (s - lo->s) / h;
    // Cubic Hermite basis in u.
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * lo->state + h10 * h * lo->derivative + h01 * hi->state +
           h11 * h * hi->derivative;
}

double Trajectory::energy_drift() const {
    if (samples_.empty()) return 0;
    const double h0 = samples_.front().energy;
    double drift = 0;
    for (const auto& smp : samples_) drift = std::max(drift, std::abs(smp.energy - h0));
    return drift;
}

LiftedOscillator lift_parameters(const Vector3d& x0, const Vector3d& y0, double grav_param) {
    const double r = x0.norm();
    if (r == 0) throw std::domain_error("lift_parameters: |x| = 0");
    if (!(grav_param > 0)) throw std::domain_error("lift_parameters: grav_param <= 0");
    LiftedOscillator lift;
    lift.kepler_energy = 0.5 * y0.squaredNorm() - grav_param / r;
    lift.h = 4 * grav_param;
    lift.omega = -8 * lift.kepler_energy;
    lift.fictitious_period =
        lift.omega > 0 ? M_PI / std::sqrt(lift.omega) : std::numeric_limits<double>::infinity();
    return lift;
}

Trajectory propagate_regularized_kepler(const Vector3d& x0, const Vector3d& y0,
                                        double grav_param, const IntegratorConfig& cfg,
                                        double revs, double gauge_psi) {
    const LiftedOscillator lift = lift_parameters(x0, y0, grav_param);
    if (!(lift.omega > 0))
        throw std::domain_error(
            "propagate_regularized_kepler: revolution count needs a bounded orbit (E < 0)");
    const PhasePoint8 z0 = ks_preimage(x0, y0, gauge_psi);

    HamiltonianSpec osc;
    osc.kind = HamiltonianKind::osc4;
    osc.omega = lift.omega;
    osc.h = lift.h;
    const double span = revs * lift.fictitious_period;
    const Trajectory lifted = integrate_with_time_map(osc, z0.flat(), span, cfg,
                                                      TimeFactor::four_rho);

    HamiltonianSpec kepler;
    kepler.kind = HamiltonianKind::kepler3;
    kepler.grav_param = grav_param;
    Trajectory mapped(kepler, cfg);
    for (const TrajectorySample& smp : lifted.samples()) {
        const PhasePoint8 z = PhasePoint8::from_flat(smp.state);
        const KsImage img = ks_map(z);
        TrajectorySample out;
        out.s = smp.s;
        out.t = smp.t;
        out.state = StateVector(6);
        out.state << img.x, img.y;
        // Samples are parameterized by fictitious time, so the stored
        // derivative is d(state)/ds = (Kepler field) * dt/ds.
        out.derivative = ham_field(kepler, out.state) * (4 * norm_squared(z.q));
        out.energy = ham_value(kepler, out.state);
        out.xi0 = smp.xi0;
        out.xi1 = smp.xi1;
        mapped.push(std::move(out));
    }
    mapped.set_statistics(lifted.statistics());
    mapped.set_status(lifted.status(), lifted.failure_message());
    return mapped;
}

}  // namespace ksreg
