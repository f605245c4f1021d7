#include "tlpulse/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tlpulse {

double default_dt(const SystemParams& sys, const NoiseParams& noise)
{
    const double carrier = (2.0 * std::numbers::pi / sys.omega) / 64.0;
    const double gtot = noise.total_rate();
    return gtot > 0.0 ? std::min(carrier, 1.0 / (50.0 * gtot)) : carrier;
}

namespace {

struct Engine {
    std::function<StateDerivative(double, const TwoLevelState&)> rhs;
    std::function<bool(double)> muted;  // may be null (never muted)

    TwoLevelState step(double t, const TwoLevelState& y, double dt) const {
        const StateDerivative k1 = rhs(t, y);
        const TwoLevelState y2{y.rho_gg + 0.5 * dt * k1.d_rho_gg,
                               y.rho_ge + 0.5 * dt * k1.d_rho_ge};
        const StateDerivative k2 = rhs(t + 0.5 * dt, y2);
        const TwoLevelState y3{y.rho_gg + 0.5 * dt * k2.d_rho_gg,
                               y.rho_ge + 0.5 * dt * k2.d_rho_ge};
        const StateDerivative k3 = rhs(t + 0.5 * dt, y3);
        const TwoLevelState y4{y.rho_gg + dt * k3.d_rho_gg,
                               y.rho_ge + dt * k3.d_rho_ge};
        const StateDerivative k4 = rhs(t + dt, y4);
        return {y.rho_gg + dt / 6.0 * (k1.d_rho_gg + 2.0 * k2.d_rho_gg
                                       + 2.0 * k3.d_rho_gg + k4.d_rho_gg),
                y.rho_ge + dt / 6.0 * (k1.d_rho_ge + 2.0 * k2.d_rho_ge
                                       + 2.0 * k3.d_rho_ge + k4.d_rho_ge)};
    }
};

constexpr int kStepCheckCount = 100;
constexpr int kOnsetSettleSteps = 5;

Trajectory run(const TwoLevelState& initial, RhsKind kind, const SystemParams& sys,
               const NoiseParams& noise, const Engine& engine,
               const std::function<double(double)>& field_sample,
               const SynthesizedPulse* pulse, double t0, double t1,
               IntegrateOptions options)
{
    sys.validate();
    noise.validate();
    initial.validate();
    if (options.dt <= 0.0) options.dt = default_dt(sys, noise);
    if (!(t1 > t0)) throw std::invalid_argument("integrate: t1 must exceed t0");
    if (kind == RhsKind::LabFrame) {
        // lab-frame runs must resolve the carrier
        const double cap = (2.0 * std::numbers::pi / sys.omega) / 50.0;
        if (options.dt > cap * (1.0 + 1e-12))
            throw std::invalid_argument("integrate: dt too coarse for the carrier, need dt <= (2*pi/omega)/50");
    }

    const double dt = options.dt;
    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));

    Trajectory traj{kind, sys, noise, dt, {}, {}, {}, {}, {}, 0.0};
    traj.t.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.field.reserve(n_steps + 1);
    if (pulse) {
        traj.ref_f.reserve(n_steps + 1);
        traj.ref_h.reserve(n_steps + 1);
    }

    const auto record = [&](double t, const TwoLevelState& y) {
        traj.t.push_back(t);
        traj.states.push_back(y);
        traj.field.push_back(field_sample ? field_sample(t) : 0.0);
        if (pulse) {
            traj.ref_f.push_back(pulse->f(t));
            traj.ref_h.push_back(pulse->h(t));
        }
        const double viol = std::max(0.0, -y.positivity_margin());
        traj.max_positivity_violation = std::max(traj.max_positivity_violation, viol);
        if (viol > options.positivity_abort || !std::isfinite(y.rho_gg)
            || !std::isfinite(y.rho_ge.real()) || !std::isfinite(y.rho_ge.imag()))
            throw PositivityViolation("integrate: state left the Bloch ball at t="
                                      + std::to_string(t) + " (margin "
                                      + std::to_string(-viol) + ")");
    };

    TwoLevelState y = initial;
    record(t0, y);

    int settled = kOnsetSettleSteps;  // immediately eligible unless a mute shows up
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + double(k) * dt;
        const TwoLevelState y_full = engine.step(t, y, dt);

        if (options.step_check && k < kStepCheckCount) {
            bool any_muted = false;
            if (engine.muted) {
                for (const double tau : {t, t + 0.25 * dt, t + 0.5 * dt,
                                         t + 0.75 * dt, t + dt})
                    if (engine.muted(tau)) { any_muted = true; break; }
            }
            if (any_muted) {
                settled = 0;
            } else if (settled < kOnsetSettleSteps) {
                ++settled;
            } else {
                const TwoLevelState y_half =
                    engine.step(t + 0.5 * dt, engine.step(t, y, 0.5 * dt), 0.5 * dt);
                const double err =
                    std::max(std::abs(y_full.rho_gg - y_half.rho_gg),
                             std::abs(y_full.rho_ge - y_half.rho_ge));
                if (err / dt > options.step_check_tol)
                    throw StepTooLarge("integrate: local error "
                                       + std::to_string(err / dt)
                                       + " per unit time at t=" + std::to_string(t)
                                       + "; reduce dt");
            }
        }

        y = y_full;
        record(t + dt, y);
    }
    return traj;
}

}  // namespace

Trajectory integrate(const TwoLevelState& initial, RhsKind kind,
                     const SynthesizedPulse& pulse, double t0, double t1,
                     const IntegrateOptions& options)
{
    const SystemParams& sys = pulse.system();
    const NoiseParams& noise = pulse.noise();

    Engine engine;
    engine.muted = [&pulse](double t) { return pulse.drive_muted(t); };

    std::function<double(double)> field_sample;
    if (kind == RhsKind::LabFrame) {
        engine.rhs = [&pulse, &sys, &noise](double t, const TwoLevelState& y) {
            return lab_frame_rhs(y, pulse.drive(t), sys, noise);
        };
        field_sample = [&pulse](double t) { return pulse.drive(t); };
    } else {
        engine.rhs = [&pulse, &sys, &noise](double t, const TwoLevelState& y) {
            return rwa_rhs(y, pulse.envelope_drive(t), sys, noise, t,
                           pulse.target().t0);
        };
        // reconstructed real field of the envelope actually applied
        field_sample = [&pulse, &sys](double t) {
            const cplx eps = pulse.envelope_drive(t);
            return 2.0 * (eps * std::polar(1.0, -sys.omega_p * t)).real();
        };
    }
    return run(initial, kind, sys, noise, engine, field_sample, &pulse, t0, t1, options);
}

Trajectory integrate_free(const TwoLevelState& initial, const SystemParams& sys,
                          const NoiseParams& noise, double t0, double t1,
                          const IntegrateOptions& options)
{
    Engine engine;
    engine.rhs = [&sys, &noise](double, const TwoLevelState& y) {
        return lab_frame_rhs(y, 0.0, sys, noise);
    };
    return run(initial, RhsKind::LabFrame, sys, noise, engine, {}, nullptr, t0, t1,
               options);
}

Trajectory integrate_custom(const TwoLevelState& initial, const SystemParams& sys,
                            const NoiseParams& noise,
                            const std::function<double(double)>& field,
                            double t0, double t1, const IntegrateOptions& options)
{
    Engine engine;
    engine.rhs = [&sys, &noise, &field](double t, const TwoLevelState& y) {
        return lab_frame_rhs(y, field(t), sys, noise);
    };
    return run(initial, RhsKind::LabFrame, sys, noise, engine, field, nullptr, t0, t1,
               options);
}

TrackingReport verify_tracking(const Trajectory& traj, const ControlTarget& target,
                               const CoherenceProfile& profile)
{
    if (traj.t.size() != profile.t.size())
        throw GridMismatch("verify_tracking: trajectory and profile sizes differ");
    for (std::size_t k = 0; k < traj.t.size(); ++k)
        if (std::abs(traj.t[k] - profile.t[k]) > 1e-9)
            throw GridMismatch("verify_tracking: grids differ at index "
                               + std::to_string(k));

    const double valid_end = profile.first_violation_time.value_or(
        std::numeric_limits<double>::infinity());

    TrackingReport report;
    report.max_positivity_violation = traj.max_positivity_violation;
    const double purity0 = traj.states.front().purity();

    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const double t = traj.t[k];
        const TwoLevelState& y = traj.states[k];
        const double pop_dev = std::abs(y.rho_gg - f_profile(t, target));
        if (t <= valid_end) {
            ++report.n_valid;
            if (pop_dev > report.max_pop_dev) {
                report.max_pop_dev = pop_dev;
                report.t_max_pop_dev = t;
            }
            report.max_coh_dev = std::max(
                report.max_coh_dev, std::abs(std::abs(y.rho_ge) - profile.h(k)));
        } else {
            report.post_loss_pop_drift = std::max(report.post_loss_pop_drift, pop_dev);
        }
        report.purity_drift =
            std::max(report.purity_drift, std::abs(y.purity() - purity0));
    }
    return report;
}

}  // namespace tlpulse
