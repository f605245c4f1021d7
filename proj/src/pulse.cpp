#include "tlpulse/pulse.hpp"

#include <algorithm>
#include <cmath>

namespace tlpulse {

SynthesizedPulse::SynthesizedPulse(const SystemParams& sys, const NoiseParams& noise,
                                   const ControlTarget& target, double t_max,
                                   const SynthOptions& options)
    : sys_(sys),
      noise_(noise),
      target_(target),
      options_(options),
      t_max_(t_max),
      profile_(solve_coherence(target, noise,
                               uniform_grid(target.t0, t_max, options.profile_dt),
                               options.u_seed, OnsetPolicy::Annotate)),
      quad_(target, noise, options.u_seed, t_max)
{
    sys.validate();
    if (options.u_seed > 0.25)
        throw std::invalid_argument("SynthesizedPulse: u_seed exceeds max coherence 1/4");
    valid_end_ = profile_.first_violation_time
                     ? std::min(t_max_, *profile_.first_violation_time)
                     : t_max_;
}

double SynthesizedPulse::numerator(double t) const
{
    const double f = f_profile(t, target_);
    return f_dot(t, target_)
         - 2.0 * noise_.Gamma * (1.0 + noise_.nbar - (2.0 * noise_.nbar + 1.0) * f);
}

double SynthesizedPulse::prefactor_checked(double t, bool clamp) const
{
    const double n = numerator(t);
    double hh = quad_.h(t);
    if (hh < options_.h_floor) {
        // 0/0 resolves to no drive: with a vanishing numerator the prescribed
        // state evolves freely (a diagonal state under pure dephasing).
        if (std::abs(n) <= options_.h_floor * kNumeratorEps) return 0.0;
        if (!clamp)
            throw DivergentField("field diverges: coherence below h_floor at t="
                                 + std::to_string(t));
        clip_events_.fetch_add(1, std::memory_order_relaxed);
        hh = options_.h_floor;
    }
    return n / (sys_.mu * hh);
}

double SynthesizedPulse::field(double t) const
{
    if (t < target_.t0 - 1e-12 || t > valid_end_ + 1e-12)
        throw OutsideValidity("field requested at t=" + std::to_string(t)
                              + " outside validity window ending at "
                              + std::to_string(valid_end_));
    double e = prefactor_checked(t, /*clamp=*/false)
             * std::sin(sys_.omega * (t - target_.t0) + target_.phi0);
    if (options_.a_max && std::abs(e) > *options_.a_max) {
        clip_events_.fetch_add(1, std::memory_order_relaxed);
        e = std::copysign(*options_.a_max, e);
    }
    return e;
}

double SynthesizedPulse::field_clamped(double t) const
{
    double e = prefactor_checked(t, /*clamp=*/true)
             * std::sin(sys_.omega * (t - target_.t0) + target_.phi0);
    if (options_.a_max && std::abs(e) > *options_.a_max) {
        clip_events_.fetch_add(1, std::memory_order_relaxed);
        e = std::copysign(*options_.a_max, e);
    }
    return e;
}

bool SynthesizedPulse::drive_muted(double t) const
{
    if (t < target_.t0 || t > valid_end_) return true;
    const double floor = options_.drive_h_floor * options_.drive_h_floor;
    return quad_.u(t) <= floor;
}

double SynthesizedPulse::drive(double t) const
{
    if (drive_muted(t)) return 0.0;
    double e = prefactor_checked(t, /*clamp=*/true)
             * std::sin(sys_.omega * (t - target_.t0) + target_.phi0);
    if (options_.a_max && std::abs(e) > *options_.a_max) {
        clip_events_.fetch_add(1, std::memory_order_relaxed);
        e = std::copysign(*options_.a_max, e);
    }
    return e;
}

cplx SynthesizedPulse::envelope(double t) const
{
    if (t < target_.t0 - 1e-12 || t > valid_end_ + 1e-12)
        throw OutsideValidity("envelope requested outside validity window");
    const double p = prefactor_checked(t, /*clamp=*/false);
    const double phase = sys_.detuning() * t + sys_.omega * target_.t0 - target_.phi0;
    return cplx(0.0, 0.5) * p * std::polar(1.0, phase);
}

cplx SynthesizedPulse::envelope_drive(double t) const
{
    if (drive_muted(t)) return {0.0, 0.0};
    const double p = prefactor_checked(t, /*clamp=*/true);
    const double phase = sys_.detuning() * t + sys_.omega * target_.t0 - target_.phi0;
    return cplx(0.0, 0.5) * p * std::polar(1.0, phase);
}

double SynthesizedPulse::amplitude(double t) const
{
    return std::abs(prefactor_checked(t, /*clamp=*/false));
}

SynthesizedPulse synthesize(const SystemParams& sys, const NoiseParams& noise,
                            const ControlTarget& target, double t_max,
                            const SynthOptions& options)
{
    return SynthesizedPulse(sys, noise, target, t_max, options);
}

std::vector<FieldSample> field_from_trajectory(
    std::span<const double> t, std::span<const cplx> rho_ge,
    std::span<const cplx> rho_ge_dot, std::span<const double> rho_gg,
    const SystemParams& sys, const NoiseParams& noise, double t0, double p_floor)
{
    const std::size_t n = t.size();
    if (rho_ge.size() != n || rho_ge_dot.size() != n || rho_gg.size() != n)
        throw GridMismatch("field_from_trajectory: input spans differ in length");
    sys.validate();
    noise.validate();

    const double gtot = noise.total_rate();
    std::vector<FieldSample> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k].t = t[k];
        const double denom = 2.0 * rho_gg[k] - 1.0;
        if (std::abs(denom) < p_floor) {
            out[k].singular = true;
            continue;
        }
        const cplx rotated = (rho_ge_dot[k] + gtot * rho_ge[k])
                           * std::polar(1.0, sys.omega * (t[k] - t0));
        out[k].E = -2.0 * rotated.imag() / (sys.mu * denom);
    }
    return out;
}

cplx envelope_from_coherence_rates(double h, double h_dot, double f,
                                   const SystemParams& sys, const NoiseParams& noise,
                                   double t, double t0, double phi0, double p_floor)
{
    const double denom = 2.0 * f - 1.0;
    if (std::abs(denom) < p_floor)
        throw PopulationNodeSingularity(
            "envelope inversion singular: population at 1/2");
    const cplx num = (h_dot + noise.total_rate() * h)
                   * std::polar(1.0, sys.detuning() * t + sys.omega * t0 - phi0);
    return num / (cplx(0.0, 1.0) * sys.mu * denom);
}

}  // namespace tlpulse
