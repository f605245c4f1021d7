#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tlpulse/control.hpp"
#include "tlpulse/types.hpp"

namespace tlpulse {

// |numerator| <= h_floor * kNumeratorEps counts as the 0/0 case (no drive
// needed) rather than a divergence.
inline constexpr double kNumeratorEps = 1.0;

struct SynthOptions {
    double u_seed = 0.0;
    double h_floor = 1e-9;     // below this the strict field accessor refuses
    double drive_h_floor = 1e-4;  // simulation drive mutes below this coherence
    std::optional<double> a_max;  // amplitude cap; clipping marks the pulse approximate
    double profile_dt = 0.5;      // grid step for the feasibility profile
};

// The reverse-engineered drive for one (system, noise, target) triple.
//
//   E(t) = [df/dt - 2 Gamma (1+nbar-(2 nbar+1) f)] / (mu h(t)) * sin(theta),
//   theta = omega (t - t0) + phi0,
//
// valid while the prescribed coherence magnitude h = sqrt(u) stays real.
// Immutable after synthesis; all accessors are const and thread-safe (clip
// accounting uses atomics).
class SynthesizedPulse {
public:
    SynthesizedPulse(const SystemParams& sys, const NoiseParams& noise,
                     const ControlTarget& target, double t_max,
                     const SynthOptions& options = {});

    const SystemParams& system() const { return sys_; }
    const NoiseParams& noise() const { return noise_; }
    const ControlTarget& target() const { return target_; }
    const SynthOptions& options() const { return options_; }
    const CoherenceProfile& profile() const { return profile_; }

    double t_start() const { return target_.t0; }
    double t_max() const { return t_max_; }
    // End of the validity window: min(t_max, first coherence violation).
    double valid_end() const { return valid_end_; }
    std::optional<double> divergence_time() const { return profile_.first_violation_time; }
    bool fully_feasible() const { return profile_.fully_feasible(); }

    // Reference profile, evaluable anywhere in [t0, t_max] via quadrature.
    double u(double t) const { return quad_.u(t); }
    double h(double t) const { return quad_.h(t); }
    double f(double t) const { return f_profile(t, target_); }
    double fdot(double t) const { return f_dot(t, target_); }

    // Strict field accessor. Throws OutsideValidity past the validity window
    // and DivergentField when h < h_floor with a non-negligible numerator.
    double field(double t) const;

    // Regularized variant: h clamped to h_floor, never throws inside
    // [t0, t_max]; every clamp or amplitude clip is counted as a clip event.
    double field_clamped(double t) const;

    // Drive used by forward simulation: zero outside the validity window and
    // whenever the reference coherence is below drive_h_floor (covers both
    // the formally divergent onset of u_seed = 0 protocols and the approach
    // to a coherence zero). Post-violation sampling is deliberate: it shows
    // the free decay once the protocol has failed.
    double drive(double t) const;
    bool drive_muted(double t) const;

    // Slowly varying envelope of E = eps e^{-i omega_p t} + c.c.; exact
    // substitution reproduces field(). Same guards as field().
    cplx envelope(double t) const;
    cplx envelope_drive(double t) const;  // muted like drive()

    // Instantaneous amplitude of the carrier, |numerator| / (mu h).
    double amplitude(double t) const;

    long clip_events() const { return clip_events_.load(std::memory_order_relaxed); }
    // Clipping (a_max or h_floor) breaks the exact-tracking guarantee.
    bool approximate() const { return clip_events() > 0; }

private:
    double numerator(double t) const;  // df/dt - 2 Gamma (1+nbar-(2 nbar+1) f)
    double prefactor_checked(double t, bool clamp) const;

    SystemParams sys_;
    NoiseParams noise_;
    ControlTarget target_;
    SynthOptions options_;
    double t_max_;
    CoherenceProfile profile_;
    CoherenceQuadrature quad_;
    double valid_end_;
    mutable std::atomic<long> clip_events_{0};
};

SynthesizedPulse synthesize(const SystemParams& sys, const NoiseParams& noise,
                            const ControlTarget& target, double t_max,
                            const SynthOptions& options = {});

// ---------------------------------------------------------------------------
// General inverse map: the field required to realize an arbitrary prescribed
// trajectory of rotating-frame matrix elements,
//
//   E(t) = -2 Im[(drho_ge/dt + Gtot rho_ge) e^{i omega (t-t0)}]
//          / (mu (2 rho_gg - 1)).
//
// Samples with rho_gg within p_floor of 1/2 are flagged singular.
// ---------------------------------------------------------------------------

struct FieldSample {
    double t = 0.0;
    double E = 0.0;
    bool singular = false;
};

std::vector<FieldSample> field_from_trajectory(
    std::span<const double> t, std::span<const cplx> rho_ge,
    std::span<const cplx> rho_ge_dot, std::span<const double> rho_gg,
    const SystemParams& sys, const NoiseParams& noise, double t0,
    double p_floor = 1e-9);

// Raw envelope inversion from prescribed coherence rates,
// eps = (dh/dt + Gtot h) e^{-i phi0} e^{i(Delta t + omega t0)} / (i mu (2f-1)).
// Unlike SynthesizedPulse::envelope (which uses the algebraically equivalent
// form with h in the denominator), this route is singular where the
// population crosses 1/2 and throws PopulationNodeSingularity there.
cplx envelope_from_coherence_rates(double h, double h_dot, double f,
                                   const SystemParams& sys, const NoiseParams& noise,
                                   double t, double t0, double phi0,
                                   double p_floor = 1e-9);

}  // namespace tlpulse
