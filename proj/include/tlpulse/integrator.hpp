#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tlpulse/model.hpp"
#include "tlpulse/pulse.hpp"
#include "tlpulse/types.hpp"

namespace tlpulse {

enum class RhsKind { LabFrame, Rwa };

struct IntegrateOptions {
    double dt = 0.0;             // 0 selects default_dt(sys, noise)
    bool step_check = true;      // halved-step self-check on the first 100 steps
    double step_check_tol = 1e-8;   // local error per unit time
    double positivity_abort = 1e-7; // abort threshold on the positivity margin
};

// min(carrier period / 64, 1 / (50 Gtot)): resolves both the carrier and the
// fastest decay. Fixed step keeps runs bit-reproducible.
double default_dt(const SystemParams& sys, const NoiseParams& noise);

struct Trajectory {
    RhsKind kind;
    SystemParams sys;
    NoiseParams noise;
    double dt;
    std::vector<double> t;
    std::vector<TwoLevelState> states;
    std::vector<double> field;            // applied drive at sample times
    std::vector<double> ref_f, ref_h;     // prescribed profile; empty for free runs
    double max_positivity_violation = 0.0;

    std::size_t size() const { return t.size(); }
};

struct TrackingReport {
    double max_pop_dev = 0.0;    // max |rho_gg - f| on the validity window
    double max_coh_dev = 0.0;    // max ||rho_ge| - h| on the validity window
    double t_max_pop_dev = 0.0;
    double post_loss_pop_drift = 0.0;  // max |rho_gg - f| past the violation
    double trace_drift = 0.0;          // structural zero in this representation
    double max_positivity_violation = 0.0;
    double purity_drift = 0.0;         // meaningful for closed (noiseless) runs
    std::size_t n_valid = 0;
};

// Classical fixed-step RK4 of either right-hand side, driven by the
// synthesized pulse. The drive is evaluated at substage times through
// SynthesizedPulse::drive / envelope_drive, so post-violation samples run
// freely. Every sample is positivity-checked; violations beyond
// options.positivity_abort abort with PositivityViolation.
//
// The self-check compares each of the first 100 steps against two half
// steps and throws StepTooLarge when the difference per unit time exceeds
// step_check_tol. Steps where the drive mute policy was active at any
// substage, and the first few steps after the drive engages, are exempt:
// there the drive is only piecewise smooth and the estimate reflects the
// switching, not the step size.
Trajectory integrate(const TwoLevelState& initial, RhsKind kind,
                     const SynthesizedPulse& pulse, double t0, double t1,
                     const IntegrateOptions& options = {});

// Free evolution (no drive); used for relaxation and fixed-point studies.
Trajectory integrate_free(const TwoLevelState& initial, const SystemParams& sys,
                          const NoiseParams& noise, double t0, double t1,
                          const IntegrateOptions& options = {});

// Lab-frame evolution under an arbitrary field sample function.
Trajectory integrate_custom(const TwoLevelState& initial, const SystemParams& sys,
                            const NoiseParams& noise,
                            const std::function<double(double)>& field,
                            double t0, double t1, const IntegrateOptions& options = {});

// Deviation of a realized trajectory from the prescribed (f, h) profile.
// Trajectory and profile must share the time grid. Deviations are measured
// on the validity window only; samples past the first coherence violation
// are summarized separately as post-loss drift.
TrackingReport verify_tracking(const Trajectory& traj, const ControlTarget& target,
                               const CoherenceProfile& profile);

}  // namespace tlpulse
