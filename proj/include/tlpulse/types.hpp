#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace tlpulse {

using cplx = std::complex<double>;

// Tolerance for the positivity invariant rho_gg*(1-rho_gg) >= |rho_ge|^2.
inline constexpr double kPositivityTol = 1e-9;

// ---------------------------------------------------------------------------
// Error taxonomy. Each condition gets its own type so callers can distinguish
// "protocol infeasible" outcomes from genuine numerical failures.
// ---------------------------------------------------------------------------

struct InfeasibleAtOnset : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NegativeRadicand : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateNoiseless : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergentField : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutsideValidity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PopulationNodeSingularity : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularSample : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PositivityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoFeasibleBaseline : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonMonotoneBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Physical parameters. Atomic units throughout (hbar = 1).
// ---------------------------------------------------------------------------

struct SystemParams {
    double omega;    // transition frequency (rad / a.u. time)
    double mu;       // dipole projection on the field polarization (a.u.)
    double omega_p;  // carrier frequency; equals omega for resonant drive

    SystemParams(double omega_, double mu_)
        : omega(omega_), mu(mu_), omega_p(omega_) {}
    SystemParams(double omega_, double mu_, double omega_p_)
        : omega(omega_), mu(mu_), omega_p(omega_p_) {}

    // Detuning of the carrier from the transition. The synthesized field is
    // derived at resonance; nonzero detuning is carried through the types but
    // no off-resonant synthesis is provided.
    double detuning() const { return omega_p - omega; }

    void validate() const {
        if (!(omega > 0.0))
            throw std::invalid_argument("SystemParams: omega must be > 0");
        if (mu == 0.0 || !std::isfinite(mu))
            throw std::invalid_argument("SystemParams: mu must be nonzero");
        if (!std::isfinite(omega_p))
            throw std::invalid_argument("SystemParams: omega_p must be finite");
    }
};

struct NoiseParams {
    double gamma = 0.0;  // pure dephasing rate (a.u.)
    double Gamma = 0.0;  // thermal dissipation rate (a.u.)
    double nbar = 0.0;   // mean thermal occupation (dimensionless)

    // Total decoherence rate of the coherence rho_ge. Recomputed on demand,
    // never stored, so it cannot drift out of sync with the raw rates.
    double total_rate() const { return gamma + (2.0 * nbar + 1.0) * Gamma; }

    void validate() const {
        if (!(gamma >= 0.0))
            throw std::invalid_argument("NoiseParams: gamma must be >= 0");
        if (!(Gamma >= 0.0))
            throw std::invalid_argument("NoiseParams: Gamma must be >= 0");
        if (!(nbar >= 0.0))
            throw std::invalid_argument("NoiseParams: nbar must be >= 0");
    }
};

// ---------------------------------------------------------------------------
// Density matrix of the two-level system, stored as (ground population,
// coherence <g|rho|e>). Trace and hermiticity hold by construction; the
// remaining physical requirement is positivity, which is checked.
// ---------------------------------------------------------------------------

struct TwoLevelState {
    double rho_gg = 1.0;
    cplx rho_ge{0.0, 0.0};

    double rho_ee() const { return 1.0 - rho_gg; }
    cplx rho_eg() const { return std::conj(rho_ge); }

    // det(rho) = rho_gg*rho_ee - |rho_ge|^2; negative values mean the state
    // left the Bloch ball.
    double positivity_margin() const {
        return rho_gg * (1.0 - rho_gg) - std::norm(rho_ge);
    }

    double purity() const {
        const double ree = rho_ee();
        return rho_gg * rho_gg + ree * ree + 2.0 * std::norm(rho_ge);
    }

    void validate(double tol = kPositivityTol) const {
        if (!(rho_gg >= -tol && rho_gg <= 1.0 + tol))
            throw PositivityViolation("TwoLevelState: rho_gg outside [0,1]");
        if (positivity_margin() < -tol)
            throw PositivityViolation("TwoLevelState: |rho_ge|^2 exceeds rho_gg*rho_ee");
    }
};

// Time derivative of a TwoLevelState. d(rho_ee)/dt = -d(rho_gg)/dt by
// construction, so trace preservation is exact for every right-hand side.
struct StateDerivative {
    double d_rho_gg = 0.0;
    cplx d_rho_ge{0.0, 0.0};
};

}  // namespace tlpulse
