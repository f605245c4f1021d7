#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tlpulse/numerics.hpp"
#include "tlpulse/types.hpp"

namespace tlpulse {

// Samples with u below -kUTol are flagged infeasible (the prescribed
// trajectory would need imaginary coherence there).
inline constexpr double kUTol = 1e-12;

// Default tail tolerance for the start-time check: the transition weight
// g(t0) must not exceed this, so the prescribed population is flat at onset.
inline constexpr double kTailTol = 1e-3;

// ---------------------------------------------------------------------------
// Prescribed population trajectory: logistic interpolation from a_i to a_f,
// transition centered at t = 0 with rate alpha.
// ---------------------------------------------------------------------------

struct ControlTarget {
    double a_i;          // initial ground population
    double a_f;          // target ground population
    double alpha;        // transition rate (1 / a.u. time)
    double t0;           // start time, negative
    double phi0 = 0.0;   // constant coherence phase (rad)

    void validate(double tail_tol = kTailTol) const;
};

// Branch-stable logistic 1/(1+e^{-x}); no overflow for |x| up to ~700.
double logistic(double x);

double g_sigmoid(double t, double alpha);

double f_profile(double t, const ControlTarget& target);

// Analytic derivative alpha (a_f - a_i) g (1-g). Kept analytic (not a finite
// difference) because it enters the synthesized field directly.
double f_dot(double t, const ControlTarget& target);

// Source term of the linearized coherence equation. The coherence magnitude
// h obeys  dh/dt = (2f-1)[2 Gamma (1+nbar-(2 nbar+1) f) - df/dt]/(2h)
//                  - Gtot h,
// a Bernoulli equation in h. Substituting u = h^2 gives the exactly
// equivalent linear ODE
//     du/dt = -2 Gtot u + s(t),
//     s(t)  = (2f-1)[2 Gamma (1+nbar-(2 nbar+1) f) - df/dt],
// which is the standard Bernoulli linearization. Working in u removes the
// 1/h singularity at u = 0 and turns infeasibility into the sign of u.
// With u(t0) = 0 the protocol can start at all only if s(t0) >= 0.
double source_term(double t, const ControlTarget& target, const NoiseParams& noise);

// Asymptotic source value (f -> a_f, df/dt -> 0).
double source_term_limit(const ControlTarget& target, const NoiseParams& noise);

// ---------------------------------------------------------------------------
// Solved coherence trajectory u(t) = h(t)^2 on a grid.
// ---------------------------------------------------------------------------

struct CoherenceProfile {
    std::vector<double> t;
    std::vector<double> u;
    std::vector<char> feasible;                  // u >= -kUTol per sample
    std::optional<double> first_violation_time;  // refined crossing time
    double u_seed = 0.0;

    bool fully_feasible() const { return !first_violation_time.has_value(); }
    double h(std::size_t i) const;
};

enum class OnsetPolicy {
    Throw,     // s(t0) < 0 with u_seed = 0 raises InfeasibleAtOnset
    Annotate,  // profile is still produced, flagged infeasible from t0
};

// Integrates du/dt = -2 Gtot u + s(t) with classical RK4 on the given grid
// (uniform or monotone increasing, starting at target.t0).
CoherenceProfile solve_coherence(const ControlTarget& target, const NoiseParams& noise,
                                 std::span<const double> grid, double u_seed = 0.0,
                                 OnsetPolicy policy = OnsetPolicy::Throw);

// Independent evaluation path for the same u(t) via the closed-form
// quadrature  u(t) = e^{-2 Gtot (t-t0)} u_seed
//                    + int_t0^t e^{-2 Gtot (t-tau)} s(tau) dtau,
// evaluated with composite Gauss-Legendre panels. Pure function of t, exact
// to machine precision for the smooth s(t) used here; this is the evaluator
// behind field synthesis, so the field is well defined between grid points.
class CoherenceQuadrature {
public:
    CoherenceQuadrature(const ControlTarget& target, const NoiseParams& noise,
                        double u_seed, double t_max, double panel_width = 2.0);

    double u(double t) const;  // t in [t0, t_max]
    double h(double t) const { const double v = u(t); return v > 0.0 ? std::sqrt(v) : 0.0; }
    double t_max() const { return t0_ + panel_ * double(boundary_u_.size() - 1); }

private:
    ControlTarget target_;
    NoiseParams noise_;
    double t0_;
    double panel_;
    double decay_;                    // e^{-2 Gtot panel}
    std::vector<double> boundary_u_;  // u at panel boundaries
    GaussLegendre quad_;
};

// ---------------------------------------------------------------------------
// Steady state sustained by the drive against the environment.
// ---------------------------------------------------------------------------

struct SteadyStateReport {
    double h_inf = 0.0;                 // asymptotic coherence (0 if infeasible)
    bool feasible = false;
    bool degenerate = false;            // Gamma = 0: steady coherence identically 0
    std::optional<std::pair<double, double>> a_f_band;  // closed admissible interval
    double steady_field_amplitude = 0.0;
};

// h_inf = sqrt( (2 a_f - 1)(1 + nbar - (2 nbar+1) a_f) Gamma / Gtot ).
// Throws NegativeRadicand outside the admissible band and DegenerateNoiseless
// when gamma = Gamma = 0 (0/0, no steady coherence is defined).
double steady_state_coherence(double a_f, const NoiseParams& noise);

// Closed interval of target populations admitting a steady state, from the
// quadratic-root solve of (2a-1)(1+nbar-(2 nbar+1) a) >= 0 intersected with
// the h_inf <= 1/2 cap. The cap never binds: the quadratic's maximum is
// 1/(8(2 nbar+1)) while the cap is at least (2 nbar+1)/4. Requires Gamma > 0.
std::pair<double, double> steady_band(const NoiseParams& noise);

SteadyStateReport steady_state_feasibility(double a_f, const NoiseParams& noise,
                                           const SystemParams& sys);

}  // namespace tlpulse
