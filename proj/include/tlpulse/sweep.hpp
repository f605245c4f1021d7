#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tlpulse/control.hpp"
#include "tlpulse/types.hpp"

namespace tlpulse {

// Feasibility is decided entirely by the sign of u(t), so sweeps integrate
// only the scalar u-ODE per column; no field synthesis or density-matrix
// simulation is involved.

struct AxisSpec {
    enum class Kind { TargetPopulation, Nbar };
    Kind kind = Kind::TargetPopulation;
    double min = 0.0;
    double max = 1.0;
    int steps = 201;
};

struct SweepConfig {
    ControlTarget target;  // a_f is overridden per column for a_f sweeps
    NoiseParams noise;     // nbar is overridden per column for nbar sweeps
    double u_seed = 0.0;
    double horizon = 0.0;  // T_h (absolute time); +infinity selects steady mode
    double dt = 0.5;       // time resolution of the u grid
    int n_threads = 0;     // 0 = hardware concurrency
};

struct FeasibilityGrid {
    AxisSpec axis;
    std::vector<double> axis_values;
    std::vector<double> time;
    std::vector<std::vector<double>> u;  // [axis index][time index]
    std::vector<char> accessible;        // min u >= -kUTol over the window
    std::vector<std::optional<double>> first_violation;
    ControlTarget base_target;
    NoiseParams base_noise;
    double u_seed = 0.0;
    double horizon = 0.0;

    // The plotted quantity for infeasible cells: the magnitude of the
    // imaginary coherence, rendered as -sqrt(|u|) where u < 0, else 0.
    static double imag_h(double u_val) {
        return u_val < 0.0 ? -std::sqrt(-u_val) : 0.0;
    }
};

// One u-column per axis value, columns evaluated concurrently and assembled
// by index, so results are identical for any thread count.
FeasibilityGrid feasibility_map(const AxisSpec& axis, const SweepConfig& config);

// True when u stays >= -kUTol on [t0, horizon]. In steady mode
// (horizon = +infinity) the window is extended past the transition by
// several coherence lifetimes and the asymptotic source term must also be
// nonnegative, so feasibility means "holds forever".
bool protocol_feasible(const ControlTarget& target, const NoiseParams& noise,
                       double u_seed, double horizon, double dt = 0.5);

// Largest thermal occupation for which the protocol stays feasible up to the
// horizon. Doubling search for an infeasible upper bracket (capped at 64,
// beyond which the bound is reported infinite), then bisection to tol.
// Monotonicity of feasibility is audited on the final bracket; violations
// raise NonMonotoneBracket. Requires feasibility at nbar = 0.
double max_feasible_nbar(const SweepConfig& config, double tol = 1e-3);

// Maximal intervals of accessible target populations, scanned at the given
// resolution and refined at each interior edge by bisection to 1e-4.
std::vector<std::pair<double, double>> accessible_band(const SweepConfig& config,
                                                       int resolution = 201);

}  // namespace tlpulse
