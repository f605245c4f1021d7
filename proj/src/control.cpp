#include "tlpulse/control.hpp"

#include <algorithm>
#include <cmath>

namespace tlpulse {

void ControlTarget::validate(double tail_tol) const
{
    if (!(a_i >= 0.0 && a_i <= 1.0))
        throw std::invalid_argument("ControlTarget: a_i must be in [0,1]");
    if (!(a_f >= 0.0 && a_f <= 1.0))
        throw std::invalid_argument("ControlTarget: a_f must be in [0,1]");
    if (!(alpha > 0.0))
        throw std::invalid_argument("ControlTarget: alpha must be > 0");
    if (!(t0 < 0.0))
        throw std::invalid_argument("ControlTarget: t0 must be negative");
    // g(t0) <= tail_tol, i.e. the transition has not started at onset.
    if (alpha * std::abs(t0) < std::log(1.0 / tail_tol - 1.0))
        throw std::invalid_argument(
            "ControlTarget: alpha*|t0| too small, transition tail not resolved at t0");
    if (!std::isfinite(phi0))
        throw std::invalid_argument("ControlTarget: phi0 must be finite");
}

double logistic(double x)
{
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double g_sigmoid(double t, double alpha) { return logistic(alpha * t); }

double f_profile(double t, const ControlTarget& target)
{
    const double g = g_sigmoid(t, target.alpha);
    return (1.0 - g) * target.a_i + target.a_f * g;
}

double f_dot(double t, const ControlTarget& target)
{
    const double g = g_sigmoid(t, target.alpha);
    return target.alpha * (target.a_f - target.a_i) * g * (1.0 - g);
}

double source_term(double t, const ControlTarget& target, const NoiseParams& noise)
{
    const double f = f_profile(t, target);
    const double relax = 2.0 * noise.Gamma
                       * (1.0 + noise.nbar - (2.0 * noise.nbar + 1.0) * f);
    return (2.0 * f - 1.0) * (relax - f_dot(t, target));
}

double source_term_limit(const ControlTarget& target, const NoiseParams& noise)
{
    const double relax = 2.0 * noise.Gamma
                       * (1.0 + noise.nbar - (2.0 * noise.nbar + 1.0) * target.a_f);
    return (2.0 * target.a_f - 1.0) * relax;
}

double CoherenceProfile::h(std::size_t i) const
{
    return u[i] > 0.0 ? std::sqrt(u[i]) : 0.0;
}

namespace {

// One RK4 step of du/dt = -2 Gtot u + s(t).
double u_step(double t, double u, double dt, double two_gtot,
              const ControlTarget& target, const NoiseParams& noise)
{
    const auto rhs = [&](double tt, double uu) {
        return -two_gtot * uu + source_term(tt, target, noise);
    };
    const double k1 = rhs(t, u);
    const double k2 = rhs(t + 0.5 * dt, u + 0.5 * dt * k1);
    const double k3 = rhs(t + 0.5 * dt, u + 0.5 * dt * k2);
    const double k4 = rhs(t + dt, u + dt * k3);
    return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

CoherenceProfile solve_coherence(const ControlTarget& target, const NoiseParams& noise,
                                 std::span<const double> grid, double u_seed,
                                 OnsetPolicy policy)
{
    target.validate();
    noise.validate();
    if (grid.size() < 2)
        throw std::invalid_argument("solve_coherence: grid needs at least 2 samples");
    if (std::abs(grid.front() - target.t0) > 1e-9)
        throw std::invalid_argument("solve_coherence: grid must start at target.t0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw std::invalid_argument("solve_coherence: grid must be increasing");
    if (u_seed < 0.0)
        throw std::invalid_argument("solve_coherence: u_seed must be >= 0");

    if (policy == OnsetPolicy::Throw && u_seed == 0.0
        && source_term(target.t0, target, noise) < 0.0)
        throw InfeasibleAtOnset(
            "solve_coherence: source term negative at t0 with zero seed coherence");

    CoherenceProfile profile;
    profile.t.assign(grid.begin(), grid.end());
    profile.u.resize(grid.size());
    profile.feasible.resize(grid.size());
    profile.u_seed = u_seed;

    const double two_gtot = 2.0 * noise.total_rate();
    double u = u_seed;
    profile.u[0] = u;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        u = u_step(grid[k - 1], u, grid[k] - grid[k - 1], two_gtot, target, noise);
        profile.u[k] = u;
    }

    std::size_t first_bad = grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        profile.feasible[k] = profile.u[k] >= -kUTol;
        if (!profile.feasible[k] && first_bad == grid.size()) first_bad = k;
    }

    if (first_bad < grid.size()) {
        if (first_bad == 0) {
            profile.first_violation_time = target.t0;
        } else {
            // refine the sign change with the quadrature evaluator, so the
            // reported time does not depend on grid resolution
            CoherenceQuadrature quad(target, noise, u_seed, grid.back());
            double lo = grid[first_bad - 1], hi = grid[first_bad];
            if (quad.u(lo) < -kUTol) {
                profile.first_violation_time = lo;
            } else {
                for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (quad.u(mid) >= -kUTol ? lo : hi) = mid;
                }
                profile.first_violation_time = 0.5 * (lo + hi);
            }
        }
    }
    return profile;
}

CoherenceQuadrature::CoherenceQuadrature(const ControlTarget& target,
                                         const NoiseParams& noise, double u_seed,
                                         double t_max, double panel_width)
    : target_(target), noise_(noise), t0_(target.t0), panel_(panel_width), quad_(20)
{
    if (!(panel_width > 0.0))
        throw std::invalid_argument("CoherenceQuadrature: panel width must be > 0");
    if (!(t_max > t0_))
        throw std::invalid_argument("CoherenceQuadrature: t_max must exceed t0");

    const double two_gtot = 2.0 * noise_.total_rate();
    decay_ = std::exp(-two_gtot * panel_);
    const std::size_t n_panels =
        static_cast<std::size_t>(std::ceil((t_max - t0_) / panel_ - 1e-12));

    boundary_u_.resize(n_panels + 1);
    boundary_u_[0] = u_seed;
    for (std::size_t k = 0; k < n_panels; ++k) {
        const double tk = t0_ + double(k) * panel_;
        const double inc = quad_.integrate(
            [&](double x) {
                return std::exp(-two_gtot * (panel_ - (x - tk)))
                     * source_term(x, target_, noise_);
            },
            tk, tk + panel_);
        boundary_u_[k + 1] = decay_ * boundary_u_[k] + inc;
    }
}

double CoherenceQuadrature::u(double t) const
{
    if (t < t0_ - 1e-9 || t > t_max() + 1e-9)
        throw std::out_of_range("CoherenceQuadrature: t outside precomputed range");
    t = std::clamp(t, t0_, t_max());

    std::size_t k = static_cast<std::size_t>((t - t0_) / panel_);
    if (k >= boundary_u_.size() - 1) k = boundary_u_.size() - 2;
    const double tk = t0_ + double(k) * panel_;
    const double dt = t - tk;
    if (dt == 0.0) return boundary_u_[k];

    const double two_gtot = 2.0 * noise_.total_rate();
    const double inc = quad_.integrate(
        [&](double x) {
            return std::exp(-two_gtot * (t - x)) * source_term(x, target_, noise_);
        },
        tk, t);
    return std::exp(-two_gtot * dt) * boundary_u_[k] + inc;
}

double steady_state_coherence(double a_f, const NoiseParams& noise)
{
    noise.validate();
    if (noise.Gamma == 0.0 && noise.gamma == 0.0)
        throw DegenerateNoiseless(
            "steady_state_coherence: gamma = Gamma = 0 leaves h_inf undefined (0/0)");
    if (noise.Gamma == 0.0) return 0.0;

    const double q = (2.0 * a_f - 1.0)
                   * (1.0 + noise.nbar - (2.0 * noise.nbar + 1.0) * a_f);
    const double radicand = q * noise.Gamma / noise.total_rate();
    if (radicand < 0.0)
        throw NegativeRadicand("steady_state_coherence: no steady state for this a_f");
    return std::sqrt(radicand);
}

std::pair<double, double> steady_band(const NoiseParams& noise)
{
    noise.validate();
    if (!(noise.Gamma > 0.0))
        throw std::invalid_argument("steady_band: requires Gamma > 0");

    // (2a-1)(1+nbar-(2 nbar+1)a) = -2(2 nbar+1) a^2 + (4 nbar+3) a - (1+nbar)
    const double A = -2.0 * (2.0 * noise.nbar + 1.0);
    const double B = 4.0 * noise.nbar + 3.0;
    const double C = -(1.0 + noise.nbar);
    const double disc = B * B - 4.0 * A * C;
    const double sq = std::sqrt(disc);
    double lo = (-B + sq) / (2.0 * A);
    double hi = (-B - sq) / (2.0 * A);
    if (lo > hi) std::swap(lo, hi);

    // Cap from h_inf <= 1/2: q <= Gtot/(4 Gamma). The quadratic's maximum is
    // 1/(8(2 nbar+1)) < (2 nbar+1)/4 <= Gtot/(4 Gamma), so the bound is
    // vacuous and the band is the full root interval.
    return {lo, hi};
}

SteadyStateReport steady_state_feasibility(double a_f, const NoiseParams& noise,
                                           const SystemParams& sys)
{
    noise.validate();
    sys.validate();

    SteadyStateReport report;
    if (noise.Gamma == 0.0) {
        // Degenerate: the source term vanishes asymptotically, so whatever
        // coherence exists decays at rate Gtot; steady coherence is 0 and the
        // band condition is vacuous.
        report.degenerate = true;
        report.h_inf = 0.0;
        report.feasible = true;
        return report;
    }

    const auto band = steady_band(noise);
    report.a_f_band = band;
    // closed interval: boundary targets count as feasible
    report.feasible = a_f >= band.first && a_f <= band.second;
    if (report.feasible) {
        report.h_inf = steady_state_coherence(a_f, noise);
        if (report.h_inf > 0.0) {
            report.steady_field_amplitude =
                2.0 * noise.Gamma
                * (1.0 + noise.nbar - (2.0 * noise.nbar + 1.0) * a_f)
                / (sys.mu * report.h_inf);
        }
    }
    return report;
}

}  // namespace tlpulse
