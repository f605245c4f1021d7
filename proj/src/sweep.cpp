#include "tlpulse/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace tlpulse {

namespace {

double effective_horizon(const ControlTarget& target, const NoiseParams& noise,
                         double horizon)
{
    if (std::isfinite(horizon)) return horizon;
    // steady mode: run well past the transition and several coherence
    // lifetimes, then decide the tail analytically via the asymptotic source
    double end = target.t0 + 16.0 / target.alpha;
    const double gtot = noise.total_rate();
    if (gtot > 0.0) end += 8.0 / (2.0 * gtot);
    return end;
}

std::vector<double> axis_grid(const AxisSpec& axis)
{
    if (axis.steps < 2)
        throw std::invalid_argument("AxisSpec: steps must be >= 2");
    if (!(axis.max > axis.min))
        throw std::invalid_argument("AxisSpec: max must exceed min");
    std::vector<double> v(static_cast<std::size_t>(axis.steps));
    for (int i = 0; i < axis.steps; ++i)
        v[std::size_t(i)] = axis.min
            + (axis.max - axis.min) * double(i) / double(axis.steps - 1);
    return v;
}

void apply_axis_value(const AxisSpec& axis, double value, ControlTarget& target,
                      NoiseParams& noise)
{
    if (axis.kind == AxisSpec::Kind::TargetPopulation)
        target.a_f = value;
    else
        noise.nbar = value;
}

}  // namespace

bool protocol_feasible(const ControlTarget& target, const NoiseParams& noise,
                       double u_seed, double horizon, double dt)
{
    const bool steady = !std::isfinite(horizon);
    const double end = effective_horizon(target, noise, horizon);
    const auto grid = uniform_grid(target.t0, end, dt);
    const auto profile =
        solve_coherence(target, noise, grid, u_seed, OnsetPolicy::Annotate);
    if (!profile.fully_feasible()) return false;
    if (steady && source_term_limit(target, noise) < -1e-15) return false;
    return true;
}

FeasibilityGrid feasibility_map(const AxisSpec& axis, const SweepConfig& config)
{
    config.noise.validate();
    config.target.validate();

    FeasibilityGrid grid;
    grid.axis = axis;
    grid.axis_values = axis_grid(axis);
    grid.base_target = config.target;
    grid.base_noise = config.noise;
    grid.u_seed = config.u_seed;
    grid.horizon = config.horizon;

    const double end = effective_horizon(config.target, config.noise, config.horizon);
    grid.time = uniform_grid(config.target.t0, end, config.dt);

    const std::size_t n_cols = grid.axis_values.size();
    grid.u.resize(n_cols);
    grid.accessible.resize(n_cols);
    grid.first_violation.resize(n_cols);

    const auto column = [&](std::size_t i) {
        ControlTarget target = config.target;
        NoiseParams noise = config.noise;
        apply_axis_value(axis, grid.axis_values[i], target, noise);
        auto profile = solve_coherence(target, noise, grid.time, config.u_seed,
                                       OnsetPolicy::Annotate);
        grid.accessible[i] = profile.fully_feasible() ? 1 : 0;
        grid.first_violation[i] = profile.first_violation_time;
        grid.u[i] = std::move(profile.u);
    };

    unsigned n_threads = config.n_threads > 0
                             ? unsigned(config.n_threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, unsigned(n_cols));

    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n_cols; ++i) column(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = w; i < n_cols; i += n_threads) column(i);
            });
        }
        for (auto& worker : workers) worker.join();
    }
    return grid;
}

double max_feasible_nbar(const SweepConfig& config, double tol)
{
    const auto feasible = [&](double nbar) {
        NoiseParams noise = config.noise;
        noise.nbar = nbar;
        return protocol_feasible(config.target, noise, config.u_seed,
                                 config.horizon, config.dt);
    };

    if (!feasible(0.0))
        throw NoFeasibleBaseline("max_feasible_nbar: protocol infeasible already at nbar = 0");

    double hi = 1.0;
    while (feasible(hi)) {
        hi *= 2.0;
        if (hi > 64.0) return std::numeric_limits<double>::infinity();
    }
    const double hi_infeasible = hi;

    double lo = hi / 2.0 >= 1.0 ? hi / 2.0 : 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    const double bound = 0.5 * (lo + hi);

    // audit that feasibility really is monotone around the bracket
    for (int j = 1; j <= 4; ++j) {
        const double below = lo * double(j) / 5.0;
        if (!feasible(below))
            throw NonMonotoneBracket("max_feasible_nbar: infeasible point below the bound at nbar="
                                     + std::to_string(below));
    }
    for (int j = 1; j <= 4; ++j) {
        const double above = hi + (hi_infeasible - hi) * double(j) / 5.0;
        if (feasible(above))
            throw NonMonotoneBracket("max_feasible_nbar: feasible point above the bound at nbar="
                                     + std::to_string(above));
    }
    return bound;
}

std::vector<std::pair<double, double>> accessible_band(const SweepConfig& config,
                                                       int resolution)
{
    if (resolution < 50)
        throw std::invalid_argument("accessible_band: resolution must be >= 50");

    const auto feasible = [&](double a_f) {
        ControlTarget target = config.target;
        target.a_f = a_f;
        return protocol_feasible(target, config.noise, config.u_seed,
                                 config.horizon, config.dt);
    };

    AxisSpec axis{AxisSpec::Kind::TargetPopulation, 0.0, 1.0, resolution};
    const auto values = axis_grid(axis);
    std::vector<char> ok(values.size());
    {
        SweepConfig scan = config;
        auto grid = feasibility_map(axis, scan);
        ok = grid.accessible;
        // steady mode adds the asymptotic condition on top of the window scan
        if (!std::isfinite(config.horizon)) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                ControlTarget target = config.target;
                target.a_f = values[i];
                if (source_term_limit(target, config.noise) < -1e-15) ok[i] = 0;
            }
        }
    }

    const auto refine = [&](double good, double bad) {
        for (int it = 0; it < 60 && std::abs(bad - good) > 1e-4; ++it) {
            const double mid = 0.5 * (good + bad);
            (feasible(mid) ? good : bad) = mid;
        }
        return good;
    };

    std::vector<std::pair<double, double>> bands;
    std::size_t i = 0;
    while (i < values.size()) {
        if (!ok[i]) { ++i; continue; }
        std::size_t j = i;
        while (j + 1 < values.size() && ok[j + 1]) ++j;
        double lo = values[i];
        double hi = values[j];
        if (i > 0) lo = refine(values[i], values[i - 1]);
        if (j + 1 < values.size()) hi = refine(values[j], values[j + 1]);
        bands.emplace_back(lo, hi);
        i = j + 1;
    }
    return bands;
}

}  // namespace tlpulse
