// Command-line front end: synth, simulate, map, steady, nbar-bound.
// Exit codes: 0 success, 2 infeasible protocol, 3 numerical failure,
// 64 usage error. All quantities in atomic units.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tlpulse/csv_io.hpp"
#include "tlpulse/integrator.hpp"
#include "tlpulse/pulse.hpp"
#include "tlpulse/svg.hpp"
#include "tlpulse/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitUsage = 64;

const double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Options {
    double omega = 2e-2;
    double mu = 6.0;
    double omega_p = kUnset;  // defaults to omega
    double gamma = 0.0;
    double big_gamma = 0.0;
    double nbar = 0.0;
    double ai = kUnset;
    double af = kUnset;
    double alpha = 1e-2;
    double t0 = kUnset;      // defaults to -8/alpha
    double t1 = kUnset;      // defaults to +8/alpha
    double dt = kUnset;      // defaults to min(carrier/64, 1/(50 Gtot))
    double phi0 = 0.0;
    double horizon = kUnset;  // defaults to t0 + 16/alpha
    double h_floor = 1e-9;
    double a_max = kUnset;   // no cap by default
    double u_seed = 0.0;
    std::string out;
    std::string axis = "af";
    double axis_min = 0.0;
    double axis_max = 1.0;
    int steps = 201;
    bool rwa = false;
    bool verify = false;
    std::string svg;
    double tol = 1e-3;  // nbar-bound bisection tolerance
};

struct Resolved {
    tlpulse::SystemParams sys;
    tlpulse::NoiseParams noise;
    tlpulse::ControlTarget target;
    tlpulse::SynthOptions synth;
    double t1;
    double dt;
    double horizon;
};

Resolved resolve(Options& o, bool needs_af)
{
    if (std::isnan(o.omega_p)) o.omega_p = o.omega;
    if (std::isnan(o.t0)) o.t0 = -8.0 / o.alpha;
    if (std::isnan(o.t1)) o.t1 = 8.0 / o.alpha;
    if (std::isnan(o.horizon)) o.horizon = o.t0 + 16.0 / o.alpha;
    if (std::isnan(o.ai)) throw std::invalid_argument("--ai is required");
    if (needs_af && std::isnan(o.af)) throw std::invalid_argument("--af is required");

    tlpulse::SystemParams sys(o.omega, o.mu, o.omega_p);
    tlpulse::NoiseParams noise{o.gamma, o.big_gamma, o.nbar};
    tlpulse::ControlTarget target{o.ai, std::isnan(o.af) ? o.ai : o.af, o.alpha,
                                  o.t0, o.phi0};
    sys.validate();
    noise.validate();
    target.validate();

    tlpulse::SynthOptions synth;
    synth.u_seed = o.u_seed;
    synth.h_floor = o.h_floor;
    if (!std::isnan(o.a_max)) synth.a_max = o.a_max;

    const double dt = std::isnan(o.dt) ? tlpulse::default_dt(sys, noise) : o.dt;
    if (!(dt > 0.0)) throw std::invalid_argument("--dt must be > 0");
    if (!(o.t1 > o.t0)) throw std::invalid_argument("--t1 must exceed --t0");
    return {sys, noise, target, synth, o.t1, dt, o.horizon};
}

tlpulse::KeyValues config_header(const Options& o, const Resolved& r,
                                 const std::string& command)
{
    using tlpulse::fmt_g17;
    tlpulse::KeyValues kv;
    kv.emplace_back("command", command);
    kv.emplace_back("omega", fmt_g17(r.sys.omega));
    kv.emplace_back("mu", fmt_g17(r.sys.mu));
    kv.emplace_back("omega_p", fmt_g17(r.sys.omega_p));
    kv.emplace_back("gamma", fmt_g17(r.noise.gamma));
    kv.emplace_back("Gamma", fmt_g17(r.noise.Gamma));
    kv.emplace_back("nbar", fmt_g17(r.noise.nbar));
    kv.emplace_back("ai", fmt_g17(r.target.a_i));
    kv.emplace_back("af", fmt_g17(r.target.a_f));
    kv.emplace_back("alpha", fmt_g17(r.target.alpha));
    kv.emplace_back("t0", fmt_g17(r.target.t0));
    kv.emplace_back("t1", fmt_g17(r.t1));
    kv.emplace_back("dt", fmt_g17(r.dt));
    kv.emplace_back("phi0", fmt_g17(r.target.phi0));
    kv.emplace_back("horizon", fmt_g17(r.horizon));
    kv.emplace_back("h_floor", fmt_g17(o.h_floor));
    kv.emplace_back("a_max", std::isnan(o.a_max) ? "none" : fmt_g17(o.a_max));
    kv.emplace_back("u_seed", fmt_g17(o.u_seed));
    if (command == "simulate") kv.emplace_back("frame", o.rwa ? "rwa" : "lab");
    return kv;
}

// E reconstruction from an emitted pulse CSV through the general inverse map;
// checks the synthesis round-trips through decimal text.
int verify_pulse_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "verify: cannot reopen " << path << "\n";
        return kExitNumerical;
    }
    const auto table = tlpulse::read_csv(in);
    const auto t_col = table.col("t");
    const auto e_col = table.col("E");
    const auto f_col = table.col("f");
    const auto fdot_col = table.col("fdot");
    const auto u_col = table.col("u");

    tlpulse::SystemParams sys(table.meta_num("omega"), table.meta_num("mu"),
                              table.meta_num("omega_p"));
    tlpulse::NoiseParams noise{table.meta_num("gamma"), table.meta_num("Gamma"),
                               table.meta_num("nbar")};
    const double phi0 = table.meta_num("phi0");
    const double t0 = table.meta_num("t0");
    const double gtot = noise.total_rate();

    std::vector<double> t, rho_gg;
    std::vector<tlpulse::cplx> rho_ge, rho_ge_dot;
    std::vector<double> e_ref;
    for (const auto& row : table.rows) {
        const double u = row[u_col];
        if (u < 1e-12) continue;  // reconstruction needs h > 0
        const double f = row[f_col];
        const double h = std::sqrt(u);
        const double s = (2.0 * f - 1.0)
                       * (2.0 * noise.Gamma
                              * (1.0 + noise.nbar - (2.0 * noise.nbar + 1.0) * f)
                          - row[fdot_col]);
        const double h_dot = (-2.0 * gtot * u + s) / (2.0 * h);
        const auto phase = std::polar(1.0, phi0);
        t.push_back(row[t_col]);
        rho_gg.push_back(f);
        rho_ge.push_back(h * phase);
        rho_ge_dot.push_back(h_dot * phase);
        e_ref.push_back(row[e_col]);
    }

    const auto samples = tlpulse::field_from_trajectory(t, rho_ge, rho_ge_dot,
                                                        rho_gg, sys, noise, t0);
    double max_err = 0.0;
    std::size_t n_checked = 0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (samples[k].singular) continue;
        max_err = std::max(max_err, std::abs(samples[k].E - e_ref[k]));
        ++n_checked;
    }
    std::cout << "verify: " << n_checked << " non-singular rows, max |dE| = "
              << tlpulse::fmt_g17(max_err) << "\n";
    if (max_err > 1e-6) {
        std::cerr << "verify: field reconstruction mismatch\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_synth(Options& o)
{
    auto r = resolve(o, true);
    const std::string path = o.out.empty() ? "pulse.csv" : o.out;

    tlpulse::SynthesizedPulse pulse(r.sys, r.noise, r.target,
                                    std::max(r.t1, r.horizon), r.synth);
    const auto grid = tlpulse::uniform_grid(r.target.t0, r.t1, r.dt);

    bool feasible = false;
    {
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot open " << path << " for writing\n";
            return kExitNumerical;
        }
        feasible = tlpulse::write_pulse_csv(out, pulse, grid,
                                            config_header(o, r, "synth"));
    }
    if (pulse.divergence_time())
        std::cout << (feasible ? "violation past window: " : "infeasible: ")
                  << "first_violation_time = "
                  << tlpulse::fmt_g17(*pulse.divergence_time()) << "\n";
    if (pulse.clip_events() > 0)
        std::cout << "clip_events = " << pulse.clip_events() << "\n";
    std::cout << "wrote " << path << "\n";

    if (o.verify) {
        const int rc = verify_pulse_csv(path);
        if (rc != kExitOk) return rc;
    }
    return feasible ? kExitOk : kExitInfeasible;
}

int cmd_simulate(Options& o)
{
    auto r = resolve(o, true);
    const std::string path = o.out.empty() ? "trajectory.csv" : o.out;

    tlpulse::SynthesizedPulse pulse(r.sys, r.noise, r.target,
                                    std::max(r.t1, r.horizon) + r.dt, r.synth);

    // start exactly on the prescribed trajectory: rho_gg = f(t0), coherence
    // magnitude sqrt(u_seed) at phase phi0 (diagonal for the default seed 0)
    tlpulse::TwoLevelState initial{
        pulse.f(r.target.t0),
        std::sqrt(std::max(0.0, o.u_seed)) * std::polar(1.0, r.target.phi0)};

    tlpulse::IntegrateOptions iopt;
    iopt.dt = r.dt;
    const auto kind = o.rwa ? tlpulse::RhsKind::Rwa : tlpulse::RhsKind::LabFrame;
    const auto traj = tlpulse::integrate(initial, kind, pulse, r.target.t0, r.t1, iopt);

    const auto profile = tlpulse::solve_coherence(r.target, r.noise, traj.t,
                                                  o.u_seed,
                                                  tlpulse::OnsetPolicy::Annotate);
    const auto report = tlpulse::verify_tracking(traj, r.target, profile);

    double peak_field = 0.0;
    for (const double e : traj.field) peak_field = std::max(peak_field, std::abs(e));

    {
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot open " << path << " for writing\n";
            return kExitNumerical;
        }
        tlpulse::write_trajectory_csv(out, traj, config_header(o, r, "simulate"));
        out << "# max_pop_dev=" << tlpulse::fmt_g17(report.max_pop_dev) << "\n";
        out << "# max_coh_dev=" << tlpulse::fmt_g17(report.max_coh_dev) << "\n";
        if (pulse.divergence_time())
            out << "# first_violation_time="
                << tlpulse::fmt_g17(*pulse.divergence_time()) << "\n";
    }

    std::cout << "frame            : " << (o.rwa ? "rwa" : "lab") << "\n";
    std::cout << "max |rho_gg - f| : " << tlpulse::fmt_g17(report.max_pop_dev)
              << " at t = " << tlpulse::fmt_g17(report.t_max_pop_dev) << "\n";
    std::cout << "max ||rho_ge|-h| : " << tlpulse::fmt_g17(report.max_coh_dev) << "\n";
    std::cout << "peak |E|         : " << tlpulse::fmt_g17(peak_field) << "\n";
    std::cout << "positivity       : " << tlpulse::fmt_g17(-report.max_positivity_violation)
              << "\n";
    if (r.noise.gamma == 0.0 && r.noise.Gamma == 0.0)
        std::cout << "purity drift     : " << tlpulse::fmt_g17(report.purity_drift)
                  << "\n";
    if (pulse.divergence_time()) {
        std::cout << "divergence time  : "
                  << tlpulse::fmt_g17(*pulse.divergence_time()) << "\n";
        std::cout << "post-loss drift  : "
                  << tlpulse::fmt_g17(report.post_loss_pop_drift) << "\n";
    }
    if (pulse.clip_events() > 0)
        std::cout << "clip events      : " << pulse.clip_events()
                  << " (pulse approximate)\n";
    std::cout << "wrote " << path << "\n";
    return pulse.fully_feasible() || *pulse.divergence_time() > r.t1
               ? kExitOk
               : kExitInfeasible;
}

int cmd_map(Options& o)
{
    auto r = resolve(o, o.axis == "af" ? false : true);
    const std::string path = o.out.empty() ? "map.csv" : o.out;

    tlpulse::AxisSpec axis;
    if (o.axis == "af") {
        axis.kind = tlpulse::AxisSpec::Kind::TargetPopulation;
    } else if (o.axis == "nbar") {
        axis.kind = tlpulse::AxisSpec::Kind::Nbar;
    } else {
        throw std::invalid_argument("--axis must be 'af' or 'nbar'");
    }
    axis.min = o.axis_min;
    axis.max = o.axis_max;
    axis.steps = o.steps;

    tlpulse::SweepConfig config{r.target, r.noise, o.u_seed, r.horizon};
    const auto grid = tlpulse::feasibility_map(axis, config);

    {
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot open " << path << " for writing\n";
            return kExitNumerical;
        }
        tlpulse::write_grid_long_csv(out, grid, config_header(o, r, "map"));
    }
    if (!o.svg.empty()) {
        std::ofstream out(o.svg);
        tlpulse::write_feasibility_svg(out, grid, "accessibility map");
        std::cout << "wrote " << o.svg << "\n";
    }

    // summary: contiguous accessible runs of the swept parameter
    std::size_t i = 0;
    double max_accessible = kUnset;
    while (i < grid.axis_values.size()) {
        if (!grid.accessible[i]) { ++i; continue; }
        std::size_t j = i;
        while (j + 1 < grid.axis_values.size() && grid.accessible[j + 1]) ++j;
        std::cout << "accessible " << o.axis << " in ["
                  << tlpulse::fmt_g17(grid.axis_values[i]) << ", "
                  << tlpulse::fmt_g17(grid.axis_values[j]) << "]\n";
        max_accessible = grid.axis_values[j];
        i = j + 1;
    }
    if (o.axis == "nbar" && !std::isnan(max_accessible))
        std::cout << "max accessible nbar ~= " << tlpulse::fmt_g17(max_accessible)
                  << " (grid resolution "
                  << tlpulse::fmt_g17((axis.max - axis.min) / double(axis.steps - 1))
                  << ")\n";
    std::cout << "wrote " << path << "\n";
    return kExitOk;
}

int cmd_steady(Options& o)
{
    auto r = resolve(o, true);
    const auto report = tlpulse::steady_state_feasibility(r.target.a_f, r.noise, r.sys);

    if (report.degenerate) {
        std::cout << "degenerate: steady coherence 0 (Gamma = 0)\n";
        return kExitOk;
    }
    const auto band = *report.a_f_band;
    std::cout << "band " << tlpulse::fmt_g17(band.first) << ","
              << tlpulse::fmt_g17(band.second) << "\n";
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        tlpulse::write_config_header(out, config_header(o, r, "steady"));
        out << "af,feasible,h_inf,band_lo,band_hi,steady_field_amplitude\n";
        out << tlpulse::fmt_g17(r.target.a_f) << ',' << (report.feasible ? 1 : 0)
            << ',' << tlpulse::fmt_g17(report.h_inf) << ','
            << tlpulse::fmt_g17(band.first) << ',' << tlpulse::fmt_g17(band.second)
            << ',' << tlpulse::fmt_g17(report.steady_field_amplitude) << "\n";
        std::cout << "wrote " << o.out << "\n";
    }
    if (!report.feasible) {
        std::cout << "infeasible: a_f = " << tlpulse::fmt_g17(r.target.a_f)
                  << " outside the band\n";
        return kExitInfeasible;
    }
    std::cout << "h_inf " << tlpulse::fmt_g17(report.h_inf) << "\n";
    std::cout << "steady_field_amplitude "
              << tlpulse::fmt_g17(report.steady_field_amplitude) << "\n";
    return kExitOk;
}

int cmd_nbar_bound(Options& o)
{
    auto r = resolve(o, true);
    tlpulse::SweepConfig config{r.target, r.noise, o.u_seed, r.horizon};
    const double bound = tlpulse::max_feasible_nbar(config, o.tol);
    std::cout << "horizon " << tlpulse::fmt_g17(r.horizon) << "\n";
    if (std::isinf(bound))
        std::cout << "nbar_bound inf (feasible beyond the search cap)\n";
    else
        std::cout << "nbar_bound " << tlpulse::fmt_g17(bound) << "\n";
    return kExitOk;
}

void add_common_options(CLI::App* sub, Options& o)
{
    sub->add_option("--omega", o.omega, "transition frequency (a.u.)");
    sub->add_option("--mu", o.mu, "dipole projection (a.u.)");
    sub->add_option("--omega-p", o.omega_p, "carrier frequency (default: omega)");
    sub->add_option("--gamma", o.gamma, "dephasing rate (a.u.)");
    sub->add_option("--big-gamma", o.big_gamma, "thermal dissipation rate (a.u.)");
    sub->add_option("--nbar", o.nbar, "mean thermal occupation");
    sub->add_option("--ai", o.ai, "initial ground population");
    sub->add_option("--af", o.af, "target ground population");
    sub->add_option("--alpha", o.alpha, "transition rate (1/a.u.)");
    sub->add_option("--t0", o.t0, "start time (default: -8/alpha)");
    sub->add_option("--t1", o.t1, "end time (default: +8/alpha)");
    sub->add_option("--dt", o.dt, "time step (default: min(carrier/64, 1/(50 Gtot)))");
    sub->add_option("--phi0", o.phi0, "coherence phase (rad)");
    sub->add_option("--horizon", o.horizon, "feasibility horizon (default: t0+16/alpha)");
    sub->add_option("--h-floor", o.h_floor, "coherence floor for field evaluation");
    sub->add_option("--a-max", o.a_max, "field amplitude cap (default: none)");
    sub->add_option("--u-seed", o.u_seed, "initial squared coherence u(t0)");
    sub->add_option("--out", o.out, "output CSV path");
    sub->set_config("--config", "", "key=value config file (flags override)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"reverse-engineered population control of a noisy two-level system"};
    app.require_subcommand(1);

    Options o;
    auto* synth = app.add_subcommand("synth", "synthesize the drive field, write CSV");
    add_common_options(synth, o);
    synth->add_flag("--verify", o.verify,
                    "re-read the CSV and check the general inverse map reproduces E");

    auto* simulate = app.add_subcommand(
        "simulate", "synthesize, then forward-integrate the full master equation");
    add_common_options(simulate, o);
    simulate->add_flag("--rwa", o.rwa, "integrate the rotating-frame equations instead");

    auto* map = app.add_subcommand("map", "feasibility map over a_f or nbar");
    add_common_options(map, o);
    map->add_option("--axis", o.axis, "swept parameter: af or nbar");
    map->add_option("--min", o.axis_min, "axis minimum");
    map->add_option("--max", o.axis_max, "axis maximum");
    map->add_option("--steps", o.steps, "axis steps (>= 2)");
    map->add_option("--svg", o.svg, "also write an SVG contour to this path");

    auto* steady = app.add_subcommand("steady", "steady-state coherence and band");
    add_common_options(steady, o);

    auto* nbar_bound =
        app.add_subcommand("nbar-bound", "largest feasible thermal occupation");
    add_common_options(nbar_bound, o);
    nbar_bound->add_option("--tol", o.tol, "bisection tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (synth->parsed()) return cmd_synth(o);
        if (simulate->parsed()) return cmd_simulate(o);
        if (map->parsed()) return cmd_map(o);
        if (steady->parsed()) return cmd_steady(o);
        if (nbar_bound->parsed()) return cmd_nbar_bound(o);
        std::cerr << "no command given\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tlpulse::InfeasibleAtOnset& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const tlpulse::NoFeasibleBaseline& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const tlpulse::NegativeRadicand& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}
