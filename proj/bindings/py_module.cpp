#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tlpulse/control.hpp"
#include "tlpulse/integrator.hpp"
#include "tlpulse/model.hpp"
#include "tlpulse/pulse.hpp"
#include "tlpulse/sweep.hpp"

namespace py = pybind11;
using namespace tlpulse;

namespace {

std::vector<double> sample(const std::function<double(double)>& fn,
                           const std::vector<double>& ts)
{
    std::vector<double> out;
    out.reserve(ts.size());
    for (const double t : ts) out.push_back(fn(t));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Reverse-engineered drive synthesis for a dissipative two-level system";

    py::register_exception<InfeasibleAtOnset>(m, "InfeasibleAtOnset");
    py::register_exception<NegativeRadicand>(m, "NegativeRadicand");
    py::register_exception<DegenerateNoiseless>(m, "DegenerateNoiseless");
    py::register_exception<DivergentField>(m, "DivergentField");
    py::register_exception<OutsideValidity>(m, "OutsideValidity");
    py::register_exception<PopulationNodeSingularity>(m, "PopulationNodeSingularity");
    py::register_exception<StepTooLarge>(m, "StepTooLarge");
    py::register_exception<PositivityViolation>(m, "PositivityViolation");
    py::register_exception<GridMismatch>(m, "GridMismatch");
    py::register_exception<NoFeasibleBaseline>(m, "NoFeasibleBaseline");
    py::register_exception<NonMonotoneBracket>(m, "NonMonotoneBracket");

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<double, double>(), py::arg("omega"), py::arg("mu"))
        .def(py::init<double, double, double>(), py::arg("omega"), py::arg("mu"),
             py::arg("omega_p"))
        .def_readwrite("omega", &SystemParams::omega)
        .def_readwrite("mu", &SystemParams::mu)
        .def_readwrite("omega_p", &SystemParams::omega_p)
        .def("detuning", &SystemParams::detuning)
        .def("validate", &SystemParams::validate);

    py::class_<NoiseParams>(m, "NoiseParams")
        .def(py::init([](double gamma, double Gamma, double nbar) {
                 return NoiseParams{gamma, Gamma, nbar};
             }),
             py::arg("gamma") = 0.0, py::arg("Gamma") = 0.0, py::arg("nbar") = 0.0)
        .def_readwrite("gamma", &NoiseParams::gamma)
        .def_readwrite("Gamma", &NoiseParams::Gamma)
        .def_readwrite("nbar", &NoiseParams::nbar)
        .def("total_rate", &NoiseParams::total_rate)
        .def("validate", &NoiseParams::validate);

    py::class_<TwoLevelState>(m, "TwoLevelState")
        .def(py::init([](double rho_gg, cplx rho_ge) {
                 return TwoLevelState{rho_gg, rho_ge};
             }),
             py::arg("rho_gg"), py::arg("rho_ge") = cplx(0.0, 0.0))
        .def_readwrite("rho_gg", &TwoLevelState::rho_gg)
        .def_readwrite("rho_ge", &TwoLevelState::rho_ge)
        .def("rho_ee", &TwoLevelState::rho_ee)
        .def("positivity_margin", &TwoLevelState::positivity_margin)
        .def("purity", &TwoLevelState::purity)
        .def("validate", &TwoLevelState::validate, py::arg("tol") = kPositivityTol);

    py::class_<ControlTarget>(m, "ControlTarget")
        .def(py::init([](double a_i, double a_f, double alpha, double t0, double phi0) {
                 return ControlTarget{a_i, a_f, alpha, t0, phi0};
             }),
             py::arg("a_i"), py::arg("a_f"), py::arg("alpha"), py::arg("t0"),
             py::arg("phi0") = 0.0)
        .def_readwrite("a_i", &ControlTarget::a_i)
        .def_readwrite("a_f", &ControlTarget::a_f)
        .def_readwrite("alpha", &ControlTarget::alpha)
        .def_readwrite("t0", &ControlTarget::t0)
        .def_readwrite("phi0", &ControlTarget::phi0)
        .def("validate", &ControlTarget::validate, py::arg("tail_tol") = kTailTol);

    m.def("logistic", &logistic, py::arg("x"));
    m.def("g_sigmoid", &g_sigmoid, py::arg("t"), py::arg("alpha"));
    m.def("f_profile", &f_profile, py::arg("t"), py::arg("target"));
    m.def("f_dot", &f_dot, py::arg("t"), py::arg("target"));
    m.def("source_term", &source_term, py::arg("t"), py::arg("target"),
          py::arg("noise"));

    py::class_<CoherenceProfile>(m, "CoherenceProfile")
        .def_readonly("t", &CoherenceProfile::t)
        .def_readonly("u", &CoherenceProfile::u)
        .def_property_readonly("feasible",
                               [](const CoherenceProfile& p) {
                                   std::vector<bool> f(p.feasible.begin(),
                                                       p.feasible.end());
                                   return f;
                               })
        .def_readonly("first_violation_time", &CoherenceProfile::first_violation_time)
        .def_readonly("u_seed", &CoherenceProfile::u_seed)
        .def("fully_feasible", &CoherenceProfile::fully_feasible)
        .def("h", &CoherenceProfile::h, py::arg("i"));

    m.def(
        "solve_coherence",
        [](const ControlTarget& target, const NoiseParams& noise,
           const std::vector<double>& grid, double u_seed, bool annotate_onset) {
            return solve_coherence(target, noise, grid, u_seed,
                                   annotate_onset ? OnsetPolicy::Annotate
                                                  : OnsetPolicy::Throw);
        },
        py::arg("target"), py::arg("noise"), py::arg("grid"), py::arg("u_seed") = 0.0,
        py::arg("annotate_onset") = false);

    m.def("uniform_grid", &uniform_grid, py::arg("t0"), py::arg("t1"), py::arg("dt"));

    m.def("steady_state_coherence", &steady_state_coherence, py::arg("a_f"),
          py::arg("noise"));
    m.def("steady_band", &steady_band, py::arg("noise"));

    py::class_<SteadyStateReport>(m, "SteadyStateReport")
        .def_readonly("h_inf", &SteadyStateReport::h_inf)
        .def_readonly("feasible", &SteadyStateReport::feasible)
        .def_readonly("degenerate", &SteadyStateReport::degenerate)
        .def_readonly("a_f_band", &SteadyStateReport::a_f_band)
        .def_readonly("steady_field_amplitude",
                      &SteadyStateReport::steady_field_amplitude);
    m.def("steady_state_feasibility", &steady_state_feasibility, py::arg("a_f"),
          py::arg("noise"), py::arg("sys"));

    py::class_<SynthOptions>(m, "SynthOptions")
        .def(py::init<>())
        .def_readwrite("u_seed", &SynthOptions::u_seed)
        .def_readwrite("h_floor", &SynthOptions::h_floor)
        .def_readwrite("drive_h_floor", &SynthOptions::drive_h_floor)
        .def_readwrite("a_max", &SynthOptions::a_max)
        .def_readwrite("profile_dt", &SynthOptions::profile_dt);

    py::class_<SynthesizedPulse>(m, "SynthesizedPulse")
        .def(py::init<const SystemParams&, const NoiseParams&, const ControlTarget&,
                      double, const SynthOptions&>(),
             py::arg("sys"), py::arg("noise"), py::arg("target"), py::arg("t_max"),
             py::arg("options") = SynthOptions{})
        .def("field", &SynthesizedPulse::field, py::arg("t"))
        .def("field_clamped", &SynthesizedPulse::field_clamped, py::arg("t"))
        .def("drive", &SynthesizedPulse::drive, py::arg("t"))
        .def("envelope", &SynthesizedPulse::envelope, py::arg("t"))
        .def("amplitude", &SynthesizedPulse::amplitude, py::arg("t"))
        .def("u", &SynthesizedPulse::u, py::arg("t"))
        .def("h", &SynthesizedPulse::h, py::arg("t"))
        .def("f", &SynthesizedPulse::f, py::arg("t"))
        .def("fdot", &SynthesizedPulse::fdot, py::arg("t"))
        .def("field_samples",
             [](const SynthesizedPulse& p, const std::vector<double>& ts) {
                 return sample([&p](double t) { return p.field_clamped(t); }, ts);
             },
             py::arg("ts"))
        .def_property_readonly("valid_end", &SynthesizedPulse::valid_end)
        .def_property_readonly("divergence_time", &SynthesizedPulse::divergence_time)
        .def_property_readonly("fully_feasible", &SynthesizedPulse::fully_feasible)
        .def_property_readonly("clip_events", &SynthesizedPulse::clip_events)
        .def_property_readonly("profile", &SynthesizedPulse::profile,
                               py::return_value_policy::reference_internal);

    m.def("field_from_trajectory",
          [](const std::vector<double>& t, const std::vector<cplx>& rho_ge,
             const std::vector<cplx>& rho_ge_dot, const std::vector<double>& rho_gg,
             const SystemParams& sys, const NoiseParams& noise, double t0,
             double p_floor) {
              const auto samples = field_from_trajectory(t, rho_ge, rho_ge_dot,
                                                         rho_gg, sys, noise, t0,
                                                         p_floor);
              std::vector<double> e(samples.size());
              std::vector<bool> singular(samples.size());
              for (std::size_t k = 0; k < samples.size(); ++k) {
                  e[k] = samples[k].E;
                  singular[k] = samples[k].singular;
              }
              return py::make_tuple(e, singular);
          },
          py::arg("t"), py::arg("rho_ge"), py::arg("rho_ge_dot"), py::arg("rho_gg"),
          py::arg("sys"), py::arg("noise"), py::arg("t0"), py::arg("p_floor") = 1e-9);

    py::enum_<RhsKind>(m, "RhsKind")
        .value("LabFrame", RhsKind::LabFrame)
        .value("Rwa", RhsKind::Rwa);

    py::class_<IntegrateOptions>(m, "IntegrateOptions")
        .def(py::init<>())
        .def_readwrite("dt", &IntegrateOptions::dt)
        .def_readwrite("step_check", &IntegrateOptions::step_check)
        .def_readwrite("step_check_tol", &IntegrateOptions::step_check_tol)
        .def_readwrite("positivity_abort", &IntegrateOptions::positivity_abort);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("t", &Trajectory::t)
        .def_readonly("field", &Trajectory::field)
        .def_readonly("ref_f", &Trajectory::ref_f)
        .def_readonly("ref_h", &Trajectory::ref_h)
        .def_readonly("max_positivity_violation",
                      &Trajectory::max_positivity_violation)
        .def_property_readonly("rho_gg",
                               [](const Trajectory& tr) {
                                   std::vector<double> v(tr.states.size());
                                   for (std::size_t k = 0; k < v.size(); ++k)
                                       v[k] = tr.states[k].rho_gg;
                                   return v;
                               })
        .def_property_readonly("rho_ge", [](const Trajectory& tr) {
            std::vector<cplx> v(tr.states.size());
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = tr.states[k].rho_ge;
            return v;
        });

    m.def("integrate", &integrate, py::arg("initial"), py::arg("kind"),
          py::arg("pulse"), py::arg("t0"), py::arg("t1"),
          py::arg("options") = IntegrateOptions{});
    m.def("integrate_free", &integrate_free, py::arg("initial"), py::arg("sys"),
          py::arg("noise"), py::arg("t0"), py::arg("t1"),
          py::arg("options") = IntegrateOptions{});
    m.def("default_dt", &default_dt, py::arg("sys"), py::arg("noise"));

    py::class_<TrackingReport>(m, "TrackingReport")
        .def_readonly("max_pop_dev", &TrackingReport::max_pop_dev)
        .def_readonly("max_coh_dev", &TrackingReport::max_coh_dev)
        .def_readonly("t_max_pop_dev", &TrackingReport::t_max_pop_dev)
        .def_readonly("post_loss_pop_drift", &TrackingReport::post_loss_pop_drift)
        .def_readonly("trace_drift", &TrackingReport::trace_drift)
        .def_readonly("max_positivity_violation",
                      &TrackingReport::max_positivity_violation)
        .def_readonly("purity_drift", &TrackingReport::purity_drift)
        .def_readonly("n_valid", &TrackingReport::n_valid);
    m.def("verify_tracking", &verify_tracking, py::arg("traj"), py::arg("target"),
          py::arg("profile"));

    py::class_<AxisSpec> axis(m, "AxisSpec");
    py::enum_<AxisSpec::Kind>(axis, "Kind")
        .value("TargetPopulation", AxisSpec::Kind::TargetPopulation)
        .value("Nbar", AxisSpec::Kind::Nbar);
    axis.def(py::init([](AxisSpec::Kind kind, double min, double max, int steps) {
                 return AxisSpec{kind, min, max, steps};
             }),
             py::arg("kind"), py::arg("min"), py::arg("max"), py::arg("steps"))
        .def_readwrite("min", &AxisSpec::min)
        .def_readwrite("max", &AxisSpec::max)
        .def_readwrite("steps", &AxisSpec::steps);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init([](const ControlTarget& target, const NoiseParams& noise,
                         double u_seed, double horizon, double dt, int n_threads) {
                 return SweepConfig{target, noise, u_seed, horizon, dt, n_threads};
             }),
             py::arg("target"), py::arg("noise"), py::arg("u_seed") = 0.0,
             py::arg("horizon") = 0.0, py::arg("dt") = 0.5, py::arg("n_threads") = 0)
        .def_readwrite("target", &SweepConfig::target)
        .def_readwrite("noise", &SweepConfig::noise)
        .def_readwrite("u_seed", &SweepConfig::u_seed)
        .def_readwrite("horizon", &SweepConfig::horizon)
        .def_readwrite("dt", &SweepConfig::dt)
        .def_readwrite("n_threads", &SweepConfig::n_threads);

    py::class_<FeasibilityGrid>(m, "FeasibilityGrid")
        .def_readonly("axis_values", &FeasibilityGrid::axis_values)
        .def_readonly("time", &FeasibilityGrid::time)
        .def_readonly("u", &FeasibilityGrid::u)
        .def_property_readonly("accessible",
                               [](const FeasibilityGrid& g) {
                                   std::vector<bool> a(g.accessible.begin(),
                                                       g.accessible.end());
                                   return a;
                               })
        .def_readonly("first_violation", &FeasibilityGrid::first_violation);

    m.def("feasibility_map", &feasibility_map, py::arg("axis"), py::arg("config"));
    m.def("protocol_feasible", &protocol_feasible, py::arg("target"), py::arg("noise"),
          py::arg("u_seed"), py::arg("horizon"), py::arg("dt") = 0.5);
    m.def("max_feasible_nbar", &max_feasible_nbar, py::arg("config"),
          py::arg("tol") = 1e-3);
    m.def("accessible_band", &accessible_band, py::arg("config"),
          py::arg("resolution") = 201);

    m.def("lab_frame_rhs",
          [](const TwoLevelState& y, double field, const SystemParams& sys,
             const NoiseParams& noise) {
              const auto d = lab_frame_rhs(y, field, sys, noise);
              return py::make_tuple(d.d_rho_gg, d.d_rho_ge);
          },
          py::arg("state"), py::arg("field"), py::arg("sys"), py::arg("noise"));
    m.def("rwa_rhs",
          [](const TwoLevelState& y, cplx envelope, const SystemParams& sys,
             const NoiseParams& noise, double t, double t0) {
              const auto d = rwa_rhs(y, envelope, sys, noise, t, t0);
              return py::make_tuple(d.d_rho_gg, d.d_rho_ge);
          },
          py::arg("state"), py::arg("envelope"), py::arg("sys"), py::arg("noise"),
          py::arg("t"), py::arg("t0"));
}
