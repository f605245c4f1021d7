#include "tlpulse/csv_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tlpulse {

std::string fmt_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_config_header(std::ostream& out, const KeyValues& header)
{
    for (const auto& [key, value] : header) out << "# " << key << "=" << value << "\n";
}

bool write_pulse_csv(std::ostream& out, const SynthesizedPulse& pulse,
                     std::span<const double> grid, const KeyValues& header)
{
    write_config_header(out, header);
    out << "t,E,f,fdot,u,h,feasible\n";

    const auto& profile = pulse.profile();
    bool complete = true;
    for (const double t : grid) {
        const double u = pulse.u(t);
        const bool ok = u >= -kUTol;
        if (!ok) { complete = false; break; }
        const double h = u > 0.0 ? std::sqrt(u) : 0.0;
        out << fmt_g17(t) << ',' << fmt_g17(pulse.field_clamped(t)) << ','
            << fmt_g17(pulse.f(t)) << ',' << fmt_g17(pulse.fdot(t)) << ','
            << fmt_g17(u) << ',' << fmt_g17(h) << ',' << (ok ? 1 : 0) << "\n";
    }
    if (profile.first_violation_time)
        out << "# first_violation_time=" << fmt_g17(*profile.first_violation_time)
            << "\n";
    return complete;  // feasibility of the emitted window, not the whole horizon
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const KeyValues& header)
{
    write_config_header(out, header);
    out << "t,E,rho_gg,rho_ee,re_rho_ge,im_rho_ge,abs_rho_ge,f,h\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& y = traj.states[k];
        out << fmt_g17(traj.t[k]) << ',' << fmt_g17(traj.field[k]) << ','
            << fmt_g17(y.rho_gg) << ',' << fmt_g17(y.rho_ee()) << ','
            << fmt_g17(y.rho_ge.real()) << ',' << fmt_g17(y.rho_ge.imag()) << ','
            << fmt_g17(std::abs(y.rho_ge)) << ','
            << fmt_g17(traj.ref_f.empty() ? 0.0 : traj.ref_f[k]) << ','
            << fmt_g17(traj.ref_h.empty() ? 0.0 : traj.ref_h[k]) << "\n";
    }
}

void write_grid_long_csv(std::ostream& out, const FeasibilityGrid& grid,
                         const KeyValues& header)
{
    write_config_header(out, header);
    out << "axis1,t,u,accessible\n";
    for (std::size_t i = 0; i < grid.axis_values.size(); ++i)
        for (std::size_t k = 0; k < grid.time.size(); ++k)
            out << fmt_g17(grid.axis_values[i]) << ',' << fmt_g17(grid.time[k]) << ','
                << fmt_g17(grid.u[i][k]) << ',' << int(grid.accessible[i]) << "\n";
}

void write_grid_matrix(std::ostream& out, const FeasibilityGrid& grid)
{
    nlohmann::json meta;
    meta["axis"] = grid.axis.kind == AxisSpec::Kind::TargetPopulation ? "af" : "nbar";
    meta["a_i"] = grid.base_target.a_i;
    meta["a_f"] = grid.base_target.a_f;
    meta["alpha"] = grid.base_target.alpha;
    meta["t0"] = grid.base_target.t0;
    meta["phi0"] = grid.base_target.phi0;
    meta["gamma"] = grid.base_noise.gamma;
    meta["Gamma"] = grid.base_noise.Gamma;
    meta["nbar"] = grid.base_noise.nbar;
    meta["u_seed"] = grid.u_seed;
    meta["horizon"] = std::isfinite(grid.horizon) ? grid.horizon : -1.0;
    out << "# " << meta.dump() << "\n";

    out << "axis1";
    for (const double t : grid.time) out << ',' << fmt_g17(t);
    out << "\n";
    for (std::size_t i = 0; i < grid.axis_values.size(); ++i) {
        out << fmt_g17(grid.axis_values[i]);
        for (const double u : grid.u[i]) out << ',' << fmt_g17(u);
        out << "\n";
    }
}

std::size_t CsvTable::col(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw std::out_of_range("CsvTable: no column named " + name);
}

double CsvTable::meta_num(const std::string& key) const
{
    const auto it = meta.find(key);
    if (it == meta.end()) throw std::out_of_range("CsvTable: no meta key " + key);
    return std::stod(it->second);
}

CsvTable read_csv(std::istream& in)
{
    CsvTable table;
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(' '));
                key.erase(key.find_last_not_of(' ') + 1);
                table.meta[key] = line.substr(eq + 1);
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_columns) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            have_columns = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(table.columns.size());
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != table.columns.size())
            throw std::runtime_error("read_csv: ragged row");
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tlpulse
