#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tlpulse/integrator.hpp"
#include "tlpulse/pulse.hpp"
#include "tlpulse/sweep.hpp"

namespace tlpulse {

// Shortest decimal form that round-trips a double (17 significant digits),
// so CSV output is byte-stable and lossless.
std::string fmt_g17(double v);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// '# key=value' comment lines; every command emits its fully resolved
// configuration this way for reproducibility.
void write_config_header(std::ostream& out, const KeyValues& header);

// Columns: t,E,f,fdot,u,h,feasible. Emission stops at the first coherence
// violation (partial output) and a '# first_violation_time=<v>' trailer is
// appended. Returns true when the whole grid was feasible.
bool write_pulse_csv(std::ostream& out, const SynthesizedPulse& pulse,
                     std::span<const double> grid, const KeyValues& header);

// Columns: t,E,rho_gg,rho_ee,re_rho_ge,im_rho_ge,abs_rho_ge,f,h.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const KeyValues& header);

// Long form, columns: axis1,t,u,accessible.
void write_grid_long_csv(std::ostream& out, const FeasibilityGrid& grid,
                         const KeyValues& header);

// Compact matrix: one JSON comment line with the fixed parameters, a first
// row of time samples, then one row per axis value (axis value, u...).
void write_grid_matrix(std::ostream& out, const FeasibilityGrid& grid);

struct CsvTable {
    std::map<std::string, std::string> meta;  // from '# key=value' lines
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const;
    double meta_num(const std::string& key) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace tlpulse
