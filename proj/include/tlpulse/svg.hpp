#pragma once

#include <iosfwd>
#include <string>

#include "tlpulse/sweep.hpp"

namespace tlpulse {

// Static contour of a feasibility grid: cells shaded by coherence magnitude
// (blue where u >= 0) or by the imaginary-coherence magnitude (red where
// u < 0), with the accessible axis ranges outlined in dashed red. Plain
// hand-written SVG, no plotting dependency.
void write_feasibility_svg(std::ostream& out, const FeasibilityGrid& grid,
                           const std::string& title = {});

}  // namespace tlpulse
