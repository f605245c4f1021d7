#include "tlpulse/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace tlpulse {

namespace {

constexpr int kPlotW = 720;
constexpr int kPlotH = 480;
constexpr int kMarginL = 70;
constexpr int kMarginR = 20;
constexpr int kMarginT = 36;
constexpr int kMarginB = 50;

std::string rgb(int r, int g, int b)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "rgb(%d,%d,%d)", r, g, b);
    return buf;
}

// u >= 0: white -> blue with sqrt(u)/scale; u < 0: white -> red with
// sqrt(-u)/scale (the imaginary-coherence magnitude).
std::string cell_color(double u, double scale)
{
    if (scale <= 0.0) scale = 1.0;
    const double mag = std::sqrt(std::abs(u));
    const double w = std::clamp(mag / scale, 0.0, 1.0);
    const int fade = int(255.0 * (1.0 - w));
    return u >= 0.0 ? rgb(fade, fade, 255) : rgb(255, fade, fade);
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void write_feasibility_svg(std::ostream& out, const FeasibilityGrid& grid,
                           const std::string& title)
{
    const std::size_t nx = grid.time.size();
    const std::size_t ny = grid.axis_values.size();
    const double t_lo = grid.time.front(), t_hi = grid.time.back();
    const double a_lo = grid.axis_values.front(), a_hi = grid.axis_values.back();

    const auto x_of = [&](double t) {
        return kMarginL + (t - t_lo) / (t_hi - t_lo) * kPlotW;
    };
    const auto y_of = [&](double a) {
        return kMarginT + (a_hi - a) / (a_hi - a_lo) * kPlotH;
    };

    double h_scale = 0.0;
    for (const auto& col : grid.u)
        for (const double u : col) h_scale = std::max(h_scale, std::sqrt(std::abs(u)));

    const int width = kMarginL + kPlotW + kMarginR;
    const int height = kMarginT + kPlotH + kMarginB;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
        << "' height='" << height << "'>\n";
    out << "<rect x='0' y='0' width='" << width << "' height='" << height
        << "' fill='white'/>\n";
    if (!title.empty())
        out << "<text x='" << kMarginL << "' y='" << kMarginT - 12
            << "' font-family='sans-serif' font-size='14'>" << title << "</text>\n";

    const double cw = double(kPlotW) / double(nx);
    const double ch = double(kPlotH) / double(ny);
    for (std::size_t i = 0; i < ny; ++i) {
        for (std::size_t k = 0; k < nx; ++k) {
            const double x = kMarginL + double(k) * cw;
            const double y = kMarginT + double(ny - 1 - i) * ch;
            out << "<rect x='" << num(x) << "' y='" << num(y) << "' width='"
                << num(cw + 0.5) << "' height='" << num(ch + 0.5) << "' fill='"
                << cell_color(grid.u[i][k], h_scale) << "'/>\n";
        }
    }

    // dashed outline around each contiguous run of accessible axis values
    std::size_t i = 0;
    while (i < ny) {
        if (!grid.accessible[i]) { ++i; continue; }
        std::size_t j = i;
        while (j + 1 < ny && grid.accessible[j + 1]) ++j;
        const double y_top = kMarginT + double(ny - 1 - j) * ch;
        const double y_bot = kMarginT + double(ny - i) * ch;
        out << "<rect x='" << kMarginL << "' y='" << num(y_top) << "' width='"
            << kPlotW << "' height='" << num(y_bot - y_top)
            << "' fill='none' stroke='red' stroke-width='2' stroke-dasharray='8,5'/>\n";
        i = j + 1;
    }

    out << "<rect x='" << kMarginL << "' y='" << kMarginT << "' width='" << kPlotW
        << "' height='" << kPlotH << "' fill='none' stroke='black'/>\n";

    for (int k = 0; k <= 5; ++k) {
        const double t = t_lo + (t_hi - t_lo) * double(k) / 5.0;
        const double a = a_lo + (a_hi - a_lo) * double(k) / 5.0;
        out << "<line x1='" << num(x_of(t)) << "' y1='" << kMarginT + kPlotH
            << "' x2='" << num(x_of(t)) << "' y2='" << kMarginT + kPlotH + 6
            << "' stroke='black'/>\n";
        out << "<text x='" << num(x_of(t)) << "' y='" << kMarginT + kPlotH + 22
            << "' font-family='sans-serif' font-size='11' text-anchor='middle'>"
            << num(t) << "</text>\n";
        out << "<line x1='" << kMarginL - 6 << "' y1='" << num(y_of(a)) << "' x2='"
            << kMarginL << "' y2='" << num(y_of(a)) << "' stroke='black'/>\n";
        out << "<text x='" << kMarginL - 10 << "' y='" << num(y_of(a) + 4)
            << "' font-family='sans-serif' font-size='11' text-anchor='end'>"
            << num(a) << "</text>\n";
    }

    out << "<text x='" << kMarginL + kPlotW / 2 << "' y='" << height - 10
        << "' font-family='sans-serif' font-size='13' text-anchor='middle'>"
           "t (a.u.)</text>\n";
    const std::string axis_name =
        grid.axis.kind == AxisSpec::Kind::TargetPopulation ? "a_f" : "nbar";
    out << "<text x='16' y='" << kMarginT + kPlotH / 2
        << "' font-family='sans-serif' font-size='13' text-anchor='middle' "
           "transform='rotate(-90 16 "
        << kMarginT + kPlotH / 2 << ")'>" << axis_name << "</text>\n";
    out << "</svg>\n";
}

}  // namespace tlpulse
