#include "tlpulse/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlpulse {

GaussLegendre::GaussLegendre(std::size_t n) : nodes(n), weights(n)
{
    if (n == 0) throw std::invalid_argument("GaussLegendre: order must be > 0");
    for (std::size_t i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
        double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * double(k) - 1.0) * x * p1 - (double(k) - 1.0) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

std::vector<double> uniform_grid(double t0, double t1, double dt)
{
    if (!(dt > 0.0)) throw std::invalid_argument("uniform_grid: dt must be > 0");
    if (!(t1 > t0)) throw std::invalid_argument("uniform_grid: t1 must be > t0");
    const std::size_t n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    std::vector<double> t(n + 1);
    for (std::size_t k = 0; k <= n; ++k) t[k] = t0 + double(k) * dt;
    return t;
}

}  // namespace tlpulse
