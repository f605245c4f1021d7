#pragma once

#include <cstddef>
#include <vector>

namespace tlpulse {

// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence. Accurate to machine precision for
// the small orders used here.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(std::size_t n);

    // integral of fn over [a, b]
    template <typename F>
    double integrate(F&& fn, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * fn(mid + half * nodes[i]);
        return half * acc;
    }
};

// Uniform time grid [t0, t0 + n*dt]; returns n+1 samples.
std::vector<double> uniform_grid(double t0, double t1, double dt);

}  // namespace tlpulse
