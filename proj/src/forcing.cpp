#include "swave/forcing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swave::dynamics {

Forcing forcing_zero() {
    Forcing g;
    g.kind = "zero";
    g.eval = [](double, double) { return 0.0; };
    return g;
}

Forcing forcing_pulse(double amplitude, double width, double center) {
    if (width <= 0.0)
        throw std::invalid_argument("forcing_pulse: width must be > 0");
    Forcing g;
    g.kind = "pulse";
    g.amplitude = amplitude;
    g.width = width;
    g.center = center;
    g.eval = [amplitude, width, center](double, double x) {
        const double r = (x - center) / width;
        return amplitude * std::exp(-r * r);
    };
    return g;
}

Forcing forcing_periodic(double amplitude, double width, double period,
                         double center) {
    if (width <= 0.0 || period <= 0.0)
        throw std::invalid_argument(
            "forcing_periodic: width and period must be > 0");
    Forcing g;
    g.kind = "periodic";
    g.amplitude = amplitude;
    g.width = width;
    g.center = center;
    g.period = period;
    g.eval = [amplitude, width, period, center](double t, double x) {
        const double r = (x - center) / width;
        return amplitude * std::cos(2.0 * std::numbers::pi * t / period) *
               std::exp(-r * r);
    };
    return g;
}

Forcing forcing_divergent(double rate) {
    if (rate <= 0.0)
        throw std::invalid_argument("forcing_divergent: rate must be > 0");
    Forcing g;
    g.kind = "divergent";
    g.amplitude = 1.0;
    g.eval = [rate](double t, double x) {
        return std::exp(rate * std::abs(t)) * std::exp(-x * x);
    };
    return g;
}

}  // namespace swave::dynamics
