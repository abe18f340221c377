#pragma once

#include <functional>
#include <string>

namespace swave::dynamics {

/// Time-dependent forcing g(t, x).  `period` > 0 marks a declared temporal
/// period (used by periodicity diagnostics); 0 means non-periodic.
struct Forcing {
    std::string kind = "zero";
    double amplitude = 0.0;
    double width = 1.0;
    double center = 0.0;
    double period = 0.0;
    std::function<double(double t, double x)> eval;

    double operator()(double t, double x) const { return eval(t, x); }
};

Forcing forcing_zero();
/// Static Gaussian bump g(x) = A exp(-(x - c)^2 / w^2).
Forcing forcing_pulse(double amplitude, double width, double center = 0.0);
/// g(t, x) = A cos(2 pi t / T) exp(-(x - c)^2 / w^2).
Forcing forcing_periodic(double amplitude, double width, double period,
                         double center = 0.0);
/// Exponentially growing magnitude toward the past, Int of the weighted
/// square diverges; exists to exercise the divergence diagnostics.
Forcing forcing_divergent(double rate);

}  // namespace swave::dynamics
