#pragma once

#include <functional>
#include <string>

namespace swave::dynamics {

/// Damping-compatible nonlinearity f(x, s) with antiderivative
/// F(x, s) = Int_0^s f(x, r) dr and the structural constants of the growth
/// and sign conditions
///   |f(x, s)|      <= c1 |s|^gamma + phi1(x)
///   f(x, s) s      >= c2 F(x, s) + phi2(x)
///   F(x, s)        >= c3 |s|^{gamma+1} - phi3(x).
struct Nonlinearity {
    std::string family;  ///< "power" or "zero"
    double gamma = 1.0;
    double a = 0.0;  ///< power-family coefficient
    double c1 = 0.0, c2 = 0.0, c3 = 0.0;
    std::function<double(double x, double s)> f;
    std::function<double(double x, double s)> F;
    std::function<double(double x)> phi1, phi2, phi3;
};

/// f = a |s|^{gamma-1} s, F = a |s|^{gamma+1} / (gamma+1); the structural
/// conditions hold with c1 = a, c2 = gamma + 1, c3 = a/(gamma+1) and
/// phi_i = 0.  Requires gamma >= 1 and a > 0.
Nonlinearity make_power_nonlinearity(double gamma, double a);

/// f = F = 0 for linear runs.  Uses the gamma = 1 constants (c1 = 1, c2 = 2)
/// so the damping-rate formula stays meaningful; c3 is nominal (1e-12) with a
/// constant phi3 = 1 absorbing the lower bound on bounded probe ranges.
Nonlinearity zero_nonlinearity();

}  // namespace swave::dynamics
