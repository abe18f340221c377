#include "swave/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace swave::dynamics {

Nonlinearity make_power_nonlinearity(double gamma, double a) {
    if (gamma < 1.0)
        throw std::invalid_argument(
            "make_power_nonlinearity: gamma must be >= 1");
    if (a <= 0.0)
        throw std::invalid_argument("make_power_nonlinearity: a must be > 0");
    Nonlinearity nl;
    nl.family = "power";
    nl.gamma = gamma;
    nl.a = a;
    nl.c1 = a;
    nl.c2 = gamma + 1.0;
    nl.c3 = a / (gamma + 1.0);
    nl.f = [gamma, a](double, double s) {
        if (s == 0.0) return 0.0;
        return a * std::pow(std::abs(s), gamma - 1.0) * s;
    };
    nl.F = [gamma, a](double, double s) {
        return a * std::pow(std::abs(s), gamma + 1.0) / (gamma + 1.0);
    };
    nl.phi1 = [](double) { return 0.0; };
    nl.phi2 = [](double) { return 0.0; };
    nl.phi3 = [](double) { return 0.0; };
    return nl;
}

Nonlinearity zero_nonlinearity() {
    Nonlinearity nl;
    nl.family = "zero";
    nl.gamma = 1.0;
    nl.a = 0.0;
    nl.c1 = 1.0;
    nl.c2 = 2.0;
    nl.c3 = 1e-12;
    nl.f = [](double, double) { return 0.0; };
    nl.F = [](double, double) { return 0.0; };
    nl.phi1 = [](double) { return 0.0; };
    nl.phi2 = [](double) { return 0.0; };
    nl.phi3 = [](double) { return 1.0; };
    return nl;
}

}  // namespace swave::dynamics
