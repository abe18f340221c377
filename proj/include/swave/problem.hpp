#pragma once

#include <string>
#include <vector>

#include "swave/forcing.hpp"
#include "swave/grid.hpp"
#include "swave/nonlinearity.hpp"

namespace swave::dynamics {

/// Full problem description for the transformed first-order system
///   du/dt = -delta u + v + eps y u
///   dv/dt = -(alpha - delta) v - (lambda + delta^2 - alpha delta) u
///           + Lap u - f(x, u) + g(t, x) - eps y v - eps (eps y - 2 delta) y u
/// with homogeneous Dirichlet conditions on [-L, L].
struct ProblemSpec {
    double alpha = 1.0;
    double lambda = 1.0;
    double epsilon = 0.0;  ///< noise coupling strength
    double delta = 0.1;    ///< damping-split parameter of the transform
    Nonlinearity nl;
    Forcing g;
    Grid grid;

    /// lambda + delta^2 - alpha delta, the coefficient of u in the system.
    double beta() const { return lambda + delta * delta - alpha * delta; }
};

/// min{delta/2, (alpha - delta)/4, delta c2 / 4}: the uniform decay rate
/// entering the weighted forcing integral and the absorbing radius.
double sigma_of(const ProblemSpec& spec);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> issues;
};

/// Structural validation: parameter ranges (alpha > 0, lambda > 0,
/// 0 <= epsilon < 1, delta >= 0 with alpha - delta > 0 and beta > 0), grid
/// sanity, the derived sign facts alpha - delta - 2 sigma > 0 and
/// delta - 2 sigma >= 0, and sampled probes of the nonlinearity's growth and
/// sign conditions on an (x, s) lattice.  Collects human-readable issues
/// instead of throwing.
ValidationReport validate_spec(const ProblemSpec& spec);

}  // namespace swave::dynamics
