#pragma once

#include <cstddef>
#include <vector>

#include "swave/wiener.hpp"

namespace swave::noise {

/// Stationary Ornstein-Uhlenbeck coefficient sampled along a path,
/// y[k] ~ y(theta_{t} omega) at t = t0 + k*dt.
struct OUSample {
    double alpha = 1.0;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> y;

    double t_min() const { return t0; }
    double t_max() const { return t0 + dt * static_cast<double>(y.size() - 1); }
    std::size_t size() const { return y.size(); }
    double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }

    /// Linear interpolation inside the window; throws outside it.
    double at(double t) const;
    /// Index of a grid-aligned time; throws when off-grid or outside.
    std::size_t index_of(double t) const;

    /// Same values relabeled to times t0 + offset (pure relabeling, used to
    /// align pullback coefficients with absolute solver time).
    OUSample shifted(double offset) const {
        OUSample s = *this;
        s.t0 += offset;
        return s;
    }
};

/// Evaluates y(theta_t omega) = -alpha e^{-alpha t} Int_{-inf}^{t} e^{alpha s}
/// omega(s) ds + omega(t) on the path grid for t in [eval_from, t_max].
///
/// The improper integral is truncated at the window start; the neglected mass
/// is bounded by e^{alpha (t_min - t)} * sup|omega|, so the window must be
/// long enough that e^{alpha (t_min - eval_from)} < tail_tol.  Quadrature is
/// the trapezoid rule, evaluated through the stable recursion
/// J_{k+1} = e^{-alpha dt} J_k + (dt/2)(e^{-alpha dt} w_k + w_{k+1}) so no
/// intermediate exponential overflows.
OUSample ou_from_integral(const WienerPath& path, double alpha,
                          double eval_from, double tail_tol = 1e-8);

/// Earliest grid time on `path` from which ou_from_integral may start while
/// meeting the truncation tolerance.
double ou_earliest_eval(const WienerPath& path, double alpha,
                        double tail_tol = 1e-8);

/// Integrates dy + alpha y dt = dw along the path with the one-step recursion
/// y_{k+1} = y_k e^{-alpha dt} + (w_{k+1} - w_k), starting from y0 at the
/// grid-aligned time `from`.
OUSample ou_from_sde(const WienerPath& path, double alpha, double y0,
                     double from);

/// (1/t) Int_0^t y(r)^2 dr by the trapezoid rule on the sample grid.
/// t must be grid aligned, nonzero, and inside the window together with 0.
double ergodic_average(const OUSample& ou, double t);

/// Outcome of the pathwise-bound checks defining membership of Omega_m.
struct OmegaMReport {
    double m = 0.0;
    bool path_ok = false;     ///< |omega(t)| <= |t| at sampled |t| >= m
    bool ergodic_ok = false;  ///< |Int_0^t y^2 dr| <= |t|/alpha at |t| >= m
    bool bound_ok = false;    ///< |y(t)| <= 2|t| + 1/alpha at sampled t <= -m
    bool is_member = false;   ///< path_ok && ergodic_ok
};

/// Checks the sampled membership conditions on the overlap of the path and OU
/// windows.  Requires the overlap to reach beyond m on both sides.
OmegaMReport omega_m_check(const WienerPath& path, const OUSample& ou,
                           double m);

}  // namespace swave::noise
