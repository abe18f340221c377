#include "swave/ou.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swave::noise {

double OUSample::at(double t) const {
    if (y.empty() || dt <= 0.0)
        throw std::invalid_argument("OUSample: empty sample");
    const double k = (t - t0) / dt;
    if (k < -1e-9 || k > static_cast<double>(y.size() - 1) + 1e-9)
        throw std::invalid_argument("OUSample: time " + std::to_string(t) +
                                    " outside window [" + std::to_string(t_min()) +
                                    ", " + std::to_string(t_max()) + "]");
    const auto lo = static_cast<std::size_t>(
        std::clamp(std::floor(k), 0.0, static_cast<double>(y.size() - 1)));
    const std::size_t hi = std::min(lo + 1, y.size() - 1);
    const double frac = std::clamp(k - static_cast<double>(lo), 0.0, 1.0);
    return y[lo] + frac * (y[hi] - y[lo]);
}

std::size_t OUSample::index_of(double t) const {
    const double k = (t - t0) / dt;
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * (1.0 + std::abs(k)))
        throw std::invalid_argument("OUSample: time " + std::to_string(t) +
                                    " is not grid aligned");
    if (kr < -0.5 || kr > static_cast<double>(y.size()) - 0.5)
        throw std::invalid_argument("OUSample: time " + std::to_string(t) +
                                    " outside window");
    return static_cast<std::size_t>(kr);
}

OUSample ou_from_integral(const WienerPath& path, double alpha,
                          double eval_from, double tail_tol) {
    if (alpha <= 0.0)
        throw std::invalid_argument("ou_from_integral: alpha must be > 0");
    if (tail_tol <= 0.0)
        throw std::invalid_argument("ou_from_integral: tail_tol must be > 0");
    const std::size_t start = path.index_of(eval_from);
    const double gap = path.time(start) - path.t_min();
    if (std::exp(-alpha * gap) >= tail_tol)
        throw std::invalid_argument(
            "ou_from_integral: window too short for truncation tolerance; "
            "need e^{alpha (t_min - eval_from)} < tail_tol, have gap " +
            std::to_string(gap));

    const double dt = path.dt;
    const double decay = std::exp(-alpha * dt);
    // J_k = e^{-alpha t_k} Int_{t_min}^{t_k} e^{alpha s} omega(s) ds
    double J = 0.0;
    for (std::size_t k = 1; k <= start; ++k)
        J = decay * J +
            0.5 * dt * (decay * path.samples[k - 1] + path.samples[k]);

    OUSample ou;
    ou.alpha = alpha;
    ou.dt = dt;
    ou.t0 = path.time(start);
    ou.y.reserve(path.size() - start);
    ou.y.push_back(-alpha * J + path.samples[start]);
    for (std::size_t k = start + 1; k < path.size(); ++k) {
        J = decay * J +
            0.5 * dt * (decay * path.samples[k - 1] + path.samples[k]);
        ou.y.push_back(-alpha * J + path.samples[k]);
    }
    return ou;
}

double ou_earliest_eval(const WienerPath& path, double alpha,
                        double tail_tol) {
    if (alpha <= 0.0)
        throw std::invalid_argument("ou_earliest_eval: alpha must be > 0");
    if (tail_tol <= 0.0)
        throw std::invalid_argument("ou_earliest_eval: tail_tol must be > 0");
    const double gap = std::log(1.0 / tail_tol) / alpha;
    const auto skip =
        static_cast<std::size_t>(std::ceil(gap / path.dt)) + 1;
    if (skip >= path.size())
        throw std::invalid_argument(
            "ou_earliest_eval: window shorter than the truncation gap");
    return path.time(skip);
}

OUSample ou_from_sde(const WienerPath& path, double alpha, double y0,
                     double from) {
    if (alpha <= 0.0)
        throw std::invalid_argument("ou_from_sde: alpha must be > 0");
    const std::size_t start = path.index_of(from);
    OUSample ou;
    ou.alpha = alpha;
    ou.dt = path.dt;
    ou.t0 = path.time(start);
    ou.y.reserve(path.size() - start);
    const double decay = std::exp(-alpha * path.dt);
    double y = y0;
    ou.y.push_back(y);
    for (std::size_t k = start + 1; k < path.size(); ++k) {
        y = y * decay + (path.samples[k] - path.samples[k - 1]);
        ou.y.push_back(y);
    }
    return ou;
}

double ergodic_average(const OUSample& ou, double t) {
    if (t == 0.0)
        throw std::invalid_argument("ergodic_average: t must be nonzero");
    const std::size_t a = ou.index_of(std::min(0.0, t));
    const std::size_t b = ou.index_of(std::max(0.0, t));
    double acc = 0.0;
    for (std::size_t k = a; k < b; ++k)
        acc += 0.5 * ou.dt * (ou.y[k] * ou.y[k] + ou.y[k + 1] * ou.y[k + 1]);
    return acc / std::abs(t);
}

OmegaMReport omega_m_check(const WienerPath& path, const OUSample& ou,
                           double m) {
    if (m <= 0.0) throw std::invalid_argument("omega_m_check: m must be > 0");
    if (std::abs(path.dt - ou.dt) > 1e-12 * path.dt)
        throw std::invalid_argument("omega_m_check: path/OU grids differ");
    const double lo = std::max(path.t_min(), ou.t_min());
    const double hi = std::min(path.t_max(), ou.t_max());
    if (!(lo < -m && hi > m))
        throw std::invalid_argument(
            "omega_m_check: overlap window must extend beyond |t| = m");

    OmegaMReport rep;
    rep.m = m;
    rep.path_ok = true;
    rep.ergodic_ok = true;
    rep.bound_ok = true;

    const std::size_t pa = path.index_of(lo), pb = path.index_of(hi);
    for (std::size_t k = pa; k <= pb; ++k) {
        const double t = path.time(k);
        if (std::abs(t) >= m && std::abs(path.samples[k]) > std::abs(t)) {
            rep.path_ok = false;
            break;
        }
    }

    // Cumulative trapezoid of y^2 from 0 in both directions.
    const std::size_t z = ou.index_of(0.0);
    const std::size_t oa = ou.index_of(lo), ob = ou.index_of(hi);
    const double alpha = ou.alpha;
    const double growth_cap = 1.0 / alpha;  // alpha Int e^{alpha s}|s| ds
    double acc = 0.0;
    for (std::size_t k = z; k < ob && rep.ergodic_ok; ++k) {
        acc += 0.5 * ou.dt * (ou.y[k] * ou.y[k] + ou.y[k + 1] * ou.y[k + 1]);
        const double t = ou.time(k + 1);
        if (t >= m && std::abs(acc) > t / alpha) rep.ergodic_ok = false;
    }
    acc = 0.0;
    for (std::size_t k = z; k > oa; --k) {
        acc += 0.5 * ou.dt * (ou.y[k] * ou.y[k] + ou.y[k - 1] * ou.y[k - 1]);
        const double t = ou.time(k - 1);
        if (-t >= m) {
            if (rep.ergodic_ok && std::abs(acc) > -t / alpha)
                rep.ergodic_ok = false;
            if (rep.bound_ok &&
                std::abs(ou.y[k - 1]) > 2.0 * std::abs(t) + growth_cap)
                rep.bound_ok = false;
        }
    }

    rep.is_member = rep.path_ok && rep.ergodic_ok;
    return rep;
}

}  // namespace swave::noise
