#include "swave/integrator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swave/energy.hpp"
#include "swave/errors.hpp"
#include "swave/pullback.hpp"

namespace swave::dynamics {

namespace {

enum class FastF { zero, linear, square, cubic, general, custom };

FastF classify(const Nonlinearity& nl) {
    if (nl.family == "zero") return FastF::zero;
    if (nl.family == "power") {
        if (nl.gamma == 1.0) return FastF::linear;
        if (nl.gamma == 2.0) return FastF::square;
        if (nl.gamma == 3.0) return FastF::cubic;
        return FastF::general;
    }
    return FastF::custom;
}

enum class FastG { zero, pulse, periodic, custom };

FastG classify(const Forcing& g) {
    if (g.kind == "zero") return FastG::zero;
    if (g.kind == "pulse") return FastG::pulse;
    if (g.kind == "periodic") return FastG::periodic;
    return FastG::custom;
}

void check_finite(const State& s, double t) {
    for (std::size_t i = 0; i < s.u.size(); ++i)
        if (!std::isfinite(s.u[i]))
            throw numeric_error("rhs: non-finite u at node " +
                                std::to_string(i) + ", t = " +
                                std::to_string(t));
    for (std::size_t i = 0; i < s.v.size(); ++i)
        if (!std::isfinite(s.v[i]))
            throw numeric_error("rhs: non-finite v at node " +
                                std::to_string(i) + ", t = " +
                                std::to_string(t));
}

void rhs_into(const State& s, double t, double y, const ProblemSpec& spec,
              State& out) {
    const Grid& grid = spec.grid;
    require_size(s.u, grid, "rhs");
    require_size(s.v, grid, "rhs");
    check_finite(s, t);

    const std::size_t n = grid.n;
    out.u.resize(n);
    out.v.resize(n);

    const double dx = grid.dx();
    const double idx2 = 1.0 / (dx * dx);
    const double eps = spec.epsilon;
    const double epsy = eps * y;
    const double cv = spec.alpha - spec.delta + epsy;
    const double cu = spec.beta() + eps * (epsy - 2.0 * spec.delta) * y;
    const double du_u = -spec.delta + epsy;

    const FastF ff = classify(spec.nl);
    const FastG fg = classify(spec.g);
    const double a = spec.nl.a;
    const double gamma = spec.nl.gamma;
    const double cosf = fg == FastG::periodic
                            ? std::cos(2.0 * std::numbers::pi * t /
                                       spec.g.period) *
                                  spec.g.amplitude
                            : spec.g.amplitude;

    for (std::size_t i = 0; i < n; ++i) {
        const double ui = s.u[i];
        const double vi = s.v[i];
        const double ul = i > 0 ? s.u[i - 1] : 0.0;
        const double ur = i + 1 < n ? s.u[i + 1] : 0.0;
        const double lap = (ul - 2.0 * ui + ur) * idx2;

        double fval;
        switch (ff) {
            case FastF::zero: fval = 0.0; break;
            case FastF::linear: fval = a * ui; break;
            case FastF::square: fval = a * std::abs(ui) * ui; break;
            case FastF::cubic: fval = a * ui * ui * ui; break;
            case FastF::general:
                fval = ui == 0.0
                           ? 0.0
                           : a * std::pow(std::abs(ui), gamma - 1.0) * ui;
                break;
            default: fval = spec.nl.f(grid.x(i), ui);
        }

        double gval;
        switch (fg) {
            case FastG::zero: gval = 0.0; break;
            case FastG::pulse:
            case FastG::periodic: {
                const double r = (grid.x(i) - spec.g.center) / spec.g.width;
                gval = cosf * std::exp(-r * r);
                break;
            }
            default: gval = spec.g(t, grid.x(i));
        }

        out.u[i] = du_u * ui + vi;
        out.v[i] = lap - cv * vi - cu * ui - fval + gval;
    }
}

inline void pin_boundary(State& k) {
    k.u.front() = 0.0;
    k.u.back() = 0.0;
    k.v.front() = 0.0;
    k.v.back() = 0.0;
}

struct StepScratch {
    State k1, k2, k3, k4, tmp;
};

void step_impl(State& s, double t, double dt, const OUSample* ou,
               const ProblemSpec& spec, double c_stab, StepScratch& sc) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
    const double dx = spec.grid.dx();
    if (dt > c_stab * dx * (1.0 + 1e-12))
        throw std::invalid_argument(
            "step: dt = " + std::to_string(dt) +
            " violates dt <= " + std::to_string(c_stab) +
            " * dx = " + std::to_string(c_stab * dx));
    if (spec.epsilon != 0.0 && ou == nullptr)
        throw std::invalid_argument(
            "step: OU sample required when epsilon != 0");

    auto yat = [&](double tt) {
        return spec.epsilon == 0.0 && ou == nullptr ? 0.0 : ou->at(tt);
    };
    const double y0 = yat(t);
    const double ym = yat(t + 0.5 * dt);
    const double y1 = yat(t + dt);

    const std::size_t n = spec.grid.n;
    rhs_into(s, t, y0, spec, sc.k1);
    pin_boundary(sc.k1);

    sc.tmp.u.resize(n);
    sc.tmp.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sc.tmp.u[i] = s.u[i] + 0.5 * dt * sc.k1.u[i];
        sc.tmp.v[i] = s.v[i] + 0.5 * dt * sc.k1.v[i];
    }
    rhs_into(sc.tmp, t + 0.5 * dt, ym, spec, sc.k2);
    pin_boundary(sc.k2);

    for (std::size_t i = 0; i < n; ++i) {
        sc.tmp.u[i] = s.u[i] + 0.5 * dt * sc.k2.u[i];
        sc.tmp.v[i] = s.v[i] + 0.5 * dt * sc.k2.v[i];
    }
    rhs_into(sc.tmp, t + 0.5 * dt, ym, spec, sc.k3);
    pin_boundary(sc.k3);

    for (std::size_t i = 0; i < n; ++i) {
        sc.tmp.u[i] = s.u[i] + dt * sc.k3.u[i];
        sc.tmp.v[i] = s.v[i] + dt * sc.k3.v[i];
    }
    rhs_into(sc.tmp, t + dt, y1, spec, sc.k4);
    pin_boundary(sc.k4);

    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.u[i] += w * (sc.k1.u[i] + 2.0 * sc.k2.u[i] + 2.0 * sc.k3.u[i] +
                       sc.k4.u[i]);
        s.v[i] += w * (sc.k1.v[i] + 2.0 * sc.k2.v[i] + 2.0 * sc.k3.v[i] +
                       sc.k4.v[i]);
    }
}

}  // namespace

State rhs(const State& s, double t, double y, const ProblemSpec& spec) {
    State out;
    rhs_into(s, t, y, spec, out);
    return out;
}

Field z_from_v(const Field& u, const Field& v, double eps, double y) {
    if (u.size() != v.size())
        throw std::invalid_argument("z_from_v: size mismatch");
    Field z(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) z[i] = v[i] + eps * y * u[i];
    return z;
}

Field v_from_z(const Field& u, const Field& z, double eps, double y) {
    if (u.size() != z.size())
        throw std::invalid_argument("v_from_z: size mismatch");
    Field v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = z[i] - eps * y * u[i];
    return v;
}

Field ut_from_z(const Field& u, const Field& z, double delta) {
    if (u.size() != z.size())
        throw std::invalid_argument("ut_from_z: size mismatch");
    Field ut(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ut[i] = z[i] - delta * u[i];
    return ut;
}

void step(State& s, double t, double dt, const OUSample* ou,
          const ProblemSpec& spec, double c_stab) {
    StepScratch sc;
    step_impl(s, t, dt, ou, spec, c_stab, sc);
}

Trajectory solve(const State& initial, double tau0, double tau1,
                 const OUSample* ou, const ProblemSpec& spec,
                 const SolveOptions& opts) {
    if (!(tau0 < tau1))
        throw std::invalid_argument("solve: need tau0 < tau1");
    const double span = tau1 - tau0;
    const auto n_steps = static_cast<std::size_t>(std::llround(span / opts.dt));
    if (n_steps == 0 ||
        std::abs(static_cast<double>(n_steps) * opts.dt - span) >
            1e-9 * std::max(1.0, span))
        throw std::invalid_argument(
            "solve: window is not an integer number of steps of dt");

    const double tail_K = opts.tail_K < 0.0 ? spec.grid.L / 2.0 : opts.tail_K;

    State s = initial;
    require_size(s.u, spec.grid, "solve");
    require_size(s.v, spec.grid, "solve");
    pin_boundary(s);

    Trajectory traj;
    auto record = [&](double t) {
        traj.t.push_back(t);
        traj.states.push_back(s);
        traj.norm_u_h1.push_back(std::sqrt(norm_h1_sq(s.u, spec.grid)));
        traj.norm_v.push_back(std::sqrt(norm_l2_sq(s.v, spec.grid)));
        traj.energy.push_back(energy::energy_E(s, spec).total);
        traj.tail.push_back(pullback::tail_mass(s, tail_K, spec.grid));
    };

    traj.running_max_state_sq = norm_state_sq(s, spec.grid);
    record(tau0);

    StepScratch sc;
    State prev = s;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = tau0 + static_cast<double>(k) * opts.dt;
        prev = s;
        bool failed = false;
        try {
            step_impl(s, t, opts.dt, ou, spec, opts.c_stab, sc);
        } catch (const numeric_error&) {
            failed = true;
        }
        const double t_next = tau0 + static_cast<double>(k + 1) * opts.dt;
        double ss = 0.0;
        if (!failed) {
            ss = norm_state_sq(s, spec.grid);
            if (!std::isfinite(ss) || std::sqrt(ss) > opts.blowup_ceiling)
                failed = true;
        }
        if (failed) {
            traj.blew_up = true;
            traj.blow_time = t_next;
            s = prev;
            break;
        }
        traj.running_max_state_sq = std::max(traj.running_max_state_sq, ss);
        const bool last = (k + 1 == n_steps);
        if ((opts.sample_every > 0 && (k + 1) % opts.sample_every == 0) || last)
            record(t_next);
    }

    if (traj.blew_up) {
        const double t_last_good = traj.blow_time - opts.dt;
        if (traj.t.empty() || traj.t.back() < t_last_good - 0.5 * opts.dt)
            record(t_last_good);
    }

    traj.final = s;
    traj.final_time = traj.t.back();
    return traj;
}

}  // namespace swave::dynamics
