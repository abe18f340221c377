#include "swave/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "swave/energy.hpp"
#include "swave/errors.hpp"

namespace swave::pullback {

using dynamics::grad_sq;
using dynamics::norm_l2_sq;
using dynamics::norm_state_sq;
using dynamics::sigma_of;
using dynamics::SolveOptions;
using dynamics::Trajectory;

namespace {

/// ||g(t, .)||^2 as a function of t, with closed factorizations for the
/// built-in forcing kinds (their spatial profile norm is time independent).
std::function<double(double)> forcing_norm_sq_fn(const ProblemSpec& spec) {
    const Grid grid = spec.grid;
    if (spec.g.kind == "zero") return [](double) { return 0.0; };
    if (spec.g.kind == "pulse" || spec.g.kind == "periodic") {
        const double A = spec.g.amplitude, w = spec.g.width,
                     c = spec.g.center;
        double prof = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double r = (grid.x(i) - c) / w;
            const double val = std::exp(-r * r);
            prof += (i == 0 || i + 1 == grid.n ? 0.5 : 1.0) * val * val;
        }
        prof *= grid.dx() * A * A;
        if (spec.g.kind == "pulse") return [prof](double) { return prof; };
        const double period = spec.g.period;
        return [prof, period](double t) {
            const double cs = std::cos(2.0 * std::numbers::pi * t / period);
            return prof * cs * cs;
        };
    }
    const auto g = spec.g;
    return [g, grid](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double val = g(t, grid.x(i));
            acc += (i == 0 || i + 1 == grid.n ? 0.5 : 1.0) * val * val;
        }
        return acc * grid.dx();
    };
}

double require_sigma(const ProblemSpec& spec, const char* what) {
    const double sigma = sigma_of(spec);
    if (!(sigma > 0.0))
        throw std::invalid_argument(std::string(what) +
                                    ": requires sigma > 0 (delta > 0)");
    return sigma;
}

}  // namespace

ForcingCheck check_forcing(const ProblemSpec& spec, double tau, double ds) {
    if (ds <= 0.0) throw std::invalid_argument("check_forcing: ds must be > 0");
    const double sigma = require_sigma(spec, "check_forcing");
    const double rate = sigma / (2.0 * spec.nl.gamma + 2.0);
    const double T = std::log(1e10) / rate;
    const auto norm_sq = forcing_norm_sq_fn(spec);

    auto integrate_to = [&](double depth) {
        const auto n = static_cast<std::size_t>(std::ceil(depth / ds));
        double acc = 0.0;
        double prev = norm_sq(tau);  // s = 0
        for (std::size_t k = 1; k <= n; ++k) {
            const double s = -ds * static_cast<double>(k);
            const double cur = std::exp(rate * s) * norm_sq(s + tau);
            acc += 0.5 * ds * (prev + cur);
            if (!std::isfinite(acc)) return acc;  // overflow: report divergence
            prev = cur;
        }
        return acc;
    };

    ForcingCheck fc;
    const double i1 = integrate_to(T);
    const double i2 = integrate_to(2.0 * T);
    fc.value = i2;
    fc.truncation_T = 2.0 * T;
    if (!std::isfinite(i1) || !std::isfinite(i2)) {
        fc.diverged = true;
        return fc;
    }
    const double scale = std::max({std::abs(i1), std::abs(i2), 1e-300});
    fc.converged = std::abs(i2 - i1) <= 0.01 * scale;
    fc.diverged = i2 > 2.0 * i1 + 1e-12 && i2 > 1e-9;
    return fc;
}

AbsorbingSet absorbing_radius(double tau, const OUSample* ou,
                              const ProblemSpec& spec, double M, double c,
                              double weight_tol) {
    if (M <= 0.0 || c <= 0.0)
        throw std::invalid_argument("absorbing_radius: M and c must be > 0");
    const double sigma = require_sigma(spec, "absorbing_radius");
    const double eps = spec.epsilon;
    if (ou == nullptr && eps != 0.0)
        throw std::invalid_argument(
            "absorbing_radius: OU sample required when epsilon != 0");
    const auto norm_sq = forcing_norm_sq_fn(spec);

    double ds;
    std::size_t max_cells;
    if (ou != nullptr) {
        if (ou->t_min() > 0.0 || ou->t_max() < 0.0)
            throw std::invalid_argument(
                "absorbing_radius: OU window must contain 0");
        ds = ou->dt;
        max_cells = ou->index_of(0.0) == 0 ? 0 : ou->index_of(0.0);
    } else {
        ds = 0.005;
        max_cells = static_cast<std::size_t>(
            std::ceil(std::log(1.0 / weight_tol) / (2.0 * sigma) / ds)) + 16;
    }
    if (max_cells == 0)
        throw numeric_error("absorbing_radius: OU window has no depth below 0");

    auto y_of = [&](std::size_t k) {  // y(theta_{-k ds} omega)
        return ou == nullptr ? 0.0
                             : ou->y[ou->index_of(0.0) - k];
    };

    const double y0 = y_of(0);
    double X = 0.0;        // Int_0^s (2 sigma - eps c - eps c y^2) dr, s = -k ds
    double W = 1.0;        // e^X
    double prev_rate = 2.0 * sigma - eps * c - eps * c * y0 * y0;
    double prev_f = 1.0 + norm_sq(tau) + eps * y0 * y0;  // integrand sans W
    double acc = 0.0;
    std::size_t k = 0;
    while (W >= weight_tol && k < max_cells) {
        ++k;
        const double yk = y_of(k);
        const double rate = 2.0 * sigma - eps * c - eps * c * yk * yk;
        // X(s - ds) = X(s) - trapezoid cell of the rate going backwards
        const double X_next = X - 0.5 * ds * (prev_rate + rate);
        const double W_next = std::exp(X_next);
        const double s = -ds * static_cast<double>(k);
        const double f = 1.0 + norm_sq(s + tau) + eps * yk * yk;
        acc += 0.5 * ds * (W * prev_f + W_next * f);
        X = X_next;
        W = W_next;
        prev_rate = rate;
        prev_f = f;
        if (!std::isfinite(acc))
            throw numeric_error("absorbing_radius: integral diverged at s = " +
                                std::to_string(s));
    }
    if (W >= weight_tol)
        throw numeric_error(
            "absorbing_radius: OU window too short, weight still " +
            std::to_string(W) + " at depth " +
            std::to_string(ds * static_cast<double>(k)));

    AbsorbingSet as;
    as.tau = tau;
    as.truncation_T = ds * static_cast<double>(k);
    as.tail_weight = W;
    as.radius_sq = M * (1.0 + eps * y0 * y0) * (1.0 + acc);
    return as;
}

double hausdorff_semidistance(const std::vector<State>& A,
                              const std::vector<State>& B, const Grid& grid) {
    if (A.empty() || B.empty())
        throw std::invalid_argument(
            "hausdorff_semidistance: sets must be nonempty");
    double sup = 0.0;
    Field du(grid.n), dv(grid.n);
    for (const State& a : A) {
        double best = std::numeric_limits<double>::infinity();
        for (const State& b : B) {
            for (std::size_t i = 0; i < grid.n; ++i) {
                du[i] = a.u[i] - b.u[i];
                dv[i] = a.v[i] - b.v[i];
            }
            const double d2 = norm_l2_sq(du, grid) + grad_sq(du, grid) +
                              norm_l2_sq(dv, grid);
            best = std::min(best, d2);
        }
        sup = std::max(sup, best);
    }
    return std::sqrt(sup);
}

double tail_mass(const State& s, double K, const Grid& grid) {
    dynamics::require_size(s.u, grid, "tail_mass");
    dynamics::require_size(s.v, grid, "tail_mass");
    if (K < 0.0 || K >= grid.L)
        throw std::invalid_argument("tail_mass: need 0 <= K < L");
    const double dx = grid.dx();
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        if (std::abs(grid.x(i)) < K) continue;
        const double w = (i == 0 || i + 1 == grid.n) ? 0.5 : 1.0;
        acc += w * dx * (s.u[i] * s.u[i] + s.v[i] * s.v[i]);
    }
    for (std::size_t i = 0; i + 1 < grid.n; ++i) {
        const double mid = 0.5 * (grid.x(i) + grid.x(i + 1));
        if (std::abs(mid) < K) continue;
        const double d = s.u[i + 1] - s.u[i];
        acc += d * d / dx;
    }
    return acc;
}

double cutoff_rho(double s) {
    const double w = std::abs(s);
    if (w <= 1.0) return 0.0;
    if (w >= 2.0) return 1.0;
    const double q = w - 1.0;
    return q * q * (3.0 - 2.0 * q);
}

Field cutoff_field(const Grid& grid, double k) {
    if (k <= 0.0) throw std::invalid_argument("cutoff_field: k must be > 0");
    Field rho(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        rho[i] = cutoff_rho(x * x / (k * k));
    }
    return rho;
}

InitialFamily family_fixed(std::vector<State> states, double radius) {
    if (states.empty())
        throw std::invalid_argument("family_fixed: no members");
    InitialFamily fam;
    fam.members = [states](double) { return states; };
    fam.radius = [radius](double) { return radius; };
    return fam;
}

bool check_tempered(const InitialFamily& family, const ProblemSpec& spec,
                    double lag_max) {
    const double sigma = require_sigma(spec, "check_tempered");
    const double top = std::max(lag_max, 64.0 / sigma);
    std::vector<double> vals;
    for (double s = 1.0; s <= top; s *= 2.0) {
        const double r = family.radius(s);
        if (!std::isfinite(r)) return false;
        vals.push_back(std::exp(-sigma * s) *
                       std::pow(std::max(r, 0.0), spec.nl.gamma + 1.0));
    }
    if (vals.size() < 3) return false;
    const std::size_t n = vals.size();
    if (!(vals[n - 1] <= vals[n - 2] && vals[n - 2] <= vals[n - 3]))
        return false;
    return vals[n - 1] <= 1e-6 * (1.0 + vals[0]);
}

Snapshot pullback_evolve(double tau, double lag, const WienerPath* path,
                         const InitialFamily& family, const ProblemSpec& spec,
                         const EvolveOptions& opts) {
    if (lag < 0.0)
        throw std::invalid_argument("pullback_evolve: lag must be >= 0");
    if (opts.ensemble_size == 0)
        throw std::invalid_argument(
            "pullback_evolve: ensemble_size must be >= 1");
    const double eps = spec.epsilon;
    if (eps != 0.0 && path == nullptr)
        throw std::invalid_argument(
            "pullback_evolve: driving path required when epsilon != 0");

    OUSample ou_abs;  // y(theta_{t - tau} omega) indexed by absolute time t
    const OUSample* ou_ptr = nullptr;
    if (eps != 0.0) {
        ou_abs = noise::ou_from_integral(*path, spec.alpha, -lag,
                                         opts.ou_tail_tol)
                     .shifted(tau);
        ou_ptr = &ou_abs;
    }
    const double y_start = eps != 0.0 ? ou_abs.at(tau - lag) : 0.0;
    const double y_tau = eps != 0.0 ? ou_abs.at(tau) : 0.0;

    Snapshot snap;
    snap.tau = tau;
    snap.lag = lag;
    snap.y_at_tau = y_tau;

    const auto base = family.members(lag);
    std::size_t member_index = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (std::size_t j = 0; j < opts.ensemble_size; ++j, ++member_index) {
            State init;
            init.u = base[i].u;
            Field z0 = base[i].v;
            if (j > 0) {
                std::mt19937_64 rng(noise::mix_seed(
                    noise::mix_seed(
                        noise::mix_seed(opts.seed,
                                        static_cast<std::uint64_t>(
                                            std::llround(lag * 1e6))),
                        i),
                    j));
                std::uniform_real_distribution<double> unif(-1.0, 1.0);
                for (auto& x : init.u) x += opts.eta_sel * unif(rng);
                for (auto& x : z0) x += opts.eta_sel * unif(rng);
            }
            init.v = dynamics::v_from_z(init.u, z0, eps, y_start);

            State term;
            bool ok = true;
            if (lag == 0.0) {
                term = init;
                term.u.front() = 0.0;
                term.u.back() = 0.0;
                term.v.front() = 0.0;
                term.v.back() = 0.0;
            } else {
                SolveOptions so;
                so.dt = opts.dt;
                so.sample_every = 0;
                so.blowup_ceiling = opts.blowup_ceiling;
                so.c_stab = opts.c_stab;
                const Trajectory traj =
                    dynamics::solve(init, tau - lag, tau, ou_ptr, spec, so);
                ok = !traj.blew_up;
                term = traj.final;
            }
            if (!ok) {
                snap.excluded.push_back(member_index);
                continue;
            }
            State uz;
            uz.u = term.u;
            uz.v = dynamics::z_from_v(term.u, term.v, eps, y_tau);
            snap.uv.push_back(std::move(term));
            snap.uz.push_back(std::move(uz));
        }
    }
    return snap;
}

PullbackRun estimate_attractor(double tau, const WienerPath* path,
                               const InitialFamily& family,
                               const ProblemSpec& spec,
                               const std::vector<double>& lags,
                               const EstimateOptions& opts) {
    if (lags.size() < 2)
        throw std::invalid_argument("estimate_attractor: need >= 2 lags");
    if (!std::is_sorted(lags.begin(), lags.end()))
        throw std::invalid_argument("estimate_attractor: lags must ascend");

    PullbackRun run;
    run.tau = tau;
    run.lags = lags;
    run.tol = opts.tol;
    run.radius_sq = std::numeric_limits<double>::quiet_NaN();

    for (double lag : lags) {
        Snapshot s = pullback_evolve(tau, lag, path, family, spec, opts);
        if (s.uz.empty())
            throw numeric_error(
                "estimate_attractor: every member blew up at lag " +
                std::to_string(lag));
        double sup = 0.0;
        for (const State& m : s.uz)
            sup = std::max(sup, std::sqrt(norm_state_sq(m, spec.grid)));
        run.sup_norm.push_back(sup);
        run.snapshots.push_back(std::move(s));
    }

    const std::size_t k = lags.size();
    const auto& last = run.snapshots.back();
    for (std::size_t j = 0; j + 1 < k; ++j)
        run.semidistance_history.push_back(hausdorff_semidistance(
            run.snapshots[j].uz, last.uz, spec.grid));

    bool cauchy = k >= 3 &&
                  run.semidistance_history[k - 2] < opts.tol &&
                  run.semidistance_history[k - 3] < opts.tol;
    double lo = run.sup_norm.back(), hi = run.sup_norm.back();
    for (std::size_t j = k >= 3 ? k - 3 : 0; j < k; ++j) {
        lo = std::min(lo, run.sup_norm[j]);
        hi = std::max(hi, run.sup_norm[j]);
    }
    const bool stable =
        (hi - lo) <= 2.0 * opts.tol * std::max(1.0, run.sup_norm.back());
    run.converged = cauchy && stable;

    if (opts.compute_radius && sigma_of(spec) > 0.0) {
        const OUSample* ou_for_radius = nullptr;
        OUSample ou_deep;
        if (spec.epsilon != 0.0) {
            ou_deep = noise::ou_from_integral(
                *path, spec.alpha,
                noise::ou_earliest_eval(*path, spec.alpha, opts.ou_tail_tol),
                opts.ou_tail_tol);
            ou_for_radius = &ou_deep;
        }
        const AbsorbingSet as = absorbing_radius(
            tau, ou_for_radius, spec, opts.M, opts.c, opts.weight_tol);
        run.radius_sq = as.radius_sq;

        const std::size_t late_from = k - (k + 1) / 2;
        double factor = 0.0;
        std::vector<double> max_sq(k, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            for (const State& m : run.snapshots[j].uz)
                max_sq[j] = std::max(max_sq[j], norm_state_sq(m, spec.grid));
            if (j >= late_from)
                factor = std::max(factor, max_sq[j] / as.radius_sq);
        }
        run.empirical_factor = factor;
        const double cap = factor * as.radius_sq * (1.0 + 1e-9);
        for (std::size_t j = k; j-- > 0;) {
            if (max_sq[j] > cap) break;
            run.entry_lag = lags[j];
        }
    }
    return run;
}

}  // namespace swave::pullback
