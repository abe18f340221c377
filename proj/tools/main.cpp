#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "swave/config.hpp"
#include "swave/csv.hpp"
#include "swave/energy.hpp"
#include "swave/errors.hpp"
#include "swave/integrator.hpp"
#include "swave/ou.hpp"
#include "swave/pullback.hpp"
#include "swave/wiener.hpp"

namespace {

using nlohmann::json;
using swave::io::RunConfig;
namespace fs = std::filesystem;
namespace dyn = swave::dynamics;
namespace pb = swave::pullback;

constexpr double kOuTailTol = 1e-8;

struct Emitter {
    fs::path dir;
    std::vector<std::string> outputs;

    fs::path file(const std::string& name) {
        outputs.push_back(name);
        return dir / name;
    }
};

double ou_gap(double alpha) { return std::log(1.0 / kOuTailTol) / alpha; }

/// Window for the driving path: the configured one, or one wide enough to
/// evaluate the OU process from `need_from` and to reach `need_to`.
std::pair<double, double> path_window(const RunConfig& cfg, double need_from,
                                      double need_to) {
    if (cfg.time.has_path) return {cfg.time.path0, cfg.time.path1};
    const double lo = std::min(0.0, need_from - ou_gap(cfg.alpha)) - 1.0;
    const double hi = std::max(0.0, need_to) + 1.0;
    return {lo, hi};
}

std::size_t stride_for(std::size_t steps, std::size_t max_samples) {
    return std::max<std::size_t>(1, (steps + max_samples - 1) / max_samples);
}

json audit_summary(const swave::energy::EnergyAudit& a) {
    return {{"max_rel_residual", a.max_rel_residual},
            {"normalization", a.normalization}};
}

/// Initial family for the pullback-style commands: the configured initial
/// state, constant in lag, with its own norm as the radius envelope.
pb::InitialFamily family_of(const RunConfig& cfg) {
    dyn::State uz = cfg.initial_state_uz();
    const double r =
        std::sqrt(dyn::norm_state_sq(uz, cfg.grid));
    return pb::family_fixed({std::move(uz)}, r);
}

pb::EstimateOptions estimate_options(const RunConfig& cfg) {
    pb::EstimateOptions opts;
    opts.dt = cfg.time.dt;
    opts.ensemble_size = cfg.pullback.ensemble_size;
    opts.eta_sel = cfg.pullback.eta_sel;
    opts.seed = cfg.seed;
    opts.ou_tail_tol = kOuTailTol;
    opts.tol = cfg.pullback.tol;
    opts.M = cfg.pullback.M;
    opts.c = cfg.pullback.c;
    return opts;
}

/// Mean-decay depth at which the absorbing-set weight drops below 1e-10,
/// with the stationary E[y^2] = 1/(2 alpha) standing in for the random rate.
double radius_depth(const RunConfig& cfg) {
    const double sigma = dyn::sigma_of(cfg.problem());
    const double rate = std::max(
        2.0 * sigma - cfg.epsilon * cfg.pullback.c *
                          (1.0 + 0.5 / cfg.alpha),
        0.01);
    return std::log(1e10) / rate;
}

int run_ou_check(const RunConfig& cfg, Emitter& em, json& derived) {
    const auto [lo0, hi0] = [&]() -> std::pair<double, double> {
        if (cfg.time.has_path) return {cfg.time.path0, cfg.time.path1};
        const double mmax = cfg.ou.m_values.back();
        return {-(mmax + ou_gap(cfg.alpha) + 10.0),
                std::max(cfg.time.sim1, mmax + 10.0)};
    }();
    derived["path_window"] = {lo0, hi0};

    const double target = 0.5 / cfg.alpha;
    std::vector<double> averages;
    std::vector<std::size_t> member_counts(cfg.ou.m_values.size(), 0);
    double t_erg = 0.0;
    for (std::size_t i = 0; i < cfg.ou.seeds; ++i) {
        const auto path = swave::noise::generate_wiener(
            cfg.seed + i, lo0, hi0, cfg.time.path_dt);
        const double eval_from =
            swave::noise::ou_earliest_eval(path, cfg.alpha, kOuTailTol);
        const auto ou =
            swave::noise::ou_from_integral(path, cfg.alpha, eval_from,
                                           kOuTailTol);
        t_erg = std::min(cfg.time.sim1, ou.t_max());
        if (t_erg <= 0.0)
            throw std::invalid_argument(
                "ou-check: path window has no positive overlap for the "
                "ergodic average");
        averages.push_back(swave::noise::ergodic_average(ou, t_erg));
        for (std::size_t k = 0; k < cfg.ou.m_values.size(); ++k) {
            const auto rep =
                swave::noise::omega_m_check(path, ou, cfg.ou.m_values[k]);
            if (rep.is_member) ++member_counts[k];
        }
        if (i == 0 && cfg.wants("csv")) {
            const std::size_t ps = stride_for(path.samples.size(), 20000);
            std::vector<double> t, w;
            for (std::size_t k = 0; k < path.samples.size(); k += ps) {
                t.push_back(path.time(k));
                w.push_back(path.samples[k]);
            }
            swave::io::write_csv(em.file("path.csv"), {"t", "omega"}, {t, w});
            const std::size_t os = stride_for(ou.y.size(), 20000);
            std::vector<double> ty, y;
            for (std::size_t k = 0; k < ou.y.size(); k += os) {
                ty.push_back(ou.t0 + ou.dt * static_cast<double>(k));
                y.push_back(ou.y[k]);
            }
            swave::io::write_csv(em.file("ou.csv"), {"t", "y"}, {ty, y});
        }
    }

    double mean = 0.0;
    for (double a : averages) mean += a;
    mean /= static_cast<double>(averages.size());
    double var = 0.0;
    std::size_t within = 0;
    for (double a : averages) {
        var += (a - mean) * (a - mean);
        if (std::abs(a - target) <= 0.10 * target) ++within;
    }
    var /= static_cast<double>(averages.size());

    json omega_m = json::array();
    for (std::size_t k = 0; k < cfg.ou.m_values.size(); ++k)
        omega_m.push_back(
            {{"m", cfg.ou.m_values[k]},
             {"fraction", static_cast<double>(member_counts[k]) /
                              static_cast<double>(cfg.ou.seeds)}});

    json summary;
    summary["alpha"] = cfg.alpha;
    summary["seeds"] = cfg.ou.seeds;
    summary["ergodic"] = {
        {"target", target},
        {"t", t_erg},
        {"mean", mean},
        {"stddev", std::sqrt(var)},
        {"fraction_within_10pct",
         static_cast<double>(within) / static_cast<double>(averages.size())},
        {"min", *std::min_element(averages.begin(), averages.end())},
        {"max", *std::max_element(averages.begin(), averages.end())}};
    summary["omega_m"] = omega_m;
    swave::io::write_json(em.file("ou_check_summary.json"), summary);
    return 0;
}

struct SimSetup {
    std::optional<swave::noise::WienerPath> path;
    std::optional<swave::noise::OUSample> ou;
    dyn::State initial;  // (u0, v0)
};

SimSetup prepare_simulation(const RunConfig& cfg, json& derived) {
    SimSetup s;
    double y0 = 0.0;
    if (cfg.epsilon != 0.0) {
        const auto [lo, hi] =
            path_window(cfg, cfg.time.sim0, cfg.time.sim1);
        derived["path_window"] = {lo, hi};
        s.path = swave::noise::generate_wiener(cfg.seed, lo, hi,
                                               cfg.time.path_dt);
        const double eval_from =
            swave::noise::ou_earliest_eval(*s.path, cfg.alpha, kOuTailTol);
        if (eval_from > cfg.time.sim0)
            throw std::invalid_argument(
                "time.path: window too short to evaluate the OU process at "
                "time.sim[0]");
        s.ou = swave::noise::ou_from_integral(*s.path, cfg.alpha, eval_from,
                                              kOuTailTol);
        y0 = s.ou->at(cfg.time.sim0);
        derived["ou_eval_from"] = eval_from;
    }
    const dyn::State uz = cfg.initial_state_uz();
    s.initial.u = uz.u;
    s.initial.v = dyn::v_from_z(uz.u, uz.v, cfg.epsilon, y0);
    return s;
}

int run_simulate(const RunConfig& cfg, Emitter& em, json& derived) {
    SimSetup s = prepare_simulation(cfg, derived);
    const auto spec = cfg.problem();

    dyn::SolveOptions opts;
    opts.dt = cfg.time.dt;
    const auto steps = static_cast<std::size_t>(
        std::llround((cfg.time.sim1 - cfg.time.sim0) / cfg.time.dt));
    opts.sample_every = stride_for(steps, 2000);
    derived["sample_every"] = opts.sample_every;

    const auto traj =
        dyn::solve(s.initial, cfg.time.sim0, cfg.time.sim1,
                   s.ou ? &*s.ou : nullptr, spec, opts);

    if (cfg.wants("csv")) {
        swave::io::write_trajectory_csv(em.file("trajectory.csv"), traj);
        swave::io::write_state_csv(em.file("state_initial.csv"), cfg.grid,
                                   traj.states.front());
        swave::io::write_state_csv(em.file("state_final.csv"), cfg.grid,
                                   traj.states.back());
    }

    json summary;
    summary["blew_up"] = traj.blew_up;
    summary["final_time"] = traj.final_time;
    summary["terminal"] = {{"norm_u_H1", traj.norm_u_h1.back()},
                           {"norm_v_L2", traj.norm_v.back()},
                           {"energy_E", traj.energy.back()},
                           {"tail_mass", traj.tail.back()}};
    if (!traj.blew_up && traj.t.size() >= 3) {
        const auto* ou = s.ou ? &*s.ou : nullptr;
        const auto diff = swave::energy::audit_differential(traj, ou, spec);
        const auto integ = swave::energy::audit_integrated(traj, ou, spec);
        const auto ener1 = swave::energy::audit_ener1(traj, ou, spec);
        summary["audits"] = {{"differential", audit_summary(diff)},
                             {"integrated", audit_summary(integ)},
                             {"untransformed", audit_summary(ener1)}};
        if (cfg.wants("csv")) {
            swave::io::write_audit_csv(em.file("audit_differential.csv"),
                                       diff);
            swave::io::write_audit_csv(em.file("audit_integrated.csv"),
                                       integ);
            swave::io::write_audit_csv(em.file("audit_untransformed.csv"),
                                       ener1);
        }
    }
    if (cfg.wants("json"))
        swave::io::write_json(em.file("simulate_summary.json"), summary);
    if (traj.blew_up) {
        std::cerr << "simulate: blow-up at t = " << traj.blow_time << "\n";
        return 2;
    }
    return 0;
}

int run_energy_audit(const RunConfig& cfg, Emitter& em, json& derived) {
    SimSetup s = prepare_simulation(cfg, derived);
    const auto spec = cfg.problem();
    const double span = cfg.time.sim1 - cfg.time.sim0;

    const auto base_steps =
        static_cast<std::size_t>(std::llround(span / cfg.time.dt));
    const double bytes = static_cast<double>(base_steps * 4 + 3) *
                         static_cast<double>(cfg.grid.n) * 16.0;
    if (bytes > 1024.0 * 1024.0 * 1024.0)
        throw std::invalid_argument(
            "energy-audit: dense dt/4 refinement would need > 1 GiB of "
            "samples; shorten time.sim or coarsen time.dt");

    json levels = json::array();
    std::vector<std::array<double, 3>> residuals;
    for (int level = 0; level < 3; ++level) {
        dyn::SolveOptions opts;
        opts.dt = cfg.time.dt / static_cast<double>(1 << level);
        opts.sample_every = 1;
        const auto traj =
            dyn::solve(s.initial, cfg.time.sim0, cfg.time.sim1,
                       s.ou ? &*s.ou : nullptr, spec, opts);
        if (traj.blew_up) {
            std::cerr << "energy-audit: blow-up at t = " << traj.blow_time
                      << " (dt = " << opts.dt << ")\n";
            return 2;
        }
        const auto* ou = s.ou ? &*s.ou : nullptr;
        const auto diff = swave::energy::audit_differential(traj, ou, spec);
        const auto integ = swave::energy::audit_integrated(traj, ou, spec);
        const auto ener1 = swave::energy::audit_ener1(traj, ou, spec);
        residuals.push_back({diff.max_rel_residual, integ.max_rel_residual,
                             ener1.max_rel_residual});
        levels.push_back({{"dt", opts.dt},
                          {"differential", audit_summary(diff)},
                          {"integrated", audit_summary(integ)},
                          {"untransformed", audit_summary(ener1)}});
        if (cfg.wants("csv")) {
            const std::string tag = "_dt" + std::to_string(level);
            swave::io::write_audit_csv(
                em.file("audit_differential" + tag + ".csv"), diff);
            swave::io::write_audit_csv(
                em.file("audit_integrated" + tag + ".csv"), integ);
            swave::io::write_audit_csv(
                em.file("audit_untransformed" + tag + ".csv"), ener1);
        }
    }

    auto slopes = [&](int which) {
        json out = json::array();
        for (std::size_t l = 0; l + 1 < residuals.size(); ++l) {
            const double r0 = residuals[l][which], r1 = residuals[l + 1][which];
            out.push_back(r1 > 0.0 ? std::log2(r0 / r1) : 0.0);
        }
        return out;
    };
    json summary;
    summary["levels"] = levels;
    summary["slopes"] = {{"differential", slopes(0)},
                         {"integrated", slopes(1)},
                         {"untransformed", slopes(2)}};
    swave::io::write_json(em.file("energy_audit_summary.json"), summary);
    return 0;
}

/// Path + options shared by the absorb/pullback commands; the window must
/// reach below -(max lag) for the evolution and deep enough for the
/// absorbing-set weight to decay.
std::optional<swave::noise::WienerPath> pullback_path(const RunConfig& cfg,
                                                      json& derived) {
    if (cfg.epsilon == 0.0) return std::nullopt;
    const double max_lag = cfg.pullback.lag_schedule.back();
    const double need_from =
        std::min(cfg.pullback.tau - max_lag, -radius_depth(cfg));
    const auto [lo, hi] =
        path_window(cfg, need_from,
                    std::max(cfg.pullback.tau, cfg.time.sim1));
    derived["path_window"] = {lo, hi};
    return swave::noise::generate_wiener(cfg.seed, lo, hi, cfg.time.path_dt);
}

int run_absorb(const RunConfig& cfg, Emitter& em, json& derived) {
    const auto spec = cfg.problem();
    const auto path = pullback_path(cfg, derived);
    const double tau = cfg.pullback.tau;

    const auto fc = pb::check_forcing(spec, tau);
    if (fc.diverged) {
        std::cerr << "absorb: weighted forcing integral diverges; the "
                     "absorbing bound does not apply\n";
        return 2;
    }

    auto opts = estimate_options(cfg);
    opts.compute_radius = true;
    const auto run = pb::estimate_attractor(tau, path ? &*path : nullptr,
                                            family_of(cfg), spec,
                                            cfg.pullback.lag_schedule, opts);

    json summary;
    summary["tau"] = tau;
    summary["M"] = cfg.pullback.M;
    summary["c"] = cfg.pullback.c;
    summary["L"] = run.radius_sq;
    summary["forcing_integral"] = {{"value", fc.value},
                                   {"converged", fc.converged},
                                   {"truncation_T", fc.truncation_T}};
    summary["lags"] = run.lags;
    summary["sup_norm"] = run.sup_norm;
    summary["entry_lag"] = run.entry_lag;
    summary["empirical_factor"] = run.empirical_factor;
    swave::io::write_json(em.file("absorb_summary.json"), summary);
    return 0;
}

int run_pullback(const RunConfig& cfg, Emitter& em, json& derived) {
    const auto spec = cfg.problem();
    const auto path = pullback_path(cfg, derived);
    auto opts = estimate_options(cfg);
    opts.compute_radius = dyn::sigma_of(spec) > 0.0;

    const auto run = pb::estimate_attractor(
        cfg.pullback.tau, path ? &*path : nullptr, family_of(cfg), spec,
        cfg.pullback.lag_schedule, opts);

    if (cfg.wants("csv")) {
        for (std::size_t j = 0; j < run.snapshots.size(); ++j) {
            const auto& snap = run.snapshots[j];
            for (std::size_t i = 0; i < snap.uz.size(); ++i) {
                std::vector<double> x(cfg.grid.n);
                for (std::size_t k = 0; k < cfg.grid.n; ++k)
                    x[k] = cfg.grid.x(k);
                swave::io::write_csv(
                    em.file("snapshot_lag" + std::to_string(j) + "_member" +
                            std::to_string(i) + ".csv"),
                    {"x", "u", "z"},
                    {x, snap.uz[i].u, snap.uz[i].v});
            }
        }
    }

    json excluded = json::array();
    for (const auto& snap : run.snapshots)
        excluded.push_back(snap.excluded.size());

    json summary;
    summary["tau"] = run.tau;
    summary["lags"] = run.lags;
    summary["semidistance_history"] = run.semidistance_history;
    summary["sup_norm"] = run.sup_norm;
    summary["converged"] = run.converged;
    summary["tol"] = run.tol;
    summary["L"] = run.radius_sq;
    summary["entry_lag"] = run.entry_lag;
    summary["empirical_factor"] = run.empirical_factor;
    summary["excluded_members"] = excluded;
    swave::io::write_json(em.file("pullback_summary.json"), summary);

    if (!run.converged) {
        std::cerr << "pullback: not converged within the lag schedule "
                     "(see pullback_summary.json)\n";
        return 2;
    }
    return 0;
}

int run_tails(const RunConfig& cfg, Emitter& em, json& derived) {
    SimSetup s = prepare_simulation(cfg, derived);
    const auto spec = cfg.problem();

    dyn::SolveOptions opts;
    opts.dt = cfg.time.dt;
    opts.sample_every = 0;
    const auto traj =
        dyn::solve(s.initial, cfg.time.sim0, cfg.time.sim1,
                   s.ou ? &*s.ou : nullptr, spec, opts);
    if (traj.blew_up) {
        std::cerr << "tails: blow-up at t = " << traj.blow_time << "\n";
        return 2;
    }

    const double total = pb::tail_mass(traj.final, 0.0, cfg.grid);
    std::vector<double> K, mass, frac;
    for (double f : cfg.tails.k_fracs) {
        K.push_back(f * cfg.grid.L);
        mass.push_back(pb::tail_mass(traj.final, K.back(), cfg.grid));
        frac.push_back(total > 0.0 ? mass.back() / total : 0.0);
    }
    if (cfg.wants("csv"))
        swave::io::write_csv(em.file("tails.csv"),
                             {"K", "tail_mass", "fraction_of_total"},
                             {K, mass, frac});

    bool monotone = true;
    for (std::size_t i = 0; i + 1 < mass.size(); ++i)
        if (mass[i + 1] > mass[i] * (1.0 + 1e-12)) monotone = false;

    json summary;
    summary["t"] = traj.final_time;
    summary["total_sq_norm"] = total;
    summary["K"] = K;
    summary["tail_mass"] = mass;
    summary["monotone_nonincreasing"] = monotone;
    swave::io::write_json(em.file("tails_summary.json"), summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Pathwise simulation and pullback-attractor diagnostics for a damped "
        "nonlinear wave equation with multiplicative noise"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::uint64_t seed_override = 0;
    int threads = 1;
    app.add_option("--config", config_path, "JSON run configuration")
        ->required();
    app.add_option("--out", out_override,
                   "output directory (overrides output.directory)");
    auto* seed_opt =
        app.add_option("--seed", seed_override, "seed override");
    app.add_option("--threads", threads, "worker threads (reserved; serial)")
        ->check(CLI::PositiveNumber);

    auto* sc_ou = app.add_subcommand(
        "ou-check", "ergodic-average and path-bound statistics");
    auto* sc_sim =
        app.add_subcommand("simulate", "single trajectory with energy audits");
    auto* sc_audit = app.add_subcommand(
        "energy-audit", "residual refinement study at dt, dt/2, dt/4");
    auto* sc_absorb = app.add_subcommand(
        "absorb", "absorbing radius and entry-lag search");
    auto* sc_pull =
        app.add_subcommand("pullback", "pullback attractor estimate");
    auto* sc_tails =
        app.add_subcommand("tails", "tail mass versus cutoff radius sweep");
    for (auto* sc : {sc_ou, sc_sim, sc_audit, sc_absorb, sc_pull, sc_tails})
        sc->fallthrough();  // global options may follow the subcommand name

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in)
            throw std::invalid_argument("cannot read config file: " +
                                        config_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        RunConfig cfg = swave::io::parse_config(ss.str());
        if (seed_opt->count() > 0) cfg.seed = seed_override;
        if (!out_override.empty()) cfg.output.directory = out_override;

        Emitter em{fs::path(cfg.output.directory), {}};
        fs::create_directories(em.dir);
        json derived;
        derived["threads"] = threads;

        int rc = 0;
        std::string name;
        if (sc_ou->parsed()) {
            name = "ou-check";
            rc = run_ou_check(cfg, em, derived);
        } else if (sc_sim->parsed()) {
            name = "simulate";
            rc = run_simulate(cfg, em, derived);
        } else if (sc_audit->parsed()) {
            name = "energy-audit";
            rc = run_energy_audit(cfg, em, derived);
        } else if (sc_absorb->parsed()) {
            name = "absorb";
            rc = run_absorb(cfg, em, derived);
        } else if (sc_pull->parsed()) {
            name = "pullback";
            rc = run_pullback(cfg, em, derived);
        } else if (sc_tails->parsed()) {
            name = "tails";
            rc = run_tails(cfg, em, derived);
        }
        swave::io::write_manifest(em.dir, name, cfg.echo(), derived,
                                  em.outputs);
        return rc;
    } catch (const swave::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
