#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "catch2/catch_amalgamated.hpp"
#include "swave/errors.hpp"
#include "swave/forcing.hpp"
#include "swave/nonlinearity.hpp"
#include "swave/pullback.hpp"

using namespace swave::dynamics;
using namespace swave::pullback;
using swave::noise::generate_wiener;
using swave::noise::ou_earliest_eval;
using swave::noise::ou_from_integral;
using swave::noise::WienerPath;
using swave::numeric_error;

namespace {

ProblemSpec make_spec(const Grid& grid, double delta = 0.1,
                      double epsilon = 0.0) {
    ProblemSpec spec;
    spec.alpha = 1.0;
    spec.lambda = 1.0;
    spec.delta = delta;
    spec.epsilon = epsilon;
    spec.nl = make_power_nonlinearity(3.0, 1.0);
    spec.g = forcing_zero();
    spec.grid = grid;
    return spec;
}

double profile_norm_sq(const Forcing& g, const Grid& grid, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double val = g(t, grid.x(i));
        acc += (i == 0 || i + 1 == grid.n ? 0.5 : 1.0) * val * val;
    }
    return acc * grid.dx();
}

State mode_state(const Grid& g, std::size_t m, double amp) {
    const double k = std::numbers::pi * static_cast<double>(m) / (2.0 * g.L);
    State s;
    s.u.resize(g.n);
    s.v.assign(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        s.u[i] = amp * std::sin(k * (g.x(i) + g.L));
    s.u.front() = 0.0;  // exact Dirichlet data: sin(m pi) is only ~1e-16
    s.u.back() = 0.0;
    return s;
}

}  // namespace

TEST_CASE("forcing check handles zero, constant, and divergent forcing",
          "[pullback]") {
    const Grid g{4.0, 41};

    auto spec = make_spec(g);
    auto fc = check_forcing(spec, 0.0);
    REQUIRE(fc.value == 0.0);
    REQUIRE(fc.converged);
    REQUIRE_FALSE(fc.diverged);

    // time-constant pulse: integral is ||g||^2 (2 gamma + 2) / sigma
    spec.g = forcing_pulse(0.7, 1.2, 0.3);
    const double sigma = sigma_of(spec);
    const double rate = sigma / (2.0 * spec.nl.gamma + 2.0);
    const double cg = profile_norm_sq(spec.g, g, 0.0);
    fc = check_forcing(spec, -3.0);
    REQUIRE(fc.converged);
    REQUIRE_FALSE(fc.diverged);
    REQUIRE(fc.value == Catch::Approx(cg / rate).epsilon(1e-6));

    // bounded periodic forcing converges as well
    spec.g = forcing_periodic(0.7, 1.2, 5.0);
    fc = check_forcing(spec, 0.25);
    REQUIRE(fc.converged);
    REQUIRE_FALSE(fc.diverged);
    REQUIRE(fc.value > 0.0);
    REQUIRE(fc.value <= cg / rate * (1.0 + 1e-9));

    // exponentially growing history diverges
    spec.g = forcing_divergent(0.5);
    fc = check_forcing(spec, 0.0);
    REQUIRE(fc.diverged);
    REQUIRE_FALSE(fc.converged);
}

TEST_CASE("forcing check validates its inputs", "[pullback]") {
    const Grid g{4.0, 41};
    auto spec = make_spec(g, 0.0);  // sigma = 0
    REQUIRE_THROWS_AS(check_forcing(spec, 0.0), std::invalid_argument);
    spec = make_spec(g);
    REQUIRE_THROWS_AS(check_forcing(spec, 0.0, -0.1), std::invalid_argument);
}

TEST_CASE("absorbing radius matches the eps = 0 closed forms", "[pullback]") {
    const Grid g{4.0, 81};
    auto spec = make_spec(g);
    const double sigma = sigma_of(spec);

    auto as = absorbing_radius(0.0, nullptr, spec, 2.5);
    REQUIRE(as.radius_sq ==
            Catch::Approx(2.5 * (1.0 + 1.0 / (2.0 * sigma))).epsilon(1e-6));
    REQUIRE(as.tail_weight < 1e-10);
    REQUIRE(as.truncation_T ==
            Catch::Approx(std::log(1e10) / (2.0 * sigma)).epsilon(0.05));

    spec.g = forcing_pulse(0.6, 1.0, -0.5);
    const double cg = profile_norm_sq(spec.g, g, 0.0);
    as = absorbing_radius(1.7, nullptr, spec);
    REQUIRE(as.radius_sq ==
            Catch::Approx(1.0 + (1.0 + cg) / (2.0 * sigma)).epsilon(1e-6));
}

TEST_CASE("absorbing radius validates its inputs", "[pullback]") {
    const Grid g{4.0, 41};
    auto spec = make_spec(g);
    REQUIRE_THROWS_AS(absorbing_radius(0.0, nullptr, spec, -1.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(absorbing_radius(0.0, nullptr, make_spec(g, 0.0)),
                      std::invalid_argument);

    auto eps_spec = make_spec(g, 0.25, 0.05);
    REQUIRE_THROWS_AS(absorbing_radius(0.0, nullptr, eps_spec),
                      std::invalid_argument);

    swave::noise::OUSample ou;
    ou.alpha = 1.0;
    ou.dt = 0.01;

    ou.t0 = 0.5;  // window strictly above 0
    ou.y.assign(100, 0.0);
    REQUIRE_THROWS_AS(absorbing_radius(0.0, &ou, eps_spec),
                      std::invalid_argument);

    ou.t0 = 0.0;  // no depth below 0
    ou.y.assign(10, 0.0);
    REQUIRE_THROWS_AS(absorbing_radius(0.0, &ou, eps_spec), numeric_error);

    ou.t0 = -5.0;  // too shallow for the weight to decay below tolerance
    ou.y.assign(502, 0.0);
    REQUIRE_THROWS_AS(absorbing_radius(0.0, &ou, eps_spec), numeric_error);
}

TEST_CASE("absorbing radius is stable under OU grid refinement", "[pullback]") {
    const Grid g{4.0, 81};
    auto spec = make_spec(g, 0.1, 0.02);
    spec.g = forcing_pulse(0.4, 1.0, 0.0);

    const auto fine = generate_wiener(77, -170.0, 1.0, 0.005);
    std::vector<double> coarse_vals;
    for (std::size_t k = 0; k < fine.size(); k += 2)
        coarse_vals.push_back(fine.samples[k]);
    const auto coarse =
        WienerPath::from_samples(fine.t_min(), 0.01, std::move(coarse_vals));

    const auto ou_f =
        ou_from_integral(fine, spec.alpha, ou_earliest_eval(fine, spec.alpha));
    const auto ou_c = ou_from_integral(coarse, spec.alpha,
                                       ou_earliest_eval(coarse, spec.alpha));
    const auto rf = absorbing_radius(0.0, &ou_f, spec, 1.0, 1.0, 1e-4);
    const auto rc = absorbing_radius(0.0, &ou_c, spec, 1.0, 1.0, 1e-4);
    REQUIRE(rf.radius_sq == Catch::Approx(rc.radius_sq).epsilon(0.02));
    REQUIRE(rf.radius_sq > 1.0);
}

TEST_CASE("hausdorff semidistance basics", "[pullback]") {
    const Grid g{2.0, 41};
    const State a = mode_state(g, 1, 1.0);
    const State b = mode_state(g, 2, 0.7);

    REQUIRE(hausdorff_semidistance({a}, {a}, g) == 0.0);
    REQUIRE(hausdorff_semidistance({a}, {a, b}, g) == 0.0);

    // singleton shift: distance is the H1 norm of the difference
    State shifted = a;
    const State w = mode_state(g, 2, 0.3);
    for (std::size_t i = 0; i < g.n; ++i) shifted.u[i] += w.u[i];
    const double expect =
        std::sqrt(norm_l2_sq(w.u, g) + grad_sq(w.u, g));
    REQUIRE(hausdorff_semidistance({a}, {shifted}, g) ==
            Catch::Approx(expect));

    // asymmetry: one direction can vanish while the other does not
    REQUIRE(hausdorff_semidistance({a}, {a, shifted}, g) == 0.0);
    REQUIRE(hausdorff_semidistance({a, shifted}, {a}, g) ==
            Catch::Approx(expect));

    REQUIRE_THROWS_AS(hausdorff_semidistance({}, {a}, g),
                      std::invalid_argument);
}

TEST_CASE("tail mass reduces to the full norm at K = 0 and vanishes off the "
          "support", "[pullback]") {
    const Grid g{2.0, 41};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    State s;
    s.u.resize(g.n);
    s.v.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        s.u[i] = unif(rng);
        s.v[i] = unif(rng);
    }
    REQUIRE(tail_mass(s, 0.0, g) == Catch::Approx(norm_state_sq(s, g)));

    double prev = tail_mass(s, 0.0, g);
    for (double K : {0.25, 0.5, 1.0, 1.5, 1.9}) {
        const double cur = tail_mass(s, K, g);
        REQUIRE(cur <= prev + 1e-15);
        prev = cur;
    }

    State bump;
    bump.u.assign(g.n, 0.0);
    bump.v.assign(g.n, 0.0);
    for (std::size_t i = 0; i < g.n; ++i)
        if (std::abs(g.x(i)) <= 0.5) bump.u[i] = bump.v[i] = 1.0;
    REQUIRE(tail_mass(bump, 1.0, g) == 0.0);

    REQUIRE_THROWS_AS(tail_mass(s, -0.1, g), std::invalid_argument);
    REQUIRE_THROWS_AS(tail_mass(s, 2.0, g), std::invalid_argument);
}

TEST_CASE("cutoff function and field", "[pullback]") {
    REQUIRE(cutoff_rho(0.0) == 0.0);
    REQUIRE(cutoff_rho(0.99) == 0.0);
    REQUIRE(cutoff_rho(-1.0) == 0.0);
    REQUIRE(cutoff_rho(2.0) == 1.0);
    REQUIRE(cutoff_rho(-3.5) == 1.0);
    REQUIRE(cutoff_rho(1.5) == Catch::Approx(0.5));
    double prev = 0.0;
    for (double s = 1.0; s <= 2.0; s += 0.05) {
        const double cur = cutoff_rho(s);
        REQUIRE(cur >= prev);
        REQUIRE(cur <= 1.0);
        prev = cur;
    }

    const Grid g{4.0, 81};
    const Field rho = cutoff_field(g, 1.0);
    REQUIRE(rho[g.n / 2] == 0.0);             // x = 0
    REQUIRE(rho.front() == 1.0);              // x^2 / k^2 = 16
    REQUIRE(rho.back() == 1.0);
    REQUIRE_THROWS_AS(cutoff_field(g, 0.0), std::invalid_argument);
}

TEST_CASE("fixed families and the tempered-growth check", "[pullback]") {
    const Grid g{2.0, 21};
    const auto spec = make_spec(g, 0.2);
    const State a = mode_state(g, 1, 1.0);

    auto fam = family_fixed({a}, 2.0);
    REQUIRE(fam.members(1.0).size() == 1);
    REQUIRE(fam.members(100.0)[0].u == a.u);
    REQUIRE(fam.radius(7.0) == 2.0);
    REQUIRE(check_tempered(fam, spec, 100.0));

    InitialFamily growing;
    growing.members = [a](double) { return std::vector<State>{a}; };
    const double sigma = sigma_of(spec);
    growing.radius = [sigma](double s) { return std::exp(sigma * s); };
    REQUIRE_FALSE(check_tempered(growing, spec, 100.0));

    REQUIRE_THROWS_AS(family_fixed({}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(check_tempered(fam, make_spec(g, 0.0), 10.0),
                      std::invalid_argument);
}

TEST_CASE("pullback evolve at lag zero returns the family", "[pullback]") {
    const Grid g{2.0, 41};
    const auto spec = make_spec(g);
    const State a = mode_state(g, 1, 0.8);
    const auto fam = family_fixed({a}, 1.0);

    EvolveOptions opts;
    const auto snap = pullback_evolve(0.5, 0.0, nullptr, fam, spec, opts);
    REQUIRE(snap.uv.size() == 1);
    REQUIRE(snap.excluded.empty());
    REQUIRE(snap.uv[0].u == a.u);
    REQUIRE(snap.uv[0].v == a.v);
    REQUIRE(snap.uz[0].u == a.u);
    REQUIRE(snap.uz[0].v == a.v);
    REQUIRE(snap.y_at_tau == 0.0);
}

TEST_CASE("pullback evolve keeps the zero solution at zero", "[pullback]") {
    const Grid g{2.0, 41};
    const auto spec = make_spec(g);
    State zero;
    zero.u.assign(g.n, 0.0);
    zero.v.assign(g.n, 0.0);
    const auto fam = family_fixed({zero}, 0.0);

    EvolveOptions opts;
    opts.dt = 0.025;
    const auto snap = pullback_evolve(0.0, 4.0, nullptr, fam, spec, opts);
    REQUIRE(snap.uz.size() == 1);
    for (std::size_t i = 0; i < g.n; ++i) {
        REQUIRE(snap.uz[0].u[i] == 0.0);
        REQUIRE(snap.uz[0].v[i] == 0.0);
    }
}

TEST_CASE("pullback ensembles are deterministic and sized as requested",
          "[pullback]") {
    const Grid g{2.0, 41};
    const auto spec = make_spec(g);
    const auto fam = family_fixed({mode_state(g, 1, 0.5)}, 1.0);

    EvolveOptions opts;
    opts.dt = 0.025;
    opts.ensemble_size = 3;
    opts.eta_sel = 1e-6;
    opts.seed = 42;
    const auto s1 = pullback_evolve(0.0, 2.0, nullptr, fam, spec, opts);
    const auto s2 = pullback_evolve(0.0, 2.0, nullptr, fam, spec, opts);
    REQUIRE(s1.uz.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
        REQUIRE(s1.uz[j].u == s2.uz[j].u);
        REQUIRE(s1.uz[j].v == s2.uz[j].v);
    }
    // perturbed members stay close to the unperturbed one but differ
    REQUIRE(s1.uz[1].u != s1.uz[0].u);
    Field du(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        du[i] = s1.uz[1].u[i] - s1.uz[0].u[i];
    REQUIRE(std::sqrt(norm_l2_sq(du, g)) < 1e-5);
}

TEST_CASE("pullback evolve reports blown-up members", "[pullback]") {
    const Grid g{2.0, 41};
    const auto spec = make_spec(g);
    const auto fam = family_fixed({mode_state(g, 1, 1.0)}, 1.0);
    EvolveOptions opts;
    opts.dt = 0.025;
    opts.blowup_ceiling = 1e-6;
    const auto snap = pullback_evolve(0.0, 1.0, nullptr, fam, spec, opts);
    REQUIRE(snap.uz.empty());
    REQUIRE(snap.excluded == std::vector<std::size_t>{0});
}

TEST_CASE("pullback evolve with noise checks the path window and transforms "
          "consistently", "[pullback]") {
    const Grid g{2.0, 41};
    const auto spec = make_spec(g, 0.1, 0.05);
    const auto fam = family_fixed({mode_state(g, 1, 0.5)}, 1.0);
    EvolveOptions opts;
    opts.dt = 0.025;

    const auto shallow = generate_wiener(5, -10.0, 1.0, 0.01);
    REQUIRE_THROWS_AS(pullback_evolve(0.0, 8.0, &shallow, fam, spec, opts),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(pullback_evolve(0.0, 4.0, nullptr, fam, spec, opts),
                      std::invalid_argument);

    const auto path = generate_wiener(5, -30.0, 1.0, 0.01);
    const auto snap = pullback_evolve(0.5, 4.0, &path, fam, spec, opts);
    REQUIRE(snap.uz.size() == 1);
    for (std::size_t i = 0; i < g.n; ++i) {
        REQUIRE(std::isfinite(snap.uz[0].u[i]));
        REQUIRE(snap.uz[0].v[i] ==
                Catch::Approx(snap.uv[0].v[i] +
                              spec.epsilon * snap.y_at_tau * snap.uv[0].u[i])
                    .margin(1e-15));
    }
}

TEST_CASE("attractor estimate on a linearly stable problem", "[pullback]") {
    const Grid g{2.0, 41};
    ProblemSpec spec = make_spec(g, 0.25);
    spec.nl = zero_nonlinearity();

    const auto fam = family_fixed({mode_state(g, 1, 1.0)}, 2.0);
    EstimateOptions opts;
    opts.dt = 0.025;
    opts.tol = 1e-6;
    opts.eta_sel = 0.0;

    const std::vector<double> lags{4, 8, 16, 32, 36, 40};
    const auto run = estimate_attractor(0.0, nullptr, fam, spec, lags, opts);

    REQUIRE(run.converged);
    REQUIRE(run.sup_norm.back() < 1e-6);
    REQUIRE(run.semidistance_history.size() == lags.size() - 1);
    REQUIRE(run.semidistance_history[0] > run.semidistance_history[1]);
    REQUIRE(run.semidistance_history[1] > run.semidistance_history[2]);

    const double sigma = sigma_of(spec);
    REQUIRE(run.radius_sq ==
            Catch::Approx(1.0 + 1.0 / (2.0 * sigma)).epsilon(1e-6));
    REQUIRE(run.entry_lag == 32.0);
    REQUIRE(run.empirical_factor < 1e-10);
}

TEST_CASE("attractor estimate validates the lag schedule", "[pullback]") {
    const Grid g{2.0, 21};
    const auto spec = make_spec(g);
    const auto fam = family_fixed({mode_state(g, 1, 1.0)}, 1.0);
    EstimateOptions opts;
    REQUIRE_THROWS_AS(estimate_attractor(0.0, nullptr, fam, spec, {4.0}, opts),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        estimate_attractor(0.0, nullptr, fam, spec, {8.0, 4.0}, opts),
        std::invalid_argument);
}
