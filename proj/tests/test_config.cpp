#include <stdexcept>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "swave/config.hpp"

using namespace swave::io;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const std::invalid_argument& err) {
        return err.what();
    }
    return "";
}

}  // namespace

TEST_CASE("empty config fills every default and round-trips canonically",
          "[config]") {
    const RunConfig cfg = parse_config("{}");
    REQUIRE(cfg.seed == 1);
    REQUIRE(cfg.grid.n == 401);
    REQUIRE(cfg.grid.L == 10.0);
    REQUIRE(cfg.alpha == 1.0);
    REQUIRE(cfg.delta == 0.1);
    REQUIRE(cfg.nl_family == "power");
    REQUIRE(cfg.initial.kind == "zero");
    REQUIRE(cfg.wants("csv"));
    REQUIRE(cfg.wants("json"));
    REQUIRE_FALSE(cfg.wants("hdf5"));

    const std::string canon = canonical_dump(cfg.echo());
    const RunConfig again = parse_config(canon);
    REQUIRE(canonical_dump(again.echo()) == canon);
    REQUIRE(canon.back() == '\n');
}

TEST_CASE("explicit values survive the echo", "[config]") {
    const RunConfig cfg = parse_config(R"({
        "seed": 9,
        "grid": {"L": 5.0, "n_points": 201},
        "time": {"dt": 0.002, "sim": [-1.0, 3.0], "path": [-30.0, 4.0]},
        "physics": {"alpha": 2.0, "epsilon": 0.05, "delta": 0.5},
        "nonlinearity": {"family": "power", "gamma": 2.0, "a": 0.3},
        "forcing": {"kind": "periodic", "amplitude": 0.7, "period": 4.0},
        "initial": {"kind": "mode", "amplitude": 0.5, "mode_index": 2},
        "pullback": {"lag_schedule": [2.0, 4.0, 8.0], "ensemble_size": 2}
    })");
    REQUIRE(cfg.seed == 9);
    REQUIRE(cfg.grid.n == 201);
    REQUIRE(cfg.time.has_path);
    REQUIRE(cfg.time.path0 == -30.0);
    REQUIRE(cfg.epsilon == 0.05);
    REQUIRE(cfg.lambda == 1.0);  // untouched default
    REQUIRE(cfg.f_period == 4.0);
    REQUIRE(cfg.pullback.lag_schedule == std::vector<double>{2.0, 4.0, 8.0});

    const auto j = cfg.echo();
    REQUIRE(j["physics"]["alpha"] == 2.0);
    REQUIRE(j["time"]["path"][0] == -30.0);
    REQUIRE(j["initial"]["mode_index"] == 2);
}

TEST_CASE("constraint violations name the offending field", "[config]") {
    REQUIRE(error_of(R"({"physics": {"alpha": 1.0, "delta": 1.0}})")
                .find("physics.delta") != std::string::npos);
    REQUIRE(error_of(R"({"nonlinearity": {"gamma": 0.5}})")
                .find("nonlinearity.gamma") != std::string::npos);
    REQUIRE(error_of(R"({"physics": {"epsilon": 1.0}})")
                .find("physics.epsilon") != std::string::npos);
    REQUIRE(error_of(R"({"grid": {"n_points": 2}})")
                .find("grid.n_points") != std::string::npos);
    REQUIRE(error_of(R"({"time": {"sim": [2.0, 1.0]}})")
                .find("time.sim") != std::string::npos);
    REQUIRE(error_of(R"({"forcing": {"kind": "periodic"}})")
                .find("forcing.period") != std::string::npos);
    REQUIRE(error_of(R"({"pullback": {"lag_schedule": [4.0, 2.0]}})")
                .find("pullback.lag_schedule") != std::string::npos);
    REQUIRE(error_of(R"({"tails": {"k_fracs": [1.5]}})")
                .find("tails.k_fracs") != std::string::npos);

    // beta = lambda + delta^2 - alpha delta must stay positive
    REQUIRE_THROWS_AS(
        parse_config(R"({"physics": {"alpha": 4.0, "delta": 0.5,
                                     "lambda": 0.5}})"),
        std::invalid_argument);
}

TEST_CASE("unknown keys and malformed JSON are rejected with context",
          "[config]") {
    REQUIRE(error_of(R"({"physics": {"alfa": 1.0}})").find("physics.alfa") !=
            std::string::npos);
    REQUIRE(error_of(R"({"grids": {}})").find("grids") != std::string::npos);
    REQUIRE(error_of("{not json").find("config") != std::string::npos);
}

TEST_CASE("fnv1a64 matches the published test vectors", "[config]") {
    REQUIRE(fnv1a64("") == 0xcbf29ce484222325ULL);
    REQUIRE(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    REQUIRE(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config hash is stable and sensitive", "[config]") {
    const auto a = parse_config("{}").echo();
    const auto b = parse_config(R"({"seed": 2})").echo();
    const std::string ha = config_hash_hex(a);
    REQUIRE(ha == config_hash_hex(parse_config("{}").echo()));
    REQUIRE(ha != config_hash_hex(b));
    REQUIRE(ha.substr(0, 2) == "0x");
    REQUIRE(ha.size() == 18);
}

TEST_CASE("problem() wires forcing and nonlinearity kinds through",
          "[config]") {
    RunConfig cfg = parse_config(R"({
        "forcing": {"kind": "gaussian_pulse", "amplitude": 0.4},
        "nonlinearity": {"family": "zero"}
    })");
    const auto spec = cfg.problem();
    REQUIRE(spec.g.kind == "pulse");
    REQUIRE(spec.nl.family == "zero");
    REQUIRE(spec.alpha == cfg.alpha);
    REQUIRE(spec.grid.n == cfg.grid.n);
}

TEST_CASE("initial data kinds", "[config]") {
    RunConfig cfg = parse_config(R"({
        "grid": {"L": 2.0, "n_points": 41},
        "initial": {"kind": "mode", "amplitude": 0.5, "mode_index": 1}
    })");
    auto s = cfg.initial_state_uz();
    REQUIRE(s.u.front() == 0.0);
    REQUIRE(s.u.back() == 0.0);
    REQUIRE(s.u[20] == Catch::Approx(0.5));  // sin at the midpoint peak
    REQUIRE(s.v == std::vector<double>(41, 0.0));

    cfg = parse_config(R"({
        "grid": {"L": 2.0, "n_points": 41},
        "initial": {"kind": "gaussian", "amplitude": 0.3, "width": 0.5,
                     "z_amplitude": 0.1}
    })");
    s = cfg.initial_state_uz();
    REQUIRE(s.u[20] == Catch::Approx(0.3));
    REQUIRE(s.v[20] == Catch::Approx(0.1));
    REQUIRE(s.u.front() == 0.0);

    cfg = parse_config(R"({
        "seed": 7,
        "grid": {"L": 2.0, "n_points": 41},
        "initial": {"kind": "random", "amplitude": 0.2}
    })");
    s = cfg.initial_state_uz();
    const auto s2 = cfg.initial_state_uz();
    REQUIRE(s.u == s2.u);
    REQUIRE(s.v == s2.v);
    REQUIRE(s.u.front() == 0.0);
    REQUIRE(s.u.back() == 0.0);
    bool nonzero = false;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        REQUIRE(std::abs(s.u[i]) <= 0.2);
        if (s.u[i] != 0.0) nonzero = true;
    }
    REQUIRE(nonzero);
}
