#include "swave/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "swave/forcing.hpp"
#include "swave/nonlinearity.hpp"
#include "swave/wiener.hpp"

namespace swave::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument(path + ": " + what);
}

/// Cursor over one JSON object that tracks which keys were consumed and
/// rejects the leftovers, reporting dotted field paths.
class ObjectReader {
  public:
    ObjectReader(const json& j, std::string path)
        : obj_(j), path_(std::move(path)) {
        if (!j.is_object()) fail(path_, "expected a JSON object");
    }

    bool has(const char* key) const { return obj_.contains(key); }

    const json* take(const char* key) {
        seen_.push_back(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    ObjectReader section(const char* key) {
        const json* j = take(key);
        return ObjectReader(j == nullptr ? empty_object() : *j, join(key));
    }

    double number(const char* key, double fallback) {
        const json* j = take(key);
        if (j == nullptr) return fallback;
        if (!j->is_number()) fail(join(key), "expected a number");
        return j->get<double>();
    }

    std::uint64_t uinteger(const char* key, std::uint64_t fallback) {
        const json* j = take(key);
        if (j == nullptr) return fallback;
        if (!j->is_number_integer() || (j->is_number_integer() && j->get<double>() < 0))
            fail(join(key), "expected a nonnegative integer");
        return j->get<std::uint64_t>();
    }

    std::string text(const char* key, std::string fallback) {
        const json* j = take(key);
        if (j == nullptr) return fallback;
        if (!j->is_string()) fail(join(key), "expected a string");
        return j->get<std::string>();
    }

    std::vector<double> numbers(const char* key, std::vector<double> fallback) {
        const json* j = take(key);
        if (j == nullptr) return fallback;
        if (!j->is_array()) fail(join(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : *j) {
            if (!e.is_number()) fail(join(key), "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::string> texts(const char* key,
                                   std::vector<std::string> fallback) {
        const json* j = take(key);
        if (j == nullptr) return fallback;
        if (!j->is_array()) fail(join(key), "expected an array of strings");
        std::vector<std::string> out;
        for (const auto& e : *j) {
            if (!e.is_string()) fail(join(key), "expected an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                fail(join(it.key().c_str()), "unknown key");
    }

    std::string join(const char* key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

  private:
    static const json& empty_object() {
        static const json j = json::object();
        return j;
    }

    const json& obj_;
    std::string path_;
    std::vector<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

std::vector<double> window(ObjectReader& r, const char* key,
                           std::vector<double> fallback) {
    auto w = r.numbers(key, std::move(fallback));
    require(w.size() == 2 && w[0] < w[1], r.join(key),
            "expected [t0, t1] with t0 < t1");
    return w;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root_json;
    try {
        root_json = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }

    RunConfig cfg;
    ObjectReader root(root_json, "");

    cfg.seed = root.uinteger("seed", cfg.seed);

    {
        ObjectReader r = root.section("grid");
        cfg.grid.L = r.number("L", cfg.grid.L);
        cfg.grid.n = static_cast<std::size_t>(
            r.uinteger("n_points", cfg.grid.n));
        require(cfg.grid.L > 0.0, "grid.L", "must be > 0");
        require(cfg.grid.n >= 3, "grid.n_points", "must be >= 3");
        r.finish();
    }
    {
        ObjectReader r = root.section("time");
        cfg.time.dt = r.number("dt", cfg.time.dt);
        auto sim = window(r, "sim", {cfg.time.sim0, cfg.time.sim1});
        cfg.time.sim0 = sim[0];
        cfg.time.sim1 = sim[1];
        cfg.time.path_dt = r.number("path_dt", cfg.time.path_dt);
        if (r.has("path")) {
            auto p = window(r, "path", {});
            cfg.time.has_path = true;
            cfg.time.path0 = p[0];
            cfg.time.path1 = p[1];
            require(p[0] <= 0.0 && p[1] >= 0.0, "time.path",
                    "window must contain 0 (paths are pinned at the origin)");
        }
        require(cfg.time.dt > 0.0, "time.dt", "must be > 0");
        require(cfg.time.path_dt > 0.0, "time.path_dt", "must be > 0");
        r.finish();
    }
    {
        ObjectReader r = root.section("physics");
        cfg.alpha = r.number("alpha", cfg.alpha);
        cfg.lambda = r.number("lambda", cfg.lambda);
        cfg.epsilon = r.number("epsilon", cfg.epsilon);
        cfg.delta = r.number("delta", cfg.delta);
        require(cfg.alpha > 0.0, "physics.alpha", "must be > 0");
        require(cfg.lambda > 0.0, "physics.lambda", "must be > 0");
        require(cfg.epsilon >= 0.0 && cfg.epsilon < 1.0, "physics.epsilon",
                "must lie in [0, 1)");
        require(cfg.delta >= 0.0, "physics.delta", "must be >= 0");
        require(cfg.delta < cfg.alpha, "physics.delta",
                "must be < alpha (damping split constraint)");
        require(cfg.lambda + cfg.delta * cfg.delta - cfg.alpha * cfg.delta >
                    0.0,
                "physics.delta",
                "lambda + delta^2 - alpha*delta must be > 0");
        r.finish();
    }
    {
        ObjectReader r = root.section("nonlinearity");
        cfg.nl_family = r.text("family", cfg.nl_family);
        cfg.gamma = r.number("gamma", cfg.gamma);
        cfg.a = r.number("a", cfg.a);
        require(cfg.nl_family == "power" || cfg.nl_family == "zero",
                "nonlinearity.family", "must be \"power\" or \"zero\"");
        require(cfg.gamma >= 1.0, "nonlinearity.gamma",
                "growth exponent must be >= 1");
        require(cfg.a > 0.0, "nonlinearity.a", "must be > 0");
        r.finish();
    }
    {
        ObjectReader r = root.section("forcing");
        cfg.forcing_kind = r.text("kind", cfg.forcing_kind);
        cfg.f_amplitude = r.number("amplitude", cfg.f_amplitude);
        cfg.f_width = r.number("width", cfg.f_width);
        cfg.f_center = r.number("center", cfg.f_center);
        cfg.f_period = r.number("period", cfg.f_period);
        require(cfg.forcing_kind == "zero" ||
                    cfg.forcing_kind == "gaussian_pulse" ||
                    cfg.forcing_kind == "periodic",
                "forcing.kind",
                "must be \"zero\", \"gaussian_pulse\" or \"periodic\"");
        require(cfg.f_width > 0.0, "forcing.width", "must be > 0");
        if (cfg.forcing_kind == "periodic")
            require(cfg.f_period > 0.0, "forcing.period",
                    "must be > 0 for periodic forcing");
        r.finish();
    }
    {
        ObjectReader r = root.section("initial");
        cfg.initial.kind = r.text("kind", cfg.initial.kind);
        cfg.initial.amplitude = r.number("amplitude", cfg.initial.amplitude);
        cfg.initial.width = r.number("width", cfg.initial.width);
        cfg.initial.center = r.number("center", cfg.initial.center);
        cfg.initial.mode_index = static_cast<std::size_t>(
            r.uinteger("mode_index", cfg.initial.mode_index));
        cfg.initial.z_amplitude =
            r.number("z_amplitude", cfg.initial.z_amplitude);
        require(cfg.initial.kind == "zero" || cfg.initial.kind == "gaussian" ||
                    cfg.initial.kind == "mode" || cfg.initial.kind == "random",
                "initial.kind",
                "must be \"zero\", \"gaussian\", \"mode\" or \"random\"");
        require(cfg.initial.width > 0.0, "initial.width", "must be > 0");
        require(cfg.initial.mode_index >= 1, "initial.mode_index",
                "must be >= 1");
        r.finish();
    }
    {
        ObjectReader r = root.section("ou");
        cfg.ou.seeds =
            static_cast<std::size_t>(r.uinteger("seeds", cfg.ou.seeds));
        cfg.ou.m_values = r.numbers("m_values", cfg.ou.m_values);
        require(cfg.ou.seeds >= 1, "ou.seeds", "must be >= 1");
        require(!cfg.ou.m_values.empty() &&
                    std::is_sorted(cfg.ou.m_values.begin(),
                                   cfg.ou.m_values.end()) &&
                    cfg.ou.m_values.front() > 0.0,
                "ou.m_values", "must be a nonempty ascending positive list");
        r.finish();
    }
    {
        ObjectReader r = root.section("pullback");
        cfg.pullback.tau = r.number("tau", cfg.pullback.tau);
        cfg.pullback.lag_schedule =
            r.numbers("lag_schedule", cfg.pullback.lag_schedule);
        cfg.pullback.ensemble_size = static_cast<std::size_t>(
            r.uinteger("ensemble_size", cfg.pullback.ensemble_size));
        cfg.pullback.eta_sel = r.number("eta_sel", cfg.pullback.eta_sel);
        cfg.pullback.tol = r.number("tol", cfg.pullback.tol);
        cfg.pullback.M = r.number("M", cfg.pullback.M);
        cfg.pullback.c = r.number("c", cfg.pullback.c);
        const auto& lags = cfg.pullback.lag_schedule;
        require(!lags.empty() &&
                    std::is_sorted(lags.begin(), lags.end()) &&
                    lags.front() > 0.0 &&
                    std::adjacent_find(lags.begin(), lags.end()) == lags.end(),
                "pullback.lag_schedule",
                "must be a strictly increasing positive list");
        require(cfg.pullback.ensemble_size >= 1, "pullback.ensemble_size",
                "must be >= 1");
        require(cfg.pullback.eta_sel >= 0.0, "pullback.eta_sel",
                "must be >= 0");
        require(cfg.pullback.tol > 0.0, "pullback.tol", "must be > 0");
        require(cfg.pullback.M > 0.0, "pullback.M", "must be > 0");
        require(cfg.pullback.c > 0.0, "pullback.c", "must be > 0");
        r.finish();
    }
    {
        ObjectReader r = root.section("tails");
        cfg.tails.k_fracs = r.numbers("k_fracs", cfg.tails.k_fracs);
        require(!cfg.tails.k_fracs.empty(), "tails.k_fracs",
                "must be nonempty");
        for (double f : cfg.tails.k_fracs)
            require(f >= 0.0 && f < 1.0, "tails.k_fracs",
                    "entries must lie in [0, 1)");
        r.finish();
    }
    {
        ObjectReader r = root.section("output");
        cfg.output.directory = r.text("directory", cfg.output.directory);
        cfg.output.formats = r.texts("formats", cfg.output.formats);
        require(!cfg.output.directory.empty(), "output.directory",
                "must be nonempty");
        require(!cfg.output.formats.empty(), "output.formats",
                "must be nonempty");
        for (const auto& f : cfg.output.formats)
            require(f == "csv" || f == "json", "output.formats",
                    "entries must be \"csv\" or \"json\"");
        r.finish();
    }
    root.finish();

    const auto report = dynamics::validate_spec(cfg.problem());
    if (!report.ok) {
        std::string msg = "config: problem validation failed";
        for (const auto& issue : report.issues) msg += "; " + issue;
        throw std::invalid_argument(msg);
    }
    return cfg;
}

bool RunConfig::wants(std::string_view format) const {
    return std::find(output.formats.begin(), output.formats.end(), format) !=
           output.formats.end();
}

dynamics::ProblemSpec RunConfig::problem() const {
    dynamics::ProblemSpec spec;
    spec.alpha = alpha;
    spec.lambda = lambda;
    spec.epsilon = epsilon;
    spec.delta = delta;
    spec.grid = grid;
    spec.nl = nl_family == "zero"
                  ? dynamics::zero_nonlinearity()
                  : dynamics::make_power_nonlinearity(gamma, a);
    if (forcing_kind == "zero")
        spec.g = dynamics::forcing_zero();
    else if (forcing_kind == "gaussian_pulse")
        spec.g = dynamics::forcing_pulse(f_amplitude, f_width, f_center);
    else
        spec.g = dynamics::forcing_periodic(f_amplitude, f_width, f_period,
                                            f_center);
    return spec;
}

dynamics::State RunConfig::initial_state_uz() const {
    dynamics::State s;
    s.u.assign(grid.n, 0.0);
    s.v.assign(grid.n, 0.0);
    const double A = initial.amplitude, zA = initial.z_amplitude;
    if (initial.kind == "gaussian") {
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double r = (grid.x(i) - initial.center) / initial.width;
            const double p = std::exp(-r * r);
            s.u[i] = A * p;
            s.v[i] = zA * p;
        }
    } else if (initial.kind == "mode") {
        const double k = std::numbers::pi *
                         static_cast<double>(initial.mode_index) /
                         (2.0 * grid.L);
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double p = std::sin(k * (grid.x(i) + grid.L));
            s.u[i] = A * p;
            s.v[i] = zA * p;
        }
    } else if (initial.kind == "random") {
        std::mt19937_64 rng(noise::mix_seed(seed, 0x1c0ffee));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (std::size_t i = 0; i < grid.n; ++i) {
            s.u[i] = A * unif(rng);
            s.v[i] = A * unif(rng);
        }
    }
    s.u.front() = s.u.back() = 0.0;
    s.v.front() = s.v.back() = 0.0;
    return s;
}

nlohmann::json RunConfig::echo() const {
    json j;
    j["seed"] = seed;
    j["grid"] = {{"L", grid.L}, {"n_points", grid.n}};
    j["time"] = {{"dt", time.dt},
                 {"sim", {time.sim0, time.sim1}},
                 {"path_dt", time.path_dt}};
    if (time.has_path) j["time"]["path"] = {time.path0, time.path1};
    j["physics"] = {{"alpha", alpha},
                    {"lambda", lambda},
                    {"epsilon", epsilon},
                    {"delta", delta}};
    j["nonlinearity"] = {{"family", nl_family}, {"gamma", gamma}, {"a", a}};
    j["forcing"] = {{"kind", forcing_kind},
                    {"amplitude", f_amplitude},
                    {"width", f_width},
                    {"center", f_center},
                    {"period", f_period}};
    j["initial"] = {{"kind", initial.kind},
                    {"amplitude", initial.amplitude},
                    {"width", initial.width},
                    {"center", initial.center},
                    {"mode_index", initial.mode_index},
                    {"z_amplitude", initial.z_amplitude}};
    j["ou"] = {{"seeds", ou.seeds}, {"m_values", ou.m_values}};
    j["pullback"] = {{"tau", pullback.tau},
                     {"lag_schedule", pullback.lag_schedule},
                     {"ensemble_size", pullback.ensemble_size},
                     {"eta_sel", pullback.eta_sel},
                     {"tol", pullback.tol},
                     {"M", pullback.M},
                     {"c", pullback.c}};
    j["tails"] = {{"k_fracs", tails.k_fracs}};
    j["output"] = {{"directory", output.directory},
                   {"formats", output.formats}};
    return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string canonical_dump(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

std::string config_hash_hex(const nlohmann::json& echo) {
    char buf[2 + 16 + 1];
    std::snprintf(buf, sizeof buf, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(echo.dump())));
    return buf;
}

}  // namespace swave::io
