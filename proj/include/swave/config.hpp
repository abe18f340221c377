#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "swave/problem.hpp"

namespace swave::io {

/// Time windows: `sim` is the integration interval, `path` the driving-path
/// window (optional; commands derive a sufficient window when absent, and the
/// derived value is recorded in the manifest, not in the config echo).
struct TimeConfig {
    double dt = 1e-3;
    double sim0 = 0.0, sim1 = 5.0;
    double path_dt = 1e-2;
    bool has_path = false;
    double path0 = 0.0, path1 = 0.0;
};

struct OuCheckConfig {
    std::size_t seeds = 100;
    std::vector<double> m_values = {10.0, 20.0, 50.0, 100.0};
};

struct PullbackConfig {
    double tau = 0.0;
    std::vector<double> lag_schedule = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    std::size_t ensemble_size = 5;
    double eta_sel = 1e-8;
    double tol = 1e-3;
    double M = 1.0;
    double c = 1.0;
};

struct TailsConfig {
    std::vector<double> k_fracs = {0.0,   0.125, 0.25, 0.375,
                                   0.5,   0.625, 0.75, 0.875};
};

/// Initial data (u0, z0) with z = u_t + delta u.  Kinds:
///   zero      u0 = z0 = 0
///   gaussian  u0 = A exp(-((x - c)/w)^2), z0 = z_amplitude * same profile
///   mode      u0 = A sin(k pi (x + L) / (2L)), k = mode_index, z0 likewise
///   random    u0, z0 node-wise uniform in [-A, A], seeded, boundary zeroed
struct InitialConfig {
    std::string kind = "zero";
    double amplitude = 1.0;
    double width = 1.0;
    double center = 0.0;
    std::size_t mode_index = 1;
    double z_amplitude = 0.0;
};

struct OutputConfig {
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "json"};
};

struct RunConfig {
    std::uint64_t seed = 1;
    dynamics::Grid grid{10.0, 401};
    TimeConfig time;
    double alpha = 1.0, lambda = 1.0, epsilon = 0.0, delta = 0.1;
    std::string nl_family = "power";
    double gamma = 3.0;
    double a = 1.0;
    std::string forcing_kind = "zero";  ///< zero | gaussian_pulse | periodic
    double f_amplitude = 0.0, f_width = 1.0, f_center = 0.0, f_period = 0.0;
    InitialConfig initial;
    OuCheckConfig ou;
    PullbackConfig pullback;
    TailsConfig tails;
    OutputConfig output;

    bool wants(std::string_view format) const;
    dynamics::ProblemSpec problem() const;
    /// (u0, z0) on the grid; `random` draws from a substream of `seed`.
    dynamics::State initial_state_uz() const;
    /// Effective config with every default filled in, sorted keys.
    nlohmann::json echo() const;
};

/// Parses and fully validates a JSON config.  Unknown keys and constraint
/// violations raise std::invalid_argument naming the dotted field path.
RunConfig parse_config(const std::string& text);

std::uint64_t fnv1a64(std::string_view bytes);
/// Canonical serialization (sorted keys, two-space indent, trailing newline).
std::string canonical_dump(const nlohmann::json& j);
/// FNV-1a over the compact sorted-key serialization, as "0x%016x".
std::string config_hash_hex(const nlohmann::json& echo);

}  // namespace swave::io
