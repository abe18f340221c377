#pragma once

#include <cstdint>
#include <vector>

namespace swave::noise {

/// Sampled two-sided Wiener path on a uniform grid containing t = 0,
/// pinned so that omega(0) == 0 exactly.
struct WienerPath {
    std::uint64_t seed = 0;
    double t0 = 0.0;      ///< time of samples[0]
    double dt = 0.0;      ///< grid spacing, > 0
    std::size_t i0 = 0;   ///< index of t = 0 (samples[i0] == 0)
    std::vector<double> samples;

    double t_min() const { return time(0); }
    double t_max() const { return time(samples.size() - 1); }
    /// Exact grid time of sample k, computed relative to the pinned origin.
    double time(std::size_t k) const {
        return (static_cast<double>(k) - static_cast<double>(i0)) * dt;
    }
    std::size_t size() const { return samples.size(); }

    /// Index of a grid-aligned time t; throws std::invalid_argument when t
    /// is off-grid (beyond 1e-9 relative) or outside the window.
    std::size_t index_of(double t) const;
    /// Sample value at a grid-aligned time.
    double value(double t) const { return samples[index_of(t)]; }

    /// Builds a path from explicit samples; values[k] lives at
    /// t = t_min + k*dt.  t_min must be a grid multiple of dt so that the
    /// grid contains 0, and the sample there must vanish.
    static WienerPath from_samples(double t_min, double dt,
                                   std::vector<double> values,
                                   std::uint64_t seed = 0);
};

/// Draws a Brownian path on [t_min, t_max] with spacing dt.  Increments are
/// i.i.d. N(0, dt); the t < 0 branch is an independent walk mirrored to
/// negative times so that the two-sided path has omega(0) = 0.  The window
/// endpoints are snapped to the nearest grid multiples of dt.  Deterministic
/// for fixed (seed, t_min, t_max, dt); the forward and backward branches use
/// separately derived substreams so extending one side does not disturb the
/// other.
WienerPath generate_wiener(std::uint64_t seed, double t_min, double t_max,
                           double dt);

/// Time shift theta_s: returns the path t -> omega(t + s) - omega(s) on the
/// window [t_min - s, t_max - s].  s must be grid aligned and lie inside the
/// window so the shifted grid still contains 0.  Shifting is a relabeling
/// plus subtraction of one sample, so composed shifts agree with the single
/// combined shift up to one rounding per step (not bit for bit).
WienerPath shift_path(const WienerPath& path, double s);

/// splitmix64 mix used to derive independent substreams from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace swave::noise
