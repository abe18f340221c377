#include "swave/wiener.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace swave::noise {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed ^ golden-ratio-scrambled stream id.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t WienerPath::index_of(double t) const {
    if (dt <= 0.0) throw std::invalid_argument("WienerPath: empty path");
    const double k = t / dt + static_cast<double>(i0);
    const double kr = std::round(k);
    if (std::abs(k - kr) > 1e-9 * (1.0 + std::abs(k)))
        throw std::invalid_argument("WienerPath: time " + std::to_string(t) +
                                    " is not grid aligned");
    if (kr < -0.5 || kr > static_cast<double>(samples.size()) - 0.5)
        throw std::invalid_argument("WienerPath: time " + std::to_string(t) +
                                    " outside window");
    return static_cast<std::size_t>(kr);
}

WienerPath WienerPath::from_samples(double t_min, double dt,
                                    std::vector<double> values,
                                    std::uint64_t seed) {
    if (dt <= 0.0) throw std::invalid_argument("WienerPath: dt must be > 0");
    if (values.empty()) throw std::invalid_argument("WienerPath: no samples");
    const double k0 = -t_min / dt;
    const double k0r = std::round(k0);
    if (std::abs(k0 - k0r) > 1e-9 * (1.0 + std::abs(k0)))
        throw std::invalid_argument(
            "WienerPath: t_min must be a grid multiple of dt");
    if (k0r < -0.5 || k0r > static_cast<double>(values.size()) - 0.5)
        throw std::invalid_argument("WienerPath: window must contain t = 0");
    WienerPath p;
    p.seed = seed;
    p.dt = dt;
    p.i0 = static_cast<std::size_t>(k0r);
    p.t0 = p.time(0);
    p.samples = std::move(values);
    if (p.samples[p.i0] != 0.0)
        throw std::invalid_argument("WienerPath: sample at t = 0 must vanish");
    return p;
}

WienerPath generate_wiener(std::uint64_t seed, double t_min, double t_max,
                           double dt) {
    if (dt <= 0.0) throw std::invalid_argument("generate_wiener: dt must be > 0");
    if (!(t_min <= 0.0 && t_max >= 0.0))
        throw std::invalid_argument(
            "generate_wiener: window must satisfy t_min <= 0 <= t_max");
    const auto n_neg = static_cast<std::size_t>(std::llround(-t_min / dt));
    const auto n_pos = static_cast<std::size_t>(std::llround(t_max / dt));
    if (n_neg + n_pos == 0)
        throw std::invalid_argument("generate_wiener: window shorter than dt");

    WienerPath p;
    p.seed = seed;
    p.dt = dt;
    p.i0 = n_neg;
    p.samples.assign(n_neg + n_pos + 1, 0.0);
    p.t0 = p.time(0);

    const double sd = std::sqrt(dt);
    {
        std::mt19937_64 rng(mix_seed(seed, 1));
        std::normal_distribution<double> gauss(0.0, sd);
        double w = 0.0;
        for (std::size_t k = 1; k <= n_pos; ++k) {
            w += gauss(rng);
            p.samples[n_neg + k] = w;
        }
    }
    {
        std::mt19937_64 rng(mix_seed(seed, 2));
        std::normal_distribution<double> gauss(0.0, sd);
        double w = 0.0;
        for (std::size_t k = 1; k <= n_neg; ++k) {
            w += gauss(rng);
            p.samples[n_neg - k] = w;
        }
    }
    return p;
}

WienerPath shift_path(const WienerPath& path, double s) {
    const std::size_t j = path.index_of(s);
    const double off = path.samples[j];
    WienerPath q;
    q.seed = path.seed;
    q.dt = path.dt;
    q.i0 = j;
    q.samples.resize(path.samples.size());
    for (std::size_t k = 0; k < path.samples.size(); ++k)
        q.samples[k] = path.samples[k] - off;
    q.samples[j] = 0.0;
    q.t0 = q.time(0);
    return q;
}

}  // namespace swave::noise
