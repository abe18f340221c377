#include "swave/problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace swave::dynamics {

double sigma_of(const ProblemSpec& spec) {
    return std::min({spec.delta / 2.0, (spec.alpha - spec.delta) / 4.0,
                     spec.delta * spec.nl.c2 / 4.0});
}

namespace {

void probe_nonlinearity(const ProblemSpec& spec, ValidationReport& rep) {
    const Nonlinearity& nl = spec.nl;
    if (!nl.f || !nl.F || !nl.phi1 || !nl.phi2 || !nl.phi3) {
        rep.issues.push_back("nonlinearity: missing callable");
        return;
    }
    if (nl.gamma < 1.0)
        rep.issues.push_back("nonlinearity: gamma must be >= 1, got " +
                             std::to_string(nl.gamma));

    const double svals[] = {0.0,  1e-3, -1e-3, 0.1,  -0.1, 0.5, -0.5,
                            1.0,  -1.0, 2.0,   -2.0, 5.0,  -5.0, 10.0,
                            -10.0, 100.0, -100.0};
    const std::size_t nx = std::min<std::size_t>(spec.grid.n, 17);
    bool growth_ok = true, sign_ok = true, lower_ok = true;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const double x =
            spec.grid.x(ix * (spec.grid.n - 1) / (nx > 1 ? nx - 1 : 1));
        for (double s : svals) {
            const double f = nl.f(x, s);
            const double F = nl.F(x, s);
            const double pow_g = std::pow(std::abs(s), nl.gamma);
            const double tol =
                1e-9 * (1.0 + std::abs(f) + std::abs(F) + pow_g * std::abs(s));
            if (std::abs(f) > nl.c1 * pow_g + nl.phi1(x) + tol)
                growth_ok = false;
            if (f * s - nl.c2 * F < nl.phi2(x) - tol) sign_ok = false;
            if (F < nl.c3 * pow_g * std::abs(s) - nl.phi3(x) - tol)
                lower_ok = false;
        }
    }
    if (!growth_ok)
        rep.issues.push_back(
            "nonlinearity: growth bound |f| <= c1 |s|^gamma + phi1 fails");
    if (!sign_ok)
        rep.issues.push_back(
            "nonlinearity: sign condition f s - c2 F >= phi2 fails");
    if (!lower_ok)
        rep.issues.push_back(
            "nonlinearity: lower bound F >= c3 |s|^{gamma+1} - phi3 fails");
}

}  // namespace

ValidationReport validate_spec(const ProblemSpec& spec) {
    ValidationReport rep;
    if (spec.grid.n < 3)
        rep.issues.push_back("grid: n_points must be >= 3");
    if (spec.grid.L <= 0.0)
        rep.issues.push_back("grid: L must be > 0");
    if (spec.alpha <= 0.0)
        rep.issues.push_back("physics: alpha must be > 0");
    if (spec.lambda <= 0.0)
        rep.issues.push_back("physics: lambda must be > 0");
    if (spec.epsilon < 0.0 || spec.epsilon >= 1.0)
        rep.issues.push_back("physics: epsilon must lie in [0, 1)");
    if (spec.delta < 0.0)
        rep.issues.push_back("physics: delta must be >= 0");
    if (spec.alpha - spec.delta <= 0.0)
        rep.issues.push_back("physics: alpha - delta must be > 0");
    if (spec.beta() <= 0.0)
        rep.issues.push_back(
            "physics: lambda + delta^2 - alpha delta must be > 0");

    if (rep.issues.empty()) {
        const double sigma = sigma_of(spec);
        if (!(spec.alpha - spec.delta - 2.0 * sigma > 0.0))
            rep.issues.push_back(
                "derived: alpha - delta - 2 sigma must be > 0");
        if (spec.delta - 2.0 * sigma < -1e-15 * spec.delta)
            rep.issues.push_back("derived: delta - 2 sigma must be >= 0");
        probe_nonlinearity(spec, rep);
    }
    rep.ok = rep.issues.empty();
    return rep;
}

}  // namespace swave::dynamics
