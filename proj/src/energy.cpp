#include "swave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swave/errors.hpp"
#include "swave/grid.hpp"

namespace swave::energy {

using dynamics::grad_sq;
using dynamics::inner_l2;
using dynamics::norm_l2_sq;
using dynamics::sigma_of;

namespace {

double potential_integral(const Field& u, const ProblemSpec& spec) {
    const Grid& g = spec.grid;
    dynamics::require_size(u, g, "potential_integral");
    double acc = 0.5 * (spec.nl.F(g.x(0), u[0]) +
                        spec.nl.F(g.x(g.n - 1), u[g.n - 1]));
    for (std::size_t i = 1; i + 1 < g.n; ++i) acc += spec.nl.F(g.x(i), u[i]);
    return acc * g.dx();
}

double f_inner_u(const Field& u, const ProblemSpec& spec) {
    const Grid& g = spec.grid;
    double acc = 0.5 * (spec.nl.f(g.x(0), u[0]) * u[0] +
                        spec.nl.f(g.x(g.n - 1), u[g.n - 1]) * u[g.n - 1]);
    for (std::size_t i = 1; i + 1 < g.n; ++i)
        acc += spec.nl.f(g.x(i), u[i]) * u[i];
    return acc * g.dx();
}

double g_inner_v(const Field& v, double t, const ProblemSpec& spec) {
    const Grid& g = spec.grid;
    double acc = 0.5 * (spec.g(t, g.x(0)) * v[0] +
                        spec.g(t, g.x(g.n - 1)) * v[g.n - 1]);
    for (std::size_t i = 1; i + 1 < g.n; ++i) acc += spec.g(t, g.x(i)) * v[i];
    return acc * g.dx();
}

struct SampleTerms {
    double v_sq, u_sq, grad, uv, fu, Fint, gv;
};

SampleTerms terms_of(const State& s, double t, const ProblemSpec& spec) {
    SampleTerms st;
    st.v_sq = norm_l2_sq(s.v, spec.grid);
    st.u_sq = norm_l2_sq(s.u, spec.grid);
    st.grad = grad_sq(s.u, spec.grid);
    st.uv = inner_l2(s.u, s.v, spec.grid);
    st.fu = f_inner_u(s.u, spec);
    st.Fint = potential_integral(s.u, spec);
    st.gv = g_inner_v(s.v, t, spec);
    return st;
}

void require_auditable(const Trajectory& traj) {
    if (traj.t.size() < 3)
        throw std::invalid_argument("audit: need at least three samples");
    if (traj.states.size() != traj.t.size())
        throw std::invalid_argument(
            "audit: trajectory must record states at every sample");
}

double y_at(const OUSample* ou, double t, double eps) {
    if (eps == 0.0 && ou == nullptr) return 0.0;
    if (ou == nullptr)
        throw std::invalid_argument("audit: OU sample required when eps != 0");
    return ou->at(t);
}

}  // namespace

EnergyBreakdown energy_E(const State& s, const ProblemSpec& spec) {
    dynamics::require_size(s.u, spec.grid, "energy_E");
    dynamics::require_size(s.v, spec.grid, "energy_E");
    EnergyBreakdown eb;
    eb.v_part = norm_l2_sq(s.v, spec.grid);
    eb.u_part = spec.beta() * norm_l2_sq(s.u, spec.grid);
    eb.grad_part = grad_sq(s.u, spec.grid);
    eb.potential = 2.0 * potential_integral(s.u, spec);
    eb.total = eb.v_part + eb.u_part + eb.grad_part + eb.potential;
    return eb;
}

double production_G(const State& s, double t, double y,
                    const ProblemSpec& spec) {
    const double eps = spec.epsilon;
    const double sigma = sigma_of(spec);
    const double beta = spec.beta();
    const double ay = std::abs(y);
    const SampleTerms st = terms_of(s, t, spec);
    return -2.0 * (spec.alpha - spec.delta - 2.0 * sigma + eps * (ay + y)) *
               st.v_sq -
           2.0 * beta * (spec.delta - 2.0 * sigma + eps * (ay - y)) * st.u_sq -
           2.0 * (spec.delta - 2.0 * sigma + eps * (ay - y)) * st.grad +
           2.0 * st.gv - 2.0 * eps * (eps * y - 2.0 * spec.delta) * y * st.uv +
           2.0 * (eps * y - spec.delta) * st.fu +
           4.0 * (2.0 * sigma - eps * ay) * st.Fint;
}

EnergyAudit audit_differential(const Trajectory& traj, const OUSample* ou,
                               const ProblemSpec& spec) {
    require_auditable(traj);
    const double sigma = sigma_of(spec);
    const double eps = spec.epsilon;
    const std::size_t n = traj.t.size();

    EnergyAudit a;
    a.t = traj.t;
    a.E = traj.energy;
    a.G.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        a.G[k] = production_G(traj.states[k], traj.t[k],
                              y_at(ou, traj.t[k], eps), spec);

    double max_dE = 0.0, max_G = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_G = std::max(max_G, std::abs(a.G[k]));
    a.residual.resize(n - 2);
    std::vector<double> dE(n - 2);
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double d =
            (a.E[k + 1] - a.E[k - 1]) / (traj.t[k + 1] - traj.t[k - 1]);
        dE[k - 1] = d;
        max_dE = std::max(max_dE, std::abs(d));
    }
    a.normalization = std::max({max_dE, max_G, 1e-12});
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double y = y_at(ou, traj.t[k], eps);
        const double r =
            dE[k - 1] + (4.0 * sigma - 2.0 * eps * std::abs(y)) * a.E[k] -
            a.G[k];
        a.residual[k - 1] = r;
        worst = std::max(worst, std::abs(r));
    }
    a.max_rel_residual = worst / a.normalization;
    return a;
}

EnergyAudit audit_integrated(const Trajectory& traj, const OUSample* ou,
                             const ProblemSpec& spec) {
    require_auditable(traj);
    const double sigma = sigma_of(spec);
    const double eps = spec.epsilon;
    const std::size_t n = traj.t.size();

    EnergyAudit a;
    a.t = traj.t;
    a.E = traj.energy;
    a.G.resize(n);
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = y_at(ou, traj.t[k], eps);
        w[k] = 4.0 * sigma - 2.0 * eps * std::abs(y);
        a.G[k] = production_G(traj.states[k], traj.t[k], y, spec);
    }

    double max_E = 1e-12;
    for (std::size_t k = 0; k < n; ++k) max_E = std::max(max_E, std::abs(a.E[k]));
    a.normalization = max_E;

    // R_k reconstructs E(t_k); the exponential weights stay relative to the
    // current sample so long windows cannot overflow.
    a.residual.resize(n);
    double R = a.E[0];
    a.residual[0] = 0.0;
    double worst = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double h = traj.t[k] - traj.t[k - 1];
        const double dW = 0.5 * h * (w[k - 1] + w[k]);
        const double decay = std::exp(-dW);
        R = decay * R + 0.5 * h * (decay * a.G[k - 1] + a.G[k]);
        a.residual[k] = a.E[k] - R;
        worst = std::max(worst, std::abs(a.residual[k]));
    }
    a.max_rel_residual = worst / a.normalization;
    return a;
}

EnergyAudit audit_ener1(const Trajectory& traj, const OUSample* ou,
                        const ProblemSpec& spec) {
    require_auditable(traj);
    const double eps = spec.epsilon;
    const double beta = spec.beta();
    const std::size_t n = traj.t.size();

    EnergyAudit a;
    a.t = traj.t;
    a.E = traj.energy;
    a.G.resize(n);
    // Effective right-hand side: dE/dt = G_eff, with the damping terms moved
    // across.
    for (std::size_t k = 0; k < n; ++k) {
        const double y = y_at(ou, traj.t[k], eps);
        const SampleTerms st = terms_of(traj.states[k], traj.t[k], spec);
        const double lhs_damping =
            2.0 * (spec.alpha - spec.delta) * st.v_sq +
            2.0 * spec.delta * beta * st.u_sq + 2.0 * spec.delta * st.grad +
            2.0 * spec.delta * st.fu;
        const double rhs =
            2.0 * st.gv - 2.0 * eps * y * st.v_sq -
            2.0 * eps * (eps * y - 2.0 * spec.delta) * y * st.uv +
            2.0 * eps * beta * y * st.u_sq + 2.0 * eps * y * st.grad +
            2.0 * eps * y * st.fu;
        a.G[k] = rhs - lhs_damping;
    }

    double max_dE = 0.0, max_G = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_G = std::max(max_G, std::abs(a.G[k]));
    a.residual.resize(n - 2);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double d =
            (a.E[k + 1] - a.E[k - 1]) / (traj.t[k + 1] - traj.t[k - 1]);
        max_dE = std::max(max_dE, std::abs(d));
        a.residual[k - 1] = d - a.G[k];
        worst = std::max(worst, std::abs(a.residual[k - 1]));
    }
    a.normalization = std::max({max_dE, max_G, 1e-12});
    a.max_rel_residual = worst / a.normalization;
    return a;
}

}  // namespace swave::energy
