#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "swave/integrator.hpp"
#include "swave/ou.hpp"
#include "swave/problem.hpp"
#include "swave/wiener.hpp"

namespace swave::pullback {

using dynamics::Field;
using dynamics::Grid;
using dynamics::ProblemSpec;
using dynamics::State;
using noise::OUSample;
using noise::WienerPath;

/// Weighted forcing integral Int_{-inf}^0 e^{sigma s / (2 gamma + 2)}
/// ||g(s + tau)||^2 ds, truncated where the weight drops below 1e-10 and
/// re-evaluated at twice that depth to detect divergence.
struct ForcingCheck {
    double value = 0.0;
    bool converged = false;  ///< doubling the horizon changed the value < 1%
    bool diverged = false;   ///< the integral keeps growing under doubling
    double truncation_T = 0.0;
};
ForcingCheck check_forcing(const ProblemSpec& spec, double tau,
                           double ds = 0.02);

/// Pullback absorbing bound L(tau, omega) on ||u||_H1^2 + ||z||^2:
///   M (1 + eps y(omega)^2) (1 + Int_{-inf}^0 W(s)
///       (1 + ||g(s + tau)||^2 + eps |y(theta_s omega)|^2) ds),
///   W(s) = exp(Int_0^s (2 sigma - eps c - eps c |y(theta_r omega)|^2) dr).
struct AbsorbingSet {
    double tau = 0.0;
    double radius_sq = 0.0;   ///< L(tau, omega)
    double truncation_T = 0.0;
    double tail_weight = 0.0; ///< weight W at the truncation depth
};

/// `ou` must be aligned so that ou.at(s) = y(theta_s omega) for s <= 0, and
/// must reach deep enough for the weight to decay below weight_tol; otherwise
/// a numeric_error reports the truncation failure.  ou may be null only when
/// epsilon = 0 (the coefficient then drops out and an internal grid is used).
/// Requires sigma_of(spec) > 0.
AbsorbingSet absorbing_radius(double tau, const OUSample* ou,
                              const ProblemSpec& spec, double M = 1.0,
                              double c = 1.0, double weight_tol = 1e-10);

/// sup_{a in A} inf_{b in B} of the H1 x L2 distance between state pairs.
double hausdorff_semidistance(const std::vector<State>& A,
                              const std::vector<State>& B, const Grid& grid);

/// Int_{|x| >= K} (u^2 + |grad u|^2 + v^2) dx: nodal terms keep their
/// full-domain trapezoid weights, gradient cells count when their midpoint
/// lies in the region.  Nonincreasing in K; equals the squared H1 x L2 norm
/// at K = 0.  Requires 0 <= K < L.
double tail_mass(const State& s, double K, const Grid& grid);

/// C1 cutoff: 0 for |s| <= 1, 1 for |s| >= 2, cubic smoothstep
/// 3 w^2 - 2 w^3 (w = |s| - 1) between.
double cutoff_rho(double s);
/// Nodal values rho(x^2 / k^2), the spatial cutoff at radius scale k > 0.
Field cutoff_field(const Grid& grid, double k);

/// Lag-indexed family of initial (u0, z0) states with a declared radius
/// envelope (in the H1 x L2 norm) used by the tempered-growth check.
struct InitialFamily {
    std::function<std::vector<State>(double lag)> members;
    std::function<double(double lag)> radius;
};

/// Constant-in-lag family.
InitialFamily family_fixed(std::vector<State> states, double radius);

/// Checks e^{-sigma s} R(s)^{gamma + 1} -> 0 along a geometric lag ladder up
/// to max(lag_max, 64 / sigma).  Requires sigma_of(spec) > 0.
bool check_tempered(const InitialFamily& family, const ProblemSpec& spec,
                    double lag_max);

struct EvolveOptions {
    double dt = 1e-2;
    std::size_t ensemble_size = 1;  ///< variants per base member, incl. the unperturbed one
    double eta_sel = 1e-8;          ///< node-wise perturbation amplitude
    std::uint64_t seed = 1;
    double blowup_ceiling = 1e8;
    double ou_tail_tol = 1e-8;
    double c_stab = 0.5;
};

/// Terminal ensemble of one pullback leg.
struct Snapshot {
    double tau = 0.0;
    double lag = 0.0;
    std::vector<State> uv;  ///< terminal (u, v)
    std::vector<State> uz;  ///< terminal (u, z), z = v + eps y(omega) u
    std::vector<std::size_t> excluded;  ///< member indices that blew up
    double y_at_tau = 0.0;
};

/// Starts the family at time tau - lag, drives the transformed system to tau
/// with coefficient y(theta_{s - tau} omega) (the OU sample of `path`
/// relabeled to absolute time), and maps terminal states back to (u, z).
/// Initial data is converted with y at the pullback start.  `path` may be
/// null only when epsilon = 0.  lag must be a path-grid multiple; the path
/// window must reach ln(1/ou_tail_tol)/alpha below -lag.
Snapshot pullback_evolve(double tau, double lag, const WienerPath* path,
                         const InitialFamily& family, const ProblemSpec& spec,
                         const EvolveOptions& opts);

struct EstimateOptions : EvolveOptions {
    double tol = 1e-3;
    double M = 1.0;
    double c = 1.0;
    bool compute_radius = true;
    double weight_tol = 1e-10;
};

/// Deepening-lag attractor estimate with funnel ensembles and a Cauchy-style
/// convergence check.
struct PullbackRun {
    double tau = 0.0;
    std::vector<double> lags;
    std::vector<Snapshot> snapshots;
    /// d(S_j, S_last) in the (u, z) metric for each j < last
    std::vector<double> semidistance_history;
    std::vector<double> sup_norm;  ///< per lag: max member H1 x L2 norm
    bool converged = false;
    double radius_sq = 0.0;        ///< absorbing bound L (NaN when skipped)
    double entry_lag = -1.0;       ///< earliest lag with containment from there on
    double empirical_factor = 0.0; ///< max late-lag ratio (norm^2 / L)
    double tol = 0.0;
};

PullbackRun estimate_attractor(double tau, const WienerPath* path,
                               const InitialFamily& family,
                               const ProblemSpec& spec,
                               const std::vector<double>& lags,
                               const EstimateOptions& opts);

}  // namespace swave::pullback
