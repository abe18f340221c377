#pragma once

#include <cstdint>
#include <vector>

#include "swave/grid.hpp"
#include "swave/ou.hpp"
#include "swave/problem.hpp"

namespace swave::dynamics {

using noise::OUSample;

/// Right-hand side of the transformed system at time t with coefficient
/// value y = y(theta_t omega), evaluated node-wise on all grid nodes (the
/// Laplacian uses the ghost-zero Dirichlet closure).  Throws numeric_error
/// when the input state contains a non-finite value, naming the first
/// offending node.
State rhs(const State& s, double t, double y, const ProblemSpec& spec);

/// Transforms between the velocity representations.
/// z = v + eps y u (image of the pathwise variable back in (u, z) space).
Field z_from_v(const Field& u, const Field& v, double eps, double y);
/// v = z - eps y u.
Field v_from_z(const Field& u, const Field& z, double eps, double y);
/// u_t = z - delta u.
Field ut_from_z(const Field& u, const Field& z, double delta);

/// One classical RK4 step from t to t + dt, with y(theta_s omega) linearly
/// interpolated at the stage times.  The two boundary nodes are pinned
/// (Dirichlet): their stage tangents are zeroed.  Enforces the step-size
/// restriction dt <= c_stab * dx before touching the state, and requires the
/// OU window to cover [t, t + dt] when the coupling is active.  Pass
/// ou == nullptr only when spec.epsilon == 0.
void step(State& s, double t, double dt, const OUSample* ou,
          const ProblemSpec& spec, double c_stab = 0.5);

struct SolveOptions {
    double dt = 1e-3;
    /// record every k-th step into the sampled series (0 = endpoints only)
    std::size_t sample_every = 1;
    double c_stab = 0.5;
    double blowup_ceiling = 1e8;  ///< on sqrt(norm_state_sq)
    double tail_K = -1.0;         ///< cutoff radius for the tail series; <0 -> L/2
};

/// Sampled trajectory of a solve() call.  `blew_up` flags detected
/// divergence; the series then stop at the last finite state.
struct Trajectory {
    std::vector<double> t;
    std::vector<State> states;
    std::vector<double> norm_u_h1;  ///< sqrt of the H1 squared norm
    std::vector<double> norm_v;     ///< L2 norm of v
    std::vector<double> energy;     ///< total energy functional E(u, v)
    std::vector<double> tail;       ///< tail mass beyond |x| >= tail_K
    State final;
    double final_time = 0.0;
    bool blew_up = false;
    double blow_time = 0.0;
    double running_max_state_sq = 0.0;  ///< max over all steps of ||u||_H1^2 + ||v||^2
};

/// Integrates the system from tau0 to tau1 with fixed step opts.dt (the step
/// count must match the window within 1e-9 relative).  Initial boundary
/// nodes are zeroed to meet the Dirichlet condition.  Forcing is evaluated in
/// absolute time; when the OU sample stems from a pullback construction it
/// must already be relabeled to absolute times (OUSample::shifted).
Trajectory solve(const State& initial, double tau0, double tau1,
                 const OUSample* ou, const ProblemSpec& spec,
                 const SolveOptions& opts);

}  // namespace swave::dynamics
