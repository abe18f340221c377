#pragma once

#include <cstddef>
#include <vector>

namespace swave::dynamics {

using Field = std::vector<double>;

/// Uniform grid on [-L, L] with n nodes, symmetric about 0.
struct Grid {
    double L = 10.0;
    std::size_t n = 401;

    double dx() const { return 2.0 * L / static_cast<double>(n - 1); }
    double x(std::size_t i) const { return -L + dx() * static_cast<double>(i); }
};

/// Displacement/velocity-like pair of nodal fields.  Depending on context the
/// second field holds v (transformed velocity) or z = u_t + delta u.
struct State {
    Field u;
    Field v;
};

/// Second-order central-difference Laplacian on all nodes, with homogeneous
/// Dirichlet ghost values (0) beyond the two boundary nodes.
Field laplacian(const Field& u, const Grid& grid);

/// Trapezoid-rule L2 inner product Sum w_i f_i g_i dx, w = 1/2 at the ends.
double inner_l2(const Field& f, const Field& g, const Grid& grid);
/// Trapezoid-rule squared L2 norm.
double norm_l2_sq(const Field& f, const Grid& grid);
/// Discrete Dirichlet energy Sum_cells (u_{i+1} - u_i)^2 / dx.  Equals
/// -(laplacian(u), u) when u vanishes at the boundary nodes, so energy
/// identities built on it are exact in space for the pinned dynamics; it is
/// also the midpoint rule for Int u'^2 (second-order accurate).
double grad_sq(const Field& u, const Grid& grid);
/// H1 squared norm: norm_l2_sq + grad_sq.
double norm_h1_sq(const Field& u, const Grid& grid);
/// Squared H1 x L2 norm of a state pair.
double norm_state_sq(const State& s, const Grid& grid);

/// Throws std::invalid_argument when grid and field sizes disagree.
void require_size(const Field& f, const Grid& grid, const char* what);

}  // namespace swave::dynamics
