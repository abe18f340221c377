#include "swave/grid.hpp"

#include <stdexcept>
#include <string>

namespace swave::dynamics {

void require_size(const Field& f, const Grid& grid, const char* what) {
    if (f.size() != grid.n)
        throw std::invalid_argument(std::string(what) + ": field has " +
                                    std::to_string(f.size()) +
                                    " nodes, grid has " +
                                    std::to_string(grid.n));
}

Field laplacian(const Field& u, const Grid& grid) {
    require_size(u, grid, "laplacian");
    const std::size_t n = grid.n;
    const double idx2 = 1.0 / (grid.dx() * grid.dx());
    Field out(n);
    out[0] = (-2.0 * u[0] + u[1]) * idx2;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * idx2;
    out[n - 1] = (u[n - 2] - 2.0 * u[n - 1]) * idx2;
    return out;
}

double inner_l2(const Field& f, const Field& g, const Grid& grid) {
    require_size(f, grid, "inner_l2");
    require_size(g, grid, "inner_l2");
    const std::size_t n = grid.n;
    double acc = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += f[i] * g[i];
    return acc * grid.dx();
}

double norm_l2_sq(const Field& f, const Grid& grid) {
    return inner_l2(f, f, grid);
}

double grad_sq(const Field& u, const Grid& grid) {
    require_size(u, grid, "grad_sq");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const double d = u[i + 1] - u[i];
        acc += d * d;
    }
    return acc / grid.dx();
}

double norm_h1_sq(const Field& u, const Grid& grid) {
    return norm_l2_sq(u, grid) + grad_sq(u, grid);
}

double norm_state_sq(const State& s, const Grid& grid) {
    return norm_h1_sq(s.u, grid) + norm_l2_sq(s.v, grid);
}

}  // namespace swave::dynamics
