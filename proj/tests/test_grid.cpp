#include <cmath>
#include <numbers>
#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "swave/grid.hpp"

using namespace swave::dynamics;

namespace {

Field dirichlet_mode(const Grid& g, std::size_t m) {
    const double k = std::numbers::pi * static_cast<double>(m) / (2.0 * g.L);
    Field u(g.n);
    for (std::size_t i = 0; i < g.n; ++i) u[i] = std::sin(k * (g.x(i) + g.L));
    return u;
}

}  // namespace

TEST_CASE("grid geometry", "[grid]") {
    const Grid g{10.0, 401};
    REQUIRE(g.dx() == Catch::Approx(0.05));
    REQUIRE(g.x(0) == -10.0);
    REQUIRE(g.x(400) == Catch::Approx(10.0).margin(1e-12));
    REQUIRE(g.x(200) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("laplacian of zero and of a quadratic", "[grid]") {
    const Grid g{4.0, 81};
    REQUIRE(laplacian(Field(g.n, 0.0), g) == Field(g.n, 0.0));

    // u = x^2 - L^2 vanishes at the boundary; central differences are exact
    // on quadratics at interior nodes
    Field u(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        u[i] = g.x(i) * g.x(i) - g.L * g.L;
    const Field lap = laplacian(u, g);
    for (std::size_t i = 1; i + 1 < g.n; ++i)
        REQUIRE(lap[i] == Catch::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("sine modes are exact discrete eigenvectors inside", "[grid]") {
    const Grid g{10.0, 201};
    for (std::size_t m : {1u, 2u, 5u}) {
        const Field u = dirichlet_mode(g, m);
        const double k =
            std::numbers::pi * static_cast<double>(m) / (2.0 * g.L);
        const double s = std::sin(0.5 * k * g.dx());
        const double kd2 = 4.0 / (g.dx() * g.dx()) * s * s;
        const Field lap = laplacian(u, g);
        for (std::size_t i = 1; i + 1 < g.n; ++i)
            REQUIRE(lap[i] == Catch::Approx(-kd2 * u[i]).margin(1e-10));
        // discrete eigenvalue approaches k^2 at second order
        REQUIRE(kd2 == Catch::Approx(k * k).epsilon(0.01 * k * k));
    }
}

TEST_CASE("trapezoid norms on constants and linears", "[grid]") {
    const Grid g{3.0, 61};
    const Field c(g.n, 2.5);
    REQUIRE(norm_l2_sq(c, g) == Catch::Approx(2.5 * 2.5 * 2.0 * g.L));

    Field lin(g.n);
    for (std::size_t i = 0; i < g.n; ++i) lin[i] = g.x(i);
    // du/dx = 1, so the cell-difference form integrates to the length
    REQUIRE(grad_sq(lin, g) == Catch::Approx(2.0 * g.L));
    REQUIRE(norm_h1_sq(lin, g) ==
            Catch::Approx(norm_l2_sq(lin, g) + grad_sq(lin, g)));

    REQUIRE(inner_l2(c, lin, g) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("summation by parts: grad_sq equals -(lap u, u) when pinned",
          "[grid]") {
    const Grid g{5.0, 97};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Field u(g.n);
    for (auto& v : u) v = unif(rng);
    u.front() = 0.0;
    u.back() = 0.0;

    const Field lap = laplacian(u, g);
    const double lhs = grad_sq(u, g);
    const double rhs = -inner_l2(lap, u, g);
    REQUIRE(lhs == Catch::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("state norm splits into H1 and L2 parts", "[grid]") {
    const Grid g{2.0, 41};
    State s;
    s.u = dirichlet_mode(g, 1);
    s.v = Field(g.n, 0.3);
    REQUIRE(norm_state_sq(s, g) ==
            Catch::Approx(norm_h1_sq(s.u, g) + norm_l2_sq(s.v, g)));
}

TEST_CASE("size mismatches are rejected", "[grid]") {
    const Grid g{1.0, 11};
    REQUIRE_THROWS_AS(norm_l2_sq(Field(10, 0.0), g), std::invalid_argument);
    REQUIRE_THROWS_AS(laplacian(Field(12, 0.0), g), std::invalid_argument);
    REQUIRE_NOTHROW(require_size(Field(11, 0.0), g, "test"));
}
