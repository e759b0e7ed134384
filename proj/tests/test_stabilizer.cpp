#include <doctest.h>

#include <cmath>
#include <random>

#include "edgediff/analysis.hpp"
#include "edgediff/stabilizer.hpp"

using namespace edgediff;

namespace {

StabilizerParams params(double gamma0, double p, double boundary_xi = 1.0) {
    StabilizerParams sp;
    sp.gamma0 = gamma0;
    sp.p = p;
    sp.boundary_xi = boundary_xi;
    return sp;
}

int find_interior_node(const Triangulation& tri, std::size_t stencil_size) {
    for (int i = 0; i < tri.mesh.num_nodes(); ++i)
        if (!tri.mesh.is_boundary(i) && tri.stencils.neighbors[i].size() == stencil_size)
            return i;
    REQUIRE(false);
    return -1;
}

DiscreteField affine_field(const Mesh& mesh, double a, double bx, double by) {
    DiscreteField w(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i)
        w[i] = a + bx * mesh.nodes[i].x() + by * mesh.nodes[i].y();
    return w;
}

}  // namespace

TEST_CASE("xi examples") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 2);

    SUBCASE("constant field gives xi = 0 at interior nodes") {
        const DiscreteField w = DiscreteField::Constant(tri.mesh.num_nodes(), 3.7);
        const auto xi = compute_xi(w, tri.mesh, tri.stencils, 1.0);
        for (int i = 0; i < tri.mesh.num_nodes(); ++i) {
            if (tri.mesh.is_boundary(i))
                CHECK(xi[i] == 1.0);
            else
                CHECK(xi[i] == 0.0);
        }
    }

    SUBCASE("isolated peak gives xi = 1") {
        const int i = find_interior_node(tri, 6);
        DiscreteField w = DiscreteField::Zero(tri.mesh.num_nodes());
        w[i] = 1.0;
        const auto xi = compute_xi(w, tri.mesh, tri.stencils, 1.0);
        CHECK(xi[i] == 1.0);
    }

    SUBCASE("cancelling differences give xi = 0") {
        // six neighbor differences (+1, -1, +2, -2, +0.5, -0.5): signed sum 0,
        // absolute sum 7
        const int i = find_interior_node(tri, 6);
        const auto& nb = tri.stencils.neighbors[i];
        REQUIRE(nb.size() == 6);
        DiscreteField w = DiscreteField::Zero(tri.mesh.num_nodes());
        const double diffs[6] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
        for (int k = 0; k < 6; ++k) w[nb[k]] = -diffs[k];
        const auto xi = compute_xi(w, tri.mesh, tri.stencils, 1.0);
        CHECK(xi[i] == 0.0);
    }
}

TEST_CASE("alpha examples") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 1);
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(tri.mesh.num_nodes());

    const Edge& e0 = tri.edges.interior[0];

    SUBCASE("both endpoints zero") {
        const auto coeffs = compute_alpha(xi, tri.edges, params(1.0, 4.0));
        CHECK(coeffs.alpha[0] == 0.0);
    }
    SUBCASE("an extremal endpoint saturates alpha") {
        xi[e0.a] = 1.0;
        xi[e0.b] = 0.3;
        for (double p : {1.0, 2.0, 4.0}) {
            const auto coeffs = compute_alpha(xi, tri.edges, params(1.0, p));
            CHECK(coeffs.alpha[0] == 1.0);
        }
    }
    SUBCASE("p = 4 decay") {
        xi[e0.a] = 0.5;
        xi[e0.b] = 0.25;
        const auto coeffs = compute_alpha(xi, tri.edges, params(1.0, 4.0));
        CHECK(coeffs.alpha[0] == doctest::Approx(0.0625).epsilon(1e-14));
    }
}

TEST_CASE("xi and alpha stay in [0,1] for random fields") {
    const Triangulation tri = Triangulation::build(MeshKind::CrissCross, 3);
    for (int s = 0; s < 100; ++s) {
        const DiscreteField w = random_field(tri.mesh.num_nodes(), 1000 + s);
        const auto coeffs = edge_coefficients(w, tri, params(2.0, 4.0));
        CHECK(coeffs.xi.minCoeff() >= 0.0);
        CHECK(coeffs.xi.maxCoeff() <= 1.0);
        CHECK(coeffs.alpha.minCoeff() >= 0.0);
        CHECK(coeffs.alpha.maxCoeff() <= 1.0);
    }
}

TEST_CASE("edge diffusion matrix") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 2);

    SUBCASE("constant field: zero matrix under the vanishing boundary convention") {
        const DiscreteField w = DiscreteField::Constant(tri.mesh.num_nodes(), -2.0);
        const SparseMatrix D = assemble_dh(w, tri, params(3.0, 4.0, 0.0));
        CHECK(D.norm() == 0.0);
    }

    SUBCASE("constants are annihilated under the default convention") {
        const DiscreteField w = DiscreteField::Constant(tri.mesh.num_nodes(), -2.0);
        const SparseMatrix D = assemble_dh(w, tri, params(3.0, 4.0));
        const DiscreteField ones = DiscreteField::Ones(tri.mesh.num_nodes());
        CHECK((D * ones).lpNorm<Eigen::Infinity>() <= 1e-14);
        // interior-interior edges carry no diffusion for a constant field
        for (const Edge& e : tri.edges.interior) {
            if (!tri.mesh.is_boundary(e.a) && !tri.mesh.is_boundary(e.b))
                CHECK(D.coeff(e.a, e.b) == 0.0);
        }
    }

    SUBCASE("zero row sums for random fields") {
        const DiscreteField ones = DiscreteField::Ones(tri.mesh.num_nodes());
        for (int s = 0; s < 20; ++s) {
            const DiscreteField w = random_field(tri.mesh.num_nodes(), 7000 + s);
            const SparseMatrix D = assemble_dh(w, tri, params(1.5, 2.0));
            CHECK((D * ones).lpNorm<Eigen::Infinity>() <= 1e-13);
        }
    }

    SUBCASE("saturated edge stencil value") {
        // h_E = 0.25 on the level-2 axis edges; alpha = 1 at an isolated peak;
        // gamma0 = 3 gives the off-diagonal entry -0.75.
        const int i = find_interior_node(tri, 6);
        DiscreteField w = DiscreteField::Zero(tri.mesh.num_nodes());
        w[i] = 1.0;
        const SparseMatrix D = assemble_dh(w, tri, params(3.0, 4.0));
        for (int j : tri.stencils.neighbors[i]) {
            const double h = (tri.mesh.nodes[j] - tri.mesh.nodes[i]).norm();
            if (std::abs(h - 0.25) < 1e-14)
                CHECK(D.coeff(i, j) == doctest::Approx(-0.75).epsilon(1e-14));
        }
    }
}

TEST_CASE("trilinear form evaluation") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 3);
    const auto sp = params(2.0, 4.0);

    SUBCASE("positive semidefinite and symmetric in the last two slots") {
        for (int s = 0; s < 50; ++s) {
            const DiscreteField w = random_field(tri.mesh.num_nodes(), 100 + s);
            const DiscreteField u = random_field(tri.mesh.num_nodes(), 200 + s);
            const DiscreteField v = random_field(tri.mesh.num_nodes(), 300 + s);
            CHECK(dh_apply(w, u, u, tri, sp) >= 0.0);
            CHECK(dh_apply(w, u, v, tri, sp) ==
                  doctest::Approx(dh_apply(w, v, u, tri, sp)).epsilon(1e-13));
        }
    }

    SUBCASE("constant arguments are annihilated") {
        const DiscreteField w = random_field(tri.mesh.num_nodes(), 1234);
        const DiscreteField u = random_field(tri.mesh.num_nodes(), 1235);
        const DiscreteField c = DiscreteField::Constant(tri.mesh.num_nodes(), 2.0);
        CHECK(dh_apply(w, u, c, tri, sp) == 0.0);
        CHECK(dh_apply(w, c, u, tri, sp) == 0.0);
    }

    SUBCASE("agrees with the assembled matrix on random triples") {
        for (int s = 0; s < 100; ++s) {
            const DiscreteField w = random_field(tri.mesh.num_nodes(), 400 + s);
            const DiscreteField u = random_field(tri.mesh.num_nodes(), 500 + s);
            const DiscreteField v = random_field(tri.mesh.num_nodes(), 600 + s);
            const SparseMatrix D = assemble_dh(w, tri, sp);
            const double via_matrix = v.dot(D * u);
            const double direct = dh_apply(w, u, v, tri, sp);
            CHECK(direct == doctest::Approx(via_matrix).epsilon(1e-13));
        }
    }
}

TEST_CASE("linearity preservation on symmetric meshes") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (MeshKind kind :
         {MeshKind::CrissCross, MeshKind::UnionJack, MeshKind::ThreeDirectional}) {
        for (int level = 2; level <= 4; ++level) {
            CAPTURE(to_string(kind));
            CAPTURE(level);
            const Triangulation tri = Triangulation::build(kind, level);
            REQUIRE(is_symmetric(tri.mesh, tri.stencils).symmetric);
            for (int trial = 0; trial < 20; ++trial) {
                const DiscreteField w =
                    affine_field(tri.mesh, coeff(rng), coeff(rng), coeff(rng));
                const auto coeffs = edge_coefficients(w, tri, params(3.0, 4.0));
                for (int i = 0; i < tri.mesh.num_nodes(); ++i)
                    if (!tri.mesh.is_boundary(i)) CHECK(coeffs.xi[i] <= 1e-12);
                for (int e = 0; e < tri.edges.num_interior(); ++e) {
                    const Edge& edge = tri.edges.interior[e];
                    if (!tri.mesh.is_boundary(edge.a) && !tri.mesh.is_boundary(edge.b))
                        CHECK(coeffs.alpha[e] <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("pointwise indicator stability bound") {
    // |xi_v(x_i) - xi_w(x_i)| <= 4 sum_E |d(v-w)| / sum_E (|dv| + |dw|), with
    // h_E |d_t u| = |u_a - u_b| per incident edge.
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 3);
    const int n = tri.mesh.num_nodes();
    for (int s = 0; s < 1000; ++s) {
        const DiscreteField v = random_field(n, 10000 + s);
        const DiscreteField w = random_field(n, 20000 + s);
        const auto xi_v = compute_xi(v, tri.mesh, tri.stencils, 1.0);
        const auto xi_w = compute_xi(w, tri.mesh, tri.stencils, 1.0);
        for (int i = 0; i < n; ++i) {
            if (tri.mesh.is_boundary(i)) continue;
            double num = 0.0, den = 0.0;
            for (int j : tri.stencils.neighbors[i]) {
                num += std::abs((v[i] - v[j]) - (w[i] - w[j]));
                den += std::abs(v[i] - v[j]) + std::abs(w[i] - w[j]);
            }
            if (den <= 0.0) continue;
            CHECK(std::abs(xi_v[i] - xi_w[i]) <= 4.0 * num / den + 1e-12);
        }
    }
}

TEST_CASE("empirical form Lipschitz constant is finite and deterministic") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 3);
    const double c1 = measure_lipschitz(tri, params(3.0, 4.0), 200, 42);
    const double c2 = measure_lipschitz(tri, params(3.0, 4.0), 200, 42);
    CHECK(c1 == c2);
    CHECK(c1 > 0.0);
    CHECK(std::isfinite(c1));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(params(-1.0, 4.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params(1.0, 0.5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(params(1.0, 1.0, 1.5).validate(), std::invalid_argument);
    CHECK_NOTHROW(params(0.0, 1.0).validate());  // gamma0 = 0 switches the term off
}
