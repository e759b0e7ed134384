#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "edgediff/afc.hpp"
#include "edgediff/analysis.hpp"
#include "edgediff/presets.hpp"
#include "edgediff/solver.hpp"

using namespace edgediff;

namespace {

SparseMatrix from_triplets(int n, const std::vector<Eigen::Triplet<double>>& t) {
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());
    return A;
}

// Node-pair double sum sum_ij (1 - alpha_ij) d_ij (u_j - u_i) v_i, with
// alpha_ij = 1 for adjacent pairs that are not interior edges.
double node_pair_form(const SparseMatrix& D, const EdgeTopology& edges,
                      const std::vector<double>& alpha_ij, const DiscreteField& u,
                      const DiscreteField& v) {
    std::map<std::pair<int, int>, double> alpha;
    for (std::size_t e = 0; e < edges.interior.size(); ++e) {
        alpha[{edges.interior[e].a, edges.interior[e].b}] = alpha_ij[e];
        alpha[{edges.interior[e].b, edges.interior[e].a}] = alpha_ij[e];
    }
    double sum = 0.0;
    for (int col = 0; col < D.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(D, col); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (i == j) continue;
            const auto found = alpha.find({i, j});
            const double a = (found != alpha.end()) ? found->second : 1.0;
            sum += (1.0 - a) * it.value() * (u[j] - u[i]) * v[i];
        }
    }
    return sum;
}

}  // namespace

TEST_CASE("diffusion matrix from a hand-built system") {
    std::vector<Eigen::Triplet<double>> t = {{0, 0, 4.0}, {0, 1, 2.0},  {1, 0, -1.0},
                                             {1, 1, 4.0}, {1, 2, 1.0},  {2, 1, 1.0},
                                             {2, 2, 4.0}};
    const SparseMatrix D = build_diffusion_matrix(from_triplets(3, t));
    CHECK(D.coeff(0, 1) == -2.0);  // -max{2, 0, -1}
    CHECK(D.coeff(1, 0) == -2.0);
    CHECK(D.coeff(1, 2) == -1.0);
    CHECK(D.coeff(0, 0) == 2.0);
    CHECK(D.coeff(1, 1) == 3.0);

    std::vector<Eigen::Triplet<double>> neg = {{0, 0, 1.0}, {0, 1, -3.0}, {1, 0, -3.0},
                                               {1, 1, 1.0}};
    const SparseMatrix D2 = build_diffusion_matrix(from_triplets(2, neg));
    CHECK(D2.coeff(0, 1) == 0.0);  // already nonpositive: max{-3, 0, -3} = 0
    CHECK(D2.norm() == 0.0);
}

TEST_CASE("diffusion matrix rejects asymmetric patterns") {
    std::vector<Eigen::Triplet<double>> t = {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 1.0}};
    CHECK_THROWS_AS(build_diffusion_matrix(from_triplets(2, t)), std::invalid_argument);
}

TEST_CASE("diffusion matrix properties on an assembled system") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 2);
    const Experiment exp = smooth_sine_preset(1e-6);
    const SparseMatrix A = assemble_galerkin(tri.mesh, exp.problem);
    const SparseMatrix D = build_diffusion_matrix(A);

    const DiscreteField ones = DiscreteField::Ones(tri.mesh.num_nodes());
    CHECK((D * ones).lpNorm<Eigen::Infinity>() <= 1e-13);

    // A + D has nonpositive off-diagonal entries (monotonicity precondition).
    const SparseMatrix At = A + D;
    for (int col = 0; col < At.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(At, col); it; ++it)
            if (it.row() != it.col()) CHECK(it.value() <= 1e-14);

    // symmetry d_ij = d_ji
    for (int col = 0; col < D.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(D, col); it; ++it)
            CHECK(it.value() == D.coeff(it.col(), it.row()));
}

TEST_CASE("fluxes") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 2);
    const Experiment exp = smooth_sine_preset(1.0);
    const SparseMatrix D = build_diffusion_matrix(assemble_galerkin(tri.mesh, exp.problem));

    SUBCASE("constant field gives zero fluxes") {
        const DiscreteField u = DiscreteField::Constant(tri.mesh.num_nodes(), 4.2);
        CHECK(compute_fluxes(D, u).norm() == 0.0);
    }

    SUBCASE("antisymmetry and row-sum identity") {
        for (int s = 0; s < 20; ++s) {
            const DiscreteField u = random_field(tri.mesh.num_nodes(), 900 + s);
            const SparseMatrix F = compute_fluxes(D, u);
            const DiscreteField Du = D * u;
            DiscreteField row_sums = DiscreteField::Zero(tri.mesh.num_nodes());
            for (int col = 0; col < F.outerSize(); ++col) {
                for (SparseMatrix::InnerIterator it(F, col); it; ++it) {
                    CHECK(it.value() == doctest::Approx(-F.coeff(it.col(), it.row()))
                                            .epsilon(1e-14));
                    row_sums[it.row()] += it.value();
                }
            }
            CHECK((row_sums - Du).lpNorm<Eigen::Infinity>() <=
                  1e-13 * std::max(1.0, Du.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("limiters from the stabilizer coefficients") {
    // the non-symmetric family has flipped corner-cell diagonals, giving
    // interior edges whose endpoints are both Dirichlet
    const Triangulation tri = Triangulation::build(MeshKind::NonSymmetric, 2);
    const Experiment exp = smooth_sine_preset(1e-6, MeshKind::NonSymmetric);
    const SparseMatrix A = assemble_galerkin(tri.mesh, exp.problem);
    const SparseMatrix D = build_diffusion_matrix(A);
    const auto mask = dirichlet_node_mask(tri.mesh, exp.problem);

    SUBCASE("alpha_E = 0 gives alpha_ij = 1") {
        StabilizerParams sp = exp.stabilizer;
        EdgeCoefficients coeffs;
        coeffs.xi = Eigen::VectorXd::Zero(tri.mesh.num_nodes());
        coeffs.alpha = Eigen::VectorXd::Zero(tri.edges.num_interior());
        const LimiterSet set = limiters_from_stabilizer(tri.edges, coeffs, D, sp, mask);
        for (std::size_t e = 0; e < set.alpha_ij.size(); ++e) CHECK(set.alpha_ij[e] == 1.0);
        CHECK(set.infeasible_edges.empty());
    }

    SUBCASE("feasibility boundary gives alpha_ij = 0") {
        StabilizerParams sp = exp.stabilizer;
        sp.gamma0 = 1.0;
        EdgeCoefficients coeffs;
        coeffs.xi = Eigen::VectorXd::Zero(tri.mesh.num_nodes());
        coeffs.alpha = Eigen::VectorXd::Zero(tri.edges.num_interior());
        // pick a free-free edge and set gamma0 h_E alpha_E = |d_ij| exactly
        int target = -1;
        for (int e = 0; e < tri.edges.num_interior(); ++e) {
            const Edge& edge = tri.edges.interior[e];
            if (!mask[edge.a] && !mask[edge.b] &&
                std::abs(D.coeff(edge.a, edge.b)) > 1e-12) {
                target = e;
                break;
            }
        }
        REQUIRE(target >= 0);
        const Edge& edge = tri.edges.interior[target];
        coeffs.alpha[target] = std::abs(D.coeff(edge.a, edge.b)) / (sp.gamma0 * edge.length);
        REQUIRE(coeffs.alpha[target] <= 1.0);
        const LimiterSet set = limiters_from_stabilizer(tri.edges, coeffs, D, sp, mask);
        CHECK(set.alpha_ij[target] == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(set.feasible[target] == 1);
    }

    SUBCASE("dirichlet-pair edges take alpha_ij = 1 by convention") {
        const DiscreteField w = random_field(tri.mesh.num_nodes(), 77);
        const auto coeffs = edge_coefficients(w, tri, exp.stabilizer);
        const LimiterSet set =
            limiters_from_stabilizer(tri.edges, coeffs, D, exp.stabilizer, mask);
        int dirichlet_pairs = 0;
        for (std::size_t e = 0; e < set.alpha_ij.size(); ++e) {
            const Edge& edge = tri.edges.interior[e];
            if (mask[edge.a] && mask[edge.b]) {
                ++dirichlet_pairs;
                CHECK(set.alpha_ij[e] == 1.0);
            }
        }
        CHECK(dirichlet_pairs > 0);
        CHECK(set.num_dirichlet_edges == dirichlet_pairs);
    }

    SUBCASE("infeasible edges are reported, never dropped") {
        StabilizerParams sp = exp.stabilizer;
        sp.gamma0 = 1e6;  // force gamma0 h_E alpha_E > |d_ij| everywhere active
        const DiscreteField w = random_field(tri.mesh.num_nodes(), 78);
        const auto coeffs = edge_coefficients(w, tri, sp);
        const LimiterSet set = limiters_from_stabilizer(tri.edges, coeffs, D, sp, mask);
        CHECK_FALSE(set.infeasible_edges.empty());
        for (int e : set.infeasible_edges) {
            CHECK(set.alpha_ij[e] == 0.0);
            CHECK(set.feasible[e] == 0);
        }
    }
}

TEST_CASE("edge form equals the node-pair double sum") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 2);
    const Experiment exp = smooth_sine_preset(1.0);
    const SparseMatrix D = build_diffusion_matrix(assemble_galerkin(tri.mesh, exp.problem));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 30; ++s) {
        LimiterSet set;
        set.alpha_ij.resize(tri.edges.interior.size());
        set.feasible.assign(tri.edges.interior.size(), 1);
        for (auto& a : set.alpha_ij) a = unit(rng);
        const DiscreteField u = random_field(tri.mesh.num_nodes(), 3000 + s);
        const DiscreteField v = random_field(tri.mesh.num_nodes(), 4000 + s);

        const double edge_sum = afc_edge_form(set, D, tri.edges, u, v);
        const double pair_sum = node_pair_form(D, tri.edges, set.alpha_ij, u, v);
        CHECK(edge_sum == doctest::Approx(pair_sum).epsilon(1e-13));
    }

    SUBCASE("degenerate cases") {
        LimiterSet ones;
        ones.alpha_ij.assign(tri.edges.interior.size(), 1.0);
        ones.feasible.assign(tri.edges.interior.size(), 1);
        const DiscreteField u = random_field(tri.mesh.num_nodes(), 1);
        const DiscreteField v = random_field(tri.mesh.num_nodes(), 2);
        CHECK(afc_edge_form(ones, D, tri.edges, u, v) == 0.0);

        LimiterSet mixed;
        mixed.alpha_ij.assign(tri.edges.interior.size(), 0.25);
        mixed.feasible.assign(tri.edges.interior.size(), 1);
        const DiscreteField c = DiscreteField::Constant(tri.mesh.num_nodes(), 3.0);
        CHECK(afc_edge_form(mixed, D, tri.edges, c, v) == 0.0);
    }
}

// Desk version of the equivalence: on the smooth problem the edge-diffusion
// coefficient gamma0 h_E alpha_E and the limiter coefficient
// (1 - alpha_ij)|d_ij| coincide on every feasible non-Dirichlet edge.
TEST_CASE("limiter correspondence reproduces the stabilizer term edgewise") {
    const Triangulation tri = Triangulation::build(MeshKind::ThreeDirectional, 3);
    const Experiment exp = smooth_sine_preset(1.0);
    const auto res = fixed_point_solve(tri, exp.problem, exp.stabilizer, exp.solver);
    REQUIRE(res.report.converged);

    const SparseMatrix A = assemble_galerkin(tri.mesh, exp.problem);
    const SparseMatrix D = build_diffusion_matrix(A);
    const auto mask = dirichlet_node_mask(tri.mesh, exp.problem);
    const auto coeffs = edge_coefficients(res.u, tri, exp.stabilizer);
    const LimiterSet set =
        limiters_from_stabilizer(tri.edges, coeffs, D, exp.stabilizer, mask);

    int feasible = 0;
    for (int e = 0; e < tri.edges.num_interior(); ++e) {
        const Edge& edge = tri.edges.interior[e];
        if (!set.feasible[e] || (mask[edge.a] && mask[edge.b])) continue;
        ++feasible;
        const double k_stab = exp.stabilizer.gamma0 * edge.length * coeffs.alpha[e];
        const double k_afc = (1.0 - set.alpha_ij[e]) * std::abs(D.coeff(edge.a, edge.b));
        CHECK(std::abs(k_stab - k_afc) <= 1e-12);
    }
    CHECK(feasible > 0);
}
