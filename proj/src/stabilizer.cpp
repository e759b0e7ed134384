#include "edgediff/stabilizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edgediff {

void StabilizerParams::validate() const {
    if (gamma0 < 0.0) throw std::invalid_argument("gamma0 must be nonnegative");
    if (p < 1.0) throw std::invalid_argument("p must be >= 1");
    if (boundary_xi < 0.0 || boundary_xi > 1.0)
        throw std::invalid_argument("boundary_xi must lie in [0,1]");
}

Eigen::VectorXd compute_xi(const DiscreteField& w, const Mesh& mesh,
                           const NodeStencil& stencils, double boundary_xi) {
    if (w.size() != mesh.num_nodes())
        throw std::invalid_argument("compute_xi: field size does not match mesh");

    Eigen::VectorXd xi(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (mesh.is_boundary(i)) {
            xi[i] = boundary_xi;
            continue;
        }
        double signed_sum = 0.0, abs_sum = 0.0;
        for (int j : stencils.neighbors[static_cast<std::size_t>(i)]) {
            const double d = w[i] - w[j];
            signed_sum += d;
            abs_sum += std::abs(d);
        }
        // The zero-denominator branch: w is constant on the patch.
        xi[i] = (abs_sum > 1e-300) ? std::clamp(std::abs(signed_sum) / abs_sum, 0.0, 1.0)
                                   : 0.0;
    }
    return xi;
}

EdgeCoefficients compute_alpha(const Eigen::VectorXd& xi, const EdgeTopology& edges,
                               const StabilizerParams& params) {
    params.validate();
    EdgeCoefficients coeffs;
    coeffs.xi = xi;
    coeffs.alpha.resize(edges.num_interior());
    for (int e = 0; e < edges.num_interior(); ++e) {
        const Edge& edge = edges.interior[static_cast<std::size_t>(e)];
        coeffs.alpha[e] = std::pow(std::max(xi[edge.a], xi[edge.b]), params.p);
    }
    return coeffs;
}

EdgeCoefficients edge_coefficients(const DiscreteField& w, const Triangulation& tri,
                                   const StabilizerParams& params) {
    return compute_alpha(compute_xi(w, tri.mesh, tri.stencils, params.boundary_xi),
                         tri.edges, params);
}

SparseMatrix assemble_dh(const DiscreteField& w, const Triangulation& tri,
                         const StabilizerParams& params) {
    const EdgeCoefficients coeffs = edge_coefficients(w, tri, params);
    const int n = tri.mesh.num_nodes();

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(tri.edges.num_interior()) * 4);
    for (int e = 0; e < tri.edges.num_interior(); ++e) {
        const Edge& edge = tri.edges.interior[static_cast<std::size_t>(e)];
        const double c = params.gamma0 * edge.length * coeffs.alpha[e];
        triplets.emplace_back(edge.a, edge.a, c);
        triplets.emplace_back(edge.b, edge.b, c);
        triplets.emplace_back(edge.a, edge.b, -c);
        triplets.emplace_back(edge.b, edge.a, -c);
    }
    SparseMatrix D(n, n);
    D.setFromTriplets(triplets.begin(), triplets.end());
    return D;
}

double dh_apply(const EdgeCoefficients& coeffs, const DiscreteField& u,
                const DiscreteField& v, const Triangulation& tri,
                const StabilizerParams& params) {
    double sum = 0.0;
    for (int e = 0; e < tri.edges.num_interior(); ++e) {
        const Edge& edge = tri.edges.interior[static_cast<std::size_t>(e)];
        sum += params.gamma0 * edge.length * coeffs.alpha[e] * (u[edge.a] - u[edge.b]) *
               (v[edge.a] - v[edge.b]);
    }
    return sum;
}

double dh_apply(const DiscreteField& w, const DiscreteField& u, const DiscreteField& v,
                const Triangulation& tri, const StabilizerParams& params) {
    return dh_apply(edge_coefficients(w, tri, params), u, v, tri, params);
}

}  // namespace edgediff
