#pragma once

#include <Eigen/Core>

#include "edgediff/assembly.hpp"
#include "edgediff/mesh.hpp"
#include "edgediff/problem.hpp"

namespace edgediff {

struct StabilizerParams {
    double gamma0 = 1.0;
    double p = 1.0;
    // The node indicator is defined at interior nodes only; edges touching the
    // boundary need an endpoint value. 0 extends linearity preservation to
    // those edges (second-order accuracy in the convection-dominated regime);
    // 1 keeps maximal diffusion next to the boundary.
    double boundary_xi = 0.0;

    void validate() const;  // gamma0 > 0 (0 allowed to switch the term off), p >= 1
};

struct EdgeCoefficients {
    Eigen::VectorXd xi;     // per node, in [0,1]
    Eigen::VectorXd alpha;  // per interior edge, in [0,1]
};

/// Node indicator of the transported field w:
///   xi_i = |sum_{j in S_i} (w_i - w_j)| / sum_{j in S_i} |w_i - w_j|
/// when the denominator is nonzero, else 0. Boundary nodes take boundary_xi.
Eigen::VectorXd compute_xi(const DiscreteField& w, const Mesh& mesh,
                           const NodeStencil& stencils, double boundary_xi = 0.0);

/// alpha_E = max(xi_i, xi_j)^p over the edge endpoints.
EdgeCoefficients compute_alpha(const Eigen::VectorXd& xi, const EdgeTopology& edges,
                               const StabilizerParams& params);

EdgeCoefficients edge_coefficients(const DiscreteField& w, const Triangulation& tri,
                                   const StabilizerParams& params);

/// Edge-diffusion matrix D_h(w): each interior edge E=(i,j) contributes the
/// stencil [+c,-c;-c,+c] with c = gamma0 * h_E * alpha_E(w), which realizes
/// gamma0 * h_E^2 * alpha_E * (d_t u, d_t v)_E for P1 fields in 2D.
SparseMatrix assemble_dh(const DiscreteField& w, const Triangulation& tri,
                         const StabilizerParams& params);

/// d_h(w; u, v) evaluated edge by edge, without materializing the matrix.
double dh_apply(const DiscreteField& w, const DiscreteField& u, const DiscreteField& v,
                const Triangulation& tri, const StabilizerParams& params);

/// Same trilinear evaluation for precomputed edge coefficients.
double dh_apply(const EdgeCoefficients& coeffs, const DiscreteField& u,
                const DiscreteField& v, const Triangulation& tri,
                const StabilizerParams& params);

}  // namespace edgediff
