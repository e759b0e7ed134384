#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "edgediff/assembly.hpp"
#include "edgediff/stabilizer.hpp"

namespace edgediff {

/// Artificial diffusion matrix of the flux-correction construction:
/// d_ij = d_ji = -max{a_ij, 0, a_ji} for i != j, d_ii = -sum_{j != i} d_ij.
SparseMatrix build_diffusion_matrix(const SparseMatrix& A);

/// Antisymmetric flux matrix F with F_ij = d_ij * (u_j - u_i); row sums of F
/// reproduce D*u.
SparseMatrix compute_fluxes(const SparseMatrix& D, const DiscreteField& u);

struct LimiterSet {
    std::vector<double> alpha_ij;       // per interior edge, symmetric by construction
    std::vector<std::uint8_t> feasible; // 1 where the correspondence holds unclamped
    std::vector<int> infeasible_edges;  // gamma0*h_E*alpha_E > |d_ij|, value clamped to 0
    int num_dirichlet_edges = 0;        // both endpoints Dirichlet: alpha_ij = 1 by convention
};

/// Limiters making the flux-corrected scheme match the edge-diffusion term:
/// (1 - alpha_ij)|d_ij| h_E = gamma0 h_E^2 alpha_E, i.e.
/// alpha_ij = 1 - gamma0 h_E alpha_E / |d_ij|, clamped to [0,1]. Edges where
/// d_ij = 0 but alpha_E > 0 cannot be matched and are reported, never dropped.
LimiterSet limiters_from_stabilizer(const EdgeTopology& edges,
                                    const EdgeCoefficients& coeffs,
                                    const SparseMatrix& D,
                                    const StabilizerParams& params,
                                    const std::vector<bool>& dirichlet_mask);

/// Edge-sum form of the limited diffusion term:
///   sum_E (1 - alpha_ij)|d_ij| h_E (d_t u, d_t v)_E
/// = sum_E (1 - alpha_ij)|d_ij| (u_i - u_j)(v_i - v_j).
double afc_edge_form(const LimiterSet& limiters, const SparseMatrix& D,
                     const EdgeTopology& edges, const DiscreteField& u,
                     const DiscreteField& v);

/// CSV dump of per-edge (h_E, d_ij, alpha_E, alpha_ij, feasible).
void write_limiter_csv(const EdgeTopology& edges, const EdgeCoefficients& coeffs,
                       const SparseMatrix& D, const LimiterSet& limiters,
                       std::ostream& out);

}  // namespace edgediff
