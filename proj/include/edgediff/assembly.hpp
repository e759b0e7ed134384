#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "edgediff/mesh.hpp"
#include "edgediff/problem.hpp"

namespace edgediff {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Galerkin matrix A_ij = eps*(grad psi_j, grad psi_i) + (b.grad psi_j, psi_i)
/// + sigma*(psi_j, psi_i). Diffusion is exact for P1; convection and reaction
/// use the 3-edge-midpoint rule (exact through degree 2).
SparseMatrix assemble_galerkin(const Mesh& mesh, const ProblemSpec& spec);

/// Load vector load_i = sum_K int_K f psi_i, 3-edge-midpoint rule per triangle.
DiscreteField assemble_load(const Mesh& mesh, const ProblemSpec& spec);

struct BoundarySystem {
    SparseMatrix matrix;
    DiscreteField rhs;
};

/// Fold the Dirichlet lift into the right-hand side, zero the Dirichlet
/// columns in free rows, and replace Dirichlet rows by identity rows with
/// rhs = g(x_i), so the free block is exactly the homogeneous problem.
BoundarySystem apply_dirichlet(const SparseMatrix& A, const DiscreteField& rhs,
                               const DiscreteField& lift,
                               const std::vector<bool>& dirichlet_mask);

/// Triplet text dump "i j value", one entry per line.
void write_triplets(const SparseMatrix& A, std::ostream& out);

}  // namespace edgediff
