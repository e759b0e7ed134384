#pragma once

#include <vector>

#include "edgediff/assembly.hpp"
#include "edgediff/mesh.hpp"
#include "edgediff/problem.hpp"
#include "edgediff/stabilizer.hpp"

namespace edgediff {

enum class LinearSolverKind { DirectSparse, IterativeILU };

struct SolverConfig {
    double omega = 0.1;          // damping, in (0,1)
    double residual_tol = 1e-8;  // Euclidean norm over free nodes
    int max_iters = 20000;
    LinearSolverKind linear_solver = LinearSolverKind::DirectSparse;
    double linear_tol = 1e-12;   // iterative solver only

    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> residual_history;
    bool converged = false;
};

/// One linearized solve: (A + D_h(w)) u = load with the Dirichlet lift applied.
DiscreteField solve_linearized(const DiscreteField& w, const SparseMatrix& A,
                               const DiscreteField& load, const DiscreteField& lift,
                               const std::vector<bool>& dirichlet_mask,
                               const Triangulation& tri, const StabilizerParams& params,
                               const SolverConfig& config = {});

/// Plain Galerkin solve (no stabilization term).
DiscreteField solve_galerkin(const Triangulation& tri, const ProblemSpec& spec,
                             const SolverConfig& config = {});

struct FixedPointResult {
    DiscreteField u;
    SolveReport report;
};

/// Damped fixed-point iteration: starting from the Galerkin solution (or the
/// supplied initial iterate), repeat
///   solve  a(u~, v) + d_h(u^k; u~, v) = (f, v)
///   update u^{k+1} = u^k + omega (u~ - u^k)
/// until the residual (A + D_h(u^{k+1})) u^{k+1} - load, restricted to free
/// nodes, has Euclidean norm <= residual_tol. Non-convergence at max_iters is
/// reported, not thrown; the last iterate is still returned.
FixedPointResult fixed_point_solve(const Triangulation& tri, const ProblemSpec& spec,
                                   const StabilizerParams& params,
                                   const SolverConfig& config = {},
                                   const DiscreteField* initial = nullptr);

}  // namespace edgediff
