#include "edgediff/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

namespace edgediff {

void SolverConfig::validate() const {
    if (!(omega > 0.0) || !(omega < 1.0))
        throw std::invalid_argument("damping omega must lie in (0,1)");
    if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

namespace {

// Direct/iterative linear solve behind one interface. The direct path reuses
// the symbolic analysis when asked to, which is valid inside the fixed-point
// loop where the sparsity pattern is iteration-independent.
class LinearSolver {
public:
    explicit LinearSolver(const SolverConfig& config) : config_(config) {}

    DiscreteField solve(const SparseMatrix& M, const DiscreteField& rhs) {
        DiscreteField x;
        if (config_.linear_solver == LinearSolverKind::DirectSparse) {
            if (!analyzed_) {
                lu_.analyzePattern(M);
                analyzed_ = true;
            }
            lu_.factorize(M);
            if (lu_.info() != Eigen::Success) throw_singular(M);
            x = lu_.solve(rhs);
        } else {
            Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> krylov;
            krylov.setTolerance(config_.linear_tol);
            krylov.setMaxIterations(20 * M.rows());
            krylov.compute(M);
            if (krylov.info() != Eigen::Success) throw_singular(M);
            if (have_guess_) {
                x = krylov.solveWithGuess(rhs, guess_);
            } else {
                x = krylov.solve(rhs);
            }
        }

        // One refinement step if the backward error misses the contract.
        const double scale = std::max(rhs.norm(), 1e-300);
        if ((M * x - rhs).norm() > 1e-12 * scale) {
            if (config_.linear_solver == LinearSolverKind::DirectSparse) {
                x += lu_.solve(DiscreteField(rhs - M * x));
            }
            if ((M * x - rhs).norm() > 1e-10 * scale) throw_singular(M);
        }
        if (config_.linear_solver == LinearSolverKind::IterativeILU) {
            guess_ = x;
            have_guess_ = true;
        }
        return x;
    }

private:
    [[noreturn]] void throw_singular(const SparseMatrix& M) const {
        std::ostringstream msg;
        msg << "linear solve failed (matrix " << M.rows() << "x" << M.cols() << ", "
            << M.nonZeros() << " nonzeros)";
        throw std::runtime_error(msg.str());
    }

    SolverConfig config_;
    Eigen::SparseLU<SparseMatrix> lu_;
    bool analyzed_ = false;
    DiscreteField guess_;
    bool have_guess_ = false;
};

double free_residual_norm(const SparseMatrix& A, const SparseMatrix& Dh,
                          const DiscreteField& u, const DiscreteField& load,
                          const std::vector<bool>& dirichlet_mask) {
    const DiscreteField r = A * u + Dh * u - load;
    double sum = 0.0;
    for (int i = 0; i < r.size(); ++i)
        if (!dirichlet_mask[static_cast<std::size_t>(i)]) sum += r[i] * r[i];
    return std::sqrt(sum);
}

}  // namespace

DiscreteField solve_linearized(const DiscreteField& w, const SparseMatrix& A,
                               const DiscreteField& load, const DiscreteField& lift,
                               const std::vector<bool>& dirichlet_mask,
                               const Triangulation& tri, const StabilizerParams& params,
                               const SolverConfig& config) {
    const SparseMatrix M = A + assemble_dh(w, tri, params);
    const BoundarySystem sys = apply_dirichlet(M, load, lift, dirichlet_mask);
    LinearSolver solver(config);
    return solver.solve(sys.matrix, sys.rhs);
}

DiscreteField solve_galerkin(const Triangulation& tri, const ProblemSpec& spec,
                             const SolverConfig& config) {
    const SparseMatrix A = assemble_galerkin(tri.mesh, spec);
    const DiscreteField load = assemble_load(tri.mesh, spec);
    const DiscreteField lift = dirichlet_lift(tri.mesh, spec);
    const auto mask = dirichlet_node_mask(tri.mesh, spec);
    const BoundarySystem sys = apply_dirichlet(A, load, lift, mask);
    LinearSolver solver(config);
    return solver.solve(sys.matrix, sys.rhs);
}

FixedPointResult fixed_point_solve(const Triangulation& tri, const ProblemSpec& spec,
                                   const StabilizerParams& params,
                                   const SolverConfig& config,
                                   const DiscreteField* initial) {
    spec.validate();
    params.validate();
    config.validate();

    const SparseMatrix A = assemble_galerkin(tri.mesh, spec);
    const DiscreteField load = assemble_load(tri.mesh, spec);
    const DiscreteField lift = dirichlet_lift(tri.mesh, spec);
    const auto mask = dirichlet_node_mask(tri.mesh, spec);

    LinearSolver galerkin_solver(config);
    DiscreteField u;
    if (initial != nullptr) {
        if (initial->size() != tri.mesh.num_nodes())
            throw std::invalid_argument("initial iterate size does not match mesh");
        u = *initial;
        for (int i = 0; i < u.size(); ++i)
            if (mask[static_cast<std::size_t>(i)]) u[i] = lift[i];
    } else {
        const BoundarySystem sys = apply_dirichlet(A, load, lift, mask);
        u = galerkin_solver.solve(sys.matrix, sys.rhs);
    }

    FixedPointResult result;
    SparseMatrix Dh = assemble_dh(u, tri, params);

    double residual = free_residual_norm(A, Dh, u, load, mask);
    result.report.residual_history.push_back(residual);
    if (residual <= config.residual_tol) {
        result.u = std::move(u);
        result.report.iterations = 0;
        result.report.final_residual = residual;
        result.report.converged = true;
        return result;
    }

    LinearSolver solver(config);
    int k = 0;
    for (; k < config.max_iters; ++k) {
        const SparseMatrix M = A + Dh;  // stabilization frozen at u^k
        const BoundarySystem sys = apply_dirichlet(M, load, lift, mask);
        const DiscreteField u_tilde = solver.solve(sys.matrix, sys.rhs);

        u += config.omega * (u_tilde - u);
        Dh = assemble_dh(u, tri, params);

        residual = free_residual_norm(A, Dh, u, load, mask);
        result.report.residual_history.push_back(residual);
        if (residual <= config.residual_tol) {
            ++k;
            break;
        }
    }

    result.u = std::move(u);
    result.report.iterations = k;
    result.report.final_residual = residual;
    result.report.converged = (residual <= config.residual_tol);
    return result;
}

}  // namespace edgediff
