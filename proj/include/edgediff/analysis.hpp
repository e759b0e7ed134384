#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgediff/mesh.hpp"
#include "edgediff/problem.hpp"
#include "edgediff/stabilizer.hpp"

namespace edgediff {

/// Analytic reference solution with gradient, for error evaluation.
struct ExactSolution {
    ScalarFn value;
    VectorFn gradient;
};

struct ErrorTriple {
    double l2 = 0.0;       // ||u - u_h||_0
    double h1_semi = 0.0;  // |u - u_h|_1
    double h_norm = 0.0;   // (sigma*l2^2 + eps*h1^2 + d_h(u_h; e_d, e_d))^(1/2)
};

/// L2 and H1-seminorm errors by degree-4 triangle quadrature; the d_h part of
/// the mesh-dependent norm uses the computable surrogate e_d = i_h(u) - u_h
/// (nodal interpolant of the exact solution minus the discrete solution),
/// with the edge coefficients frozen at u_h.
ErrorTriple error_norms(const ExactSolution& exact, const DiscreteField& u_h,
                        const Triangulation& tri, const ProblemSpec& spec,
                        const StabilizerParams& params);

/// Experimental orders log2(e_{l-1}/e_l) between consecutive levels; NaN where
/// undefined (first entry, or a zero error).
std::vector<double> eoc(const std::vector<double>& errors);

struct DmpReport {
    int undershoots = 0;  // interior nodes below the boundary minimum (f >= 0 case)
    int overshoots = 0;   // interior nodes above the boundary maximum (f <= 0 case)
    double boundary_min = 0.0, boundary_max = 0.0;
    double global_min = 0.0, global_max = 0.0;
    std::vector<int> violating_nodes;
    bool source_nonnegative = false, source_nonpositive = false;
    bool within_expected = true;  // meaningful only when expected bounds were supplied

    bool clean() const { return undershoots == 0 && overshoots == 0; }
};

/// Discrete maximum principle check. The sign of f (sampled at the nodes)
/// selects which side is enforced: f >= 0 checks interior values against the
/// boundary minimum, f <= 0 against the boundary maximum, f = 0 both.
DmpReport dmp_check(const DiscreteField& u_h, const Mesh& mesh, const ProblemSpec& spec,
                    std::optional<std::pair<double, double>> expected_bounds = {},
                    double tol = 1e-10);

/// Max over random nodal triples (v, w, z) of
///   |d_h(v;v,z) - d_h(w;w,z)| / (gamma0 * h * |v-w|_1 * |z|_1),
/// h = max triangle diameter. Samples with vanishing seminorm are skipped.
double measure_lipschitz(const Triangulation& tri, const StabilizerParams& params,
                         int samples, std::uint64_t seed);

/// H1 seminorm of a P1 nodal field.
double h1_seminorm(const DiscreteField& v, const Mesh& mesh);

/// i.i.d. uniform nodal values in [-1, 1], deterministic for a given seed.
DiscreteField random_field(int num_nodes, std::uint64_t seed);

struct ConvergenceRow {
    int level = 0;
    ErrorTriple errors;
    bool converged = true;
    int iterations = 0;
    double residual = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    std::string metadata;  // "key=value ..." summary of the generating config

    std::vector<double> l2_orders() const;
    std::vector<double> h1_orders() const;
    std::vector<double> hnorm_orders() const;
};

}  // namespace edgediff
