#pragma once

#include <optional>
#include <string>

#include "edgediff/analysis.hpp"
#include "edgediff/mesh.hpp"
#include "edgediff/problem.hpp"
#include "edgediff/solver.hpp"
#include "edgediff/stabilizer.hpp"

namespace edgediff {

/// A fully pinned experiment: problem data, stabilizer and solver parameters,
/// mesh family, and (when the solution is manufactured) the exact solution.
struct Experiment {
    std::string name;
    ProblemSpec problem;
    StabilizerParams stabilizer;
    SolverConfig solver;
    MeshKind mesh_kind = MeshKind::ThreeDirectional;
    std::optional<ExactSolution> exact;
    std::optional<std::pair<double, double>> expected_bounds;  // for DMP reports
};

/// smooth-sine: manufactured u = sin(2 pi x) sin(2 pi y), b = (2,1), sigma = 1,
/// gamma0 = 3, p = 4, Dirichlet everywhere; epsilon defaults to 1.
Experiment smooth_sine_preset(double epsilon = 1.0, MeshKind kind = MeshKind::ThreeDirectional);

/// rotating-layer: eps = 1e-5, f = 0, sigma = 0, b = (-y, x), gamma0 = 1,
/// three-directional mesh; Dirichlet g = 1{x <= 0.5} on the inflow sides
/// (derived from the sign of b.n per side), do-nothing on outflow.
Experiment rotating_layer_preset(double p = 4.0);

/// skew-advection: eps = 1e-5, f = 0, sigma = 0, b = (cos(pi/3), sin(pi/3)),
/// gamma0 = 0.75, criss-cross mesh; Dirichlet everywhere with
/// g = 1 on {x = 0} and {y = 1}, 0 elsewhere.
Experiment skew_advection_preset(double p = 4.0);

Experiment preset_by_name(const std::string& name);

/// Tags each side of the unit square by the sign of b.n at the side midpoint:
/// Dirichlet where b.n <= 0 (inflow or tangential), homogeneous Neumann where
/// b.n > 0.
std::array<BoundaryCondition, 4> derive_inflow_layout(const VectorFn& velocity);

}  // namespace edgediff
