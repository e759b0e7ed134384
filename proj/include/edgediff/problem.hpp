#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "edgediff/mesh.hpp"

namespace edgediff {

/// Nodal coefficient vector over the mesh nodes.
using DiscreteField = Eigen::VectorXd;

enum class BoundaryCondition { Dirichlet, NeumannHomogeneous };

/// Sides of the unit square, used to lay out boundary conditions.
enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

using ScalarFn = std::function<double(double, double)>;
using VectorFn = std::function<Eigen::Vector2d(double, double)>;

/// Coefficients and data of -eps*Lap(u) + b.grad(u) + sigma*u = f with
/// Dirichlet data g and optional do-nothing (homogeneous Neumann) sides.
struct ProblemSpec {
    double epsilon = 1.0;
    double sigma = 0.0;
    VectorFn velocity;        // b, assumed solenoidal
    ScalarFn source;          // f
    ScalarFn dirichlet_data;  // g
    std::array<BoundaryCondition, 4> boundary_layout{
        BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet,
        BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet};

    void validate() const;  // throws std::invalid_argument
};

/// Which side(s) of the unit square a boundary node lies on (corners lie on two).
std::vector<Side> node_sides(const Mesh& mesh, int node);

/// True per node if the node is constrained by a Dirichlet segment.
/// A node on several segments is Dirichlet if any of them is.
std::vector<bool> dirichlet_node_mask(const Mesh& mesh, const ProblemSpec& spec);

/// Boundary lift u_bh: nodal interpolation of g at Dirichlet nodes, zero elsewhere.
DiscreteField dirichlet_lift(const Mesh& mesh, const ProblemSpec& spec);

}  // namespace edgediff
