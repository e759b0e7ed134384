#include "edgediff/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edgediff {

void ProblemSpec::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
    if (!velocity || !source || !dirichlet_data)
        throw std::invalid_argument("velocity, source and dirichlet_data must be set");
    if (std::none_of(boundary_layout.begin(), boundary_layout.end(),
                     [](BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet; }))
        throw std::invalid_argument("at least one Dirichlet segment is required");
}

std::vector<Side> node_sides(const Mesh& mesh, int node) {
    constexpr double tol = 1e-12;
    std::vector<Side> sides;
    if (!mesh.is_boundary(node)) return sides;
    const Eigen::Vector2d& x = mesh.nodes[static_cast<std::size_t>(node)];
    if (std::abs(x.y()) <= tol) sides.push_back(Side::Bottom);
    if (std::abs(x.x() - 1.0) <= tol) sides.push_back(Side::Right);
    if (std::abs(x.y() - 1.0) <= tol) sides.push_back(Side::Top);
    if (std::abs(x.x()) <= tol) sides.push_back(Side::Left);
    return sides;
}

std::vector<bool> dirichlet_node_mask(const Mesh& mesh, const ProblemSpec& spec) {
    std::vector<bool> mask(static_cast<std::size_t>(mesh.num_nodes()), false);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (!mesh.is_boundary(i)) continue;
        const auto sides = node_sides(mesh, i);
        if (sides.empty()) {
            // Boundary node of an external mesh that is not on the unit square
            // outline: constrain it (Dirichlet), the safe default.
            mask[static_cast<std::size_t>(i)] = true;
            continue;
        }
        for (Side s : sides) {
            if (spec.boundary_layout[static_cast<std::size_t>(s)] ==
                BoundaryCondition::Dirichlet)
                mask[static_cast<std::size_t>(i)] = true;
        }
    }
    return mask;
}

DiscreteField dirichlet_lift(const Mesh& mesh, const ProblemSpec& spec) {
    DiscreteField lift = DiscreteField::Zero(mesh.num_nodes());
    const auto mask = dirichlet_node_mask(mesh, spec);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (mask[static_cast<std::size_t>(i)]) {
            const auto& x = mesh.nodes[static_cast<std::size_t>(i)];
            lift[i] = spec.dirichlet_data(x.x(), x.y());
        }
    }
    return lift;
}

}  // namespace edgediff
