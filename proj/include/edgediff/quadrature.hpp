#pragma once

#include <array>

#include <Eigen/Core>

namespace edgediff {

struct QuadPoint {
    Eigen::Vector2d x;
    double weight;  // already scaled by the triangle area
};

/// 3-edge-midpoint rule, exact through degree 2.
std::array<QuadPoint, 3> midpoint_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                       const Eigen::Vector2d& p2);

/// 6-point rule, exact through degree 4.
std::array<QuadPoint, 6> degree4_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                      const Eigen::Vector2d& p2);

}  // namespace edgediff
