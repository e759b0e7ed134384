#include "edgediff/quadrature.hpp"

#include <cmath>

namespace edgediff {

namespace {

double area(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1, const Eigen::Vector2d& p2) {
    return 0.5 * std::abs((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                          (p2.x() - p0.x()) * (p1.y() - p0.y()));
}

}  // namespace

std::array<QuadPoint, 3> midpoint_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                       const Eigen::Vector2d& p2) {
    const double w = area(p0, p1, p2) / 3.0;
    return {QuadPoint{0.5 * (p0 + p1), w}, QuadPoint{0.5 * (p1 + p2), w},
            QuadPoint{0.5 * (p2 + p0), w}};
}

std::array<QuadPoint, 6> degree4_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                                      const Eigen::Vector2d& p2) {
    // Two symmetric orbits (Dunavant, degree 4).
    constexpr double a1 = 0.445948490915965;
    constexpr double w1 = 0.223381589678011;
    constexpr double a2 = 0.091576213509771;
    constexpr double w2 = 0.109951743655322;

    const double A = area(p0, p1, p2);
    std::array<QuadPoint, 6> pts;
    int k = 0;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
        const double b = 1.0 - 2.0 * a;
        pts[k++] = {a * p0 + a * p1 + b * p2, w * A};
        pts[k++] = {a * p0 + b * p1 + a * p2, w * A};
        pts[k++] = {b * p0 + a * p1 + a * p2, w * A};
    }
    return pts;
}

}  // namespace edgediff
