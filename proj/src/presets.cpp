#include "edgediff/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace edgediff {

namespace {

constexpr double kPi = 3.14159265358979323846;

ExactSolution sine_product_solution() {
    ExactSolution exact;
    exact.value = [](double x, double y) {
        return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
    };
    exact.gradient = [](double x, double y) {
        return Eigen::Vector2d(2.0 * kPi * std::cos(2.0 * kPi * x) * std::sin(2.0 * kPi * y),
                               2.0 * kPi * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y));
    };
    return exact;
}

}  // namespace

std::array<BoundaryCondition, 4> derive_inflow_layout(const VectorFn& velocity) {
    constexpr double tol = 1e-14;
    const std::array<Eigen::Vector2d, 4> midpoints = {
        Eigen::Vector2d(0.5, 0.0), Eigen::Vector2d(1.0, 0.5), Eigen::Vector2d(0.5, 1.0),
        Eigen::Vector2d(0.0, 0.5)};
    const std::array<Eigen::Vector2d, 4> normals = {
        Eigen::Vector2d(0.0, -1.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0),
        Eigen::Vector2d(-1.0, 0.0)};

    std::array<BoundaryCondition, 4> layout{};
    for (int s = 0; s < 4; ++s) {
        const Eigen::Vector2d b = velocity(midpoints[s].x(), midpoints[s].y());
        layout[s] = (b.dot(normals[s]) <= tol) ? BoundaryCondition::Dirichlet
                                               : BoundaryCondition::NeumannHomogeneous;
    }
    return layout;
}

Experiment smooth_sine_preset(double epsilon, MeshKind kind) {
    Experiment exp;
    exp.name = "smooth-sine";
    exp.mesh_kind = kind;
    exp.exact = sine_product_solution();

    exp.problem.epsilon = epsilon;
    exp.problem.sigma = 1.0;
    exp.problem.velocity = [](double, double) { return Eigen::Vector2d(2.0, 1.0); };
    // Manufactured right-hand side for u = sin(2 pi x) sin(2 pi y):
    // f = eps * 8 pi^2 u + b . grad u + sigma u.
    const auto exact = *exp.exact;
    const double sigma = exp.problem.sigma;
    exp.problem.source = [exact, epsilon, sigma](double x, double y) {
        const double u = exact.value(x, y);
        const Eigen::Vector2d grad = exact.gradient(x, y);
        return epsilon * 8.0 * kPi * kPi * u + 2.0 * grad.x() + 1.0 * grad.y() + sigma * u;
    };
    exp.problem.dirichlet_data = exact.value;

    exp.stabilizer.gamma0 = 3.0;
    exp.stabilizer.p = 4.0;
    return exp;
}

Experiment rotating_layer_preset(double p) {
    Experiment exp;
    exp.name = "rotating-layer";
    exp.mesh_kind = MeshKind::ThreeDirectional;

    exp.problem.epsilon = 1e-5;
    exp.problem.sigma = 0.0;
    exp.problem.velocity = [](double x, double y) { return Eigen::Vector2d(-y, x); };
    exp.problem.source = [](double, double) { return 0.0; };
    exp.problem.dirichlet_data = [](double x, double) { return x <= 0.5 ? 1.0 : 0.0; };
    exp.problem.boundary_layout = derive_inflow_layout(exp.problem.velocity);

    exp.stabilizer.gamma0 = 1.0;
    exp.stabilizer.p = p;
    exp.expected_bounds = {0.0, 1.0};
    return exp;
}

Experiment skew_advection_preset(double p) {
    Experiment exp;
    exp.name = "skew-advection";
    exp.mesh_kind = MeshKind::CrissCross;

    exp.problem.epsilon = 1e-5;
    exp.problem.sigma = 0.0;
    exp.problem.velocity = [](double, double) {
        return Eigen::Vector2d(std::cos(kPi / 3.0), std::sin(kPi / 3.0));
    };
    exp.problem.source = [](double, double) { return 0.0; };
    exp.problem.dirichlet_data = [](double x, double y) {
        return (x <= 1e-12 || y >= 1.0 - 1e-12) ? 1.0 : 0.0;
    };

    exp.stabilizer.gamma0 = 0.75;
    exp.stabilizer.p = p;
    exp.expected_bounds = {0.0, 1.0};
    return exp;
}

Experiment preset_by_name(const std::string& name) {
    if (name == "smooth-sine") return smooth_sine_preset();
    if (name == "rotating-layer") return rotating_layer_preset();
    if (name == "skew-advection") return skew_advection_preset();
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace edgediff
