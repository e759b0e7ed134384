#include "edgediff/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "edgediff/quadrature.hpp"

namespace edgediff {

namespace {

struct P1Gradient {
    std::array<Eigen::Vector2d, 3> grad;
};

P1Gradient p1_gradients(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                        const Eigen::Vector2d& p2) {
    const double twice_area =
        (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    P1Gradient g;
    g.grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / twice_area;
    g.grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / twice_area;
    g.grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / twice_area;
    return g;
}

double max_diameter(const Mesh& mesh) {
    double h = 0.0;
    for (const auto& tr : mesh.triangles) {
        for (int s = 0; s < 3; ++s) {
            const double len = (mesh.nodes[tr[s]] - mesh.nodes[tr[(s + 1) % 3]]).norm();
            h = std::max(h, len);
        }
    }
    return h;
}

}  // namespace

double h1_seminorm(const DiscreteField& v, const Mesh& mesh) {
    double sum = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[static_cast<std::size_t>(t)];
        const auto g = p1_gradients(mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]);
        Eigen::Vector2d grad = Eigen::Vector2d::Zero();
        for (int i = 0; i < 3; ++i) grad += v[tr[i]] * g.grad[i];
        sum += mesh.triangle_area(t) * grad.squaredNorm();
    }
    return std::sqrt(sum);
}

ErrorTriple error_norms(const ExactSolution& exact, const DiscreteField& u_h,
                        const Triangulation& tri, const ProblemSpec& spec,
                        const StabilizerParams& params) {
    if (!exact.value || !exact.gradient)
        throw std::invalid_argument("error_norms: exact solution must supply value and gradient");
    const Mesh& mesh = tri.mesh;
    if (u_h.size() != mesh.num_nodes())
        throw std::invalid_argument("error_norms: field size does not match mesh");

    double l2_sq = 0.0, h1_sq = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[static_cast<std::size_t>(t)];
        const auto& p0 = mesh.nodes[tr[0]];
        const auto& p1 = mesh.nodes[tr[1]];
        const auto& p2 = mesh.nodes[tr[2]];
        const auto g = p1_gradients(p0, p1, p2);

        Eigen::Vector2d grad_h = Eigen::Vector2d::Zero();
        for (int i = 0; i < 3; ++i) grad_h += u_h[tr[i]] * g.grad[i];

        for (const QuadPoint& q : degree4_rule(p0, p1, p2)) {
            // psi_i(x) = delta_i0 + grad psi_i . (x - p0) for P1.
            double uh = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double psi = (i == 0 ? 1.0 : 0.0) + g.grad[i].dot(q.x - p0);
                uh += u_h[tr[i]] * psi;
            }
            const double diff = exact.value(q.x.x(), q.x.y()) - uh;
            l2_sq += q.weight * diff * diff;
            h1_sq += q.weight * (exact.gradient(q.x.x(), q.x.y()) - grad_h).squaredNorm();
        }
    }

    // d_h part of the mesh-dependent norm: computable surrogate on the nodal
    // interpolation error, with coefficients frozen at the discrete solution.
    DiscreteField e_d(mesh.num_nodes());
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const auto& x = mesh.nodes[static_cast<std::size_t>(i)];
        e_d[i] = exact.value(x.x(), x.y()) - u_h[i];
    }
    const double dh_term = dh_apply(u_h, e_d, e_d, tri, params);

    ErrorTriple err;
    err.l2 = std::sqrt(l2_sq);
    err.h1_semi = std::sqrt(h1_sq);
    err.h_norm = std::sqrt(spec.sigma * l2_sq + spec.epsilon * h1_sq + dh_term);
    return err;
}

std::vector<double> eoc(const std::vector<double>& errors) {
    std::vector<double> orders(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t l = 1; l < errors.size(); ++l) {
        if (errors[l - 1] > 0.0 && errors[l] > 0.0)
            orders[l] = std::log2(errors[l - 1] / errors[l]);
    }
    return orders;
}

DmpReport dmp_check(const DiscreteField& u_h, const Mesh& mesh, const ProblemSpec& spec,
                    std::optional<std::pair<double, double>> expected_bounds, double tol) {
    if (u_h.size() != mesh.num_nodes())
        throw std::invalid_argument("dmp_check: field size does not match mesh");

    DmpReport report;
    report.source_nonnegative = true;
    report.source_nonpositive = true;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const auto& x = mesh.nodes[static_cast<std::size_t>(i)];
        const double f = spec.source(x.x(), x.y());
        if (f < 0.0) report.source_nonnegative = false;
        if (f > 0.0) report.source_nonpositive = false;
    }

    report.boundary_min = std::numeric_limits<double>::infinity();
    report.boundary_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (!mesh.is_boundary(i)) continue;
        report.boundary_min = std::min(report.boundary_min, u_h[i]);
        report.boundary_max = std::max(report.boundary_max, u_h[i]);
    }
    report.global_min = u_h.minCoeff();
    report.global_max = u_h.maxCoeff();

    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (mesh.is_boundary(i)) continue;
        if (report.source_nonnegative && u_h[i] < report.boundary_min - tol) {
            ++report.undershoots;
            report.violating_nodes.push_back(i);
        }
        if (report.source_nonpositive && u_h[i] > report.boundary_max + tol) {
            ++report.overshoots;
            report.violating_nodes.push_back(i);
        }
    }

    if (expected_bounds) {
        report.within_expected = report.global_min >= expected_bounds->first - tol &&
                                 report.global_max <= expected_bounds->second + tol;
    }
    return report;
}

DiscreteField random_field(int num_nodes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DiscreteField v(num_nodes);
    for (int i = 0; i < num_nodes; ++i) v[i] = dist(rng);
    return v;
}

double measure_lipschitz(const Triangulation& tri, const StabilizerParams& params,
                         int samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("measure_lipschitz: samples must be >= 1");
    if (!(params.gamma0 > 0.0))
        throw std::invalid_argument("measure_lipschitz: gamma0 must be positive");

    const int n = tri.mesh.num_nodes();
    const double h = max_diameter(tri.mesh);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const auto draw = [&](DiscreteField& v) {
        v.resize(n);
        for (int i = 0; i < n; ++i) v[i] = dist(rng);
    };

    // Independent test fields underestimate the constant badly (random signs
    // cancel, and the statistic decays with h); the direction z = v - w is the
    // one the Lipschitz bound is sharp in (it is also the direction the
    // uniqueness argument uses), so probe both per sample.
    double worst = 0.0;
    DiscreteField v, w, z;
    const auto probe = [&](const DiscreteField& dir) {
        const double dv = dh_apply(v, v, dir, tri, params);
        const double dw = dh_apply(w, w, dir, tri, params);
        const double den = params.gamma0 * h * h1_seminorm(v - w, tri.mesh) *
                           h1_seminorm(dir, tri.mesh);
        if (den <= 1e-14) return;  // degenerate sample
        worst = std::max(worst, std::abs(dv - dw) / den);
    };
    for (int s = 0; s < samples; ++s) {
        draw(v);
        draw(w);
        draw(z);
        probe(z);
        probe(v - w);
    }
    return worst;
}

std::vector<double> ConvergenceReport::l2_orders() const {
    std::vector<double> e;
    e.reserve(rows.size());
    for (const auto& r : rows) e.push_back(r.errors.l2);
    return eoc(e);
}

std::vector<double> ConvergenceReport::h1_orders() const {
    std::vector<double> e;
    e.reserve(rows.size());
    for (const auto& r : rows) e.push_back(r.errors.h1_semi);
    return eoc(e);
}

std::vector<double> ConvergenceReport::hnorm_orders() const {
    std::vector<double> e;
    e.reserve(rows.size());
    for (const auto& r : rows) e.push_back(r.errors.h_norm);
    return eoc(e);
}

}  // namespace edgediff
