#include "edgediff/assembly.hpp"

#include <ostream>
#include <stdexcept>
#include <vector>

#include "edgediff/quadrature.hpp"

namespace edgediff {

namespace {

struct P1Element {
    double area;
    std::array<Eigen::Vector2d, 3> grad;  // constant gradients of the vertex basis functions
};

P1Element p1_element(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                     const Eigen::Vector2d& p2) {
    const double twice_area =
        (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (twice_area <= 0.0) throw std::runtime_error("degenerate or misoriented triangle");
    P1Element el;
    el.area = 0.5 * twice_area;
    el.grad[0] = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / twice_area;
    el.grad[1] = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / twice_area;
    el.grad[2] = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / twice_area;
    return el;
}

// Vertex basis values at the three edge midpoints: midpoint m of edge (a,b)
// carries psi_a = psi_b = 1/2, psi_c = 0.
constexpr double kMidpointPsi[3][3] = {
    {0.5, 0.5, 0.0},  // midpoint of (0,1)
    {0.0, 0.5, 0.5},  // midpoint of (1,2)
    {0.5, 0.0, 0.5},  // midpoint of (2,0)
};

}  // namespace

SparseMatrix assemble_galerkin(const Mesh& mesh, const ProblemSpec& spec) {
    spec.validate();
    const int n = mesh.num_nodes();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);

    for (const auto& tr : mesh.triangles) {
        const auto& p0 = mesh.nodes[tr[0]];
        const auto& p1 = mesh.nodes[tr[1]];
        const auto& p2 = mesh.nodes[tr[2]];
        const P1Element el = p1_element(p0, p1, p2);
        const auto quad = midpoint_rule(p0, p1, p2);

        double local[3][3] = {};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                local[i][j] = spec.epsilon * el.area * el.grad[i].dot(el.grad[j]);

        for (int q = 0; q < 3; ++q) {
            const Eigen::Vector2d b = spec.velocity(quad[q].x.x(), quad[q].x.y());
            for (int i = 0; i < 3; ++i) {
                const double psi_i = kMidpointPsi[q][i];
                if (psi_i == 0.0) continue;
                for (int j = 0; j < 3; ++j) {
                    local[i][j] += quad[q].weight * psi_i *
                                   (b.dot(el.grad[j]) + spec.sigma * kMidpointPsi[q][j]);
                }
            }
        }

        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                triplets.emplace_back(tr[i], tr[j], local[i][j]);
    }

    SparseMatrix A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    return A;
}

DiscreteField assemble_load(const Mesh& mesh, const ProblemSpec& spec) {
    DiscreteField load = DiscreteField::Zero(mesh.num_nodes());
    for (const auto& tr : mesh.triangles) {
        const auto quad =
            midpoint_rule(mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]);
        for (int q = 0; q < 3; ++q) {
            const double fw = quad[q].weight * spec.source(quad[q].x.x(), quad[q].x.y());
            for (int i = 0; i < 3; ++i) load[tr[i]] += fw * kMidpointPsi[q][i];
        }
    }
    return load;
}

BoundarySystem apply_dirichlet(const SparseMatrix& A, const DiscreteField& rhs,
                               const DiscreteField& lift,
                               const std::vector<bool>& dirichlet_mask) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || rhs.size() != n || lift.size() != n ||
        static_cast<int>(dirichlet_mask.size()) != n)
        throw std::invalid_argument("apply_dirichlet: inconsistent sizes");

    BoundarySystem sys;
    sys.rhs = rhs;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(A.nonZeros()) + static_cast<std::size_t>(n));
    for (int col = 0; col < A.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(A, col); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            if (dirichlet_mask[static_cast<std::size_t>(i)]) continue;
            if (dirichlet_mask[static_cast<std::size_t>(j)]) {
                sys.rhs[i] -= it.value() * lift[j];
                continue;
            }
            triplets.emplace_back(i, j, it.value());
        }
    }
    for (int i = 0; i < n; ++i) {
        if (dirichlet_mask[static_cast<std::size_t>(i)]) {
            triplets.emplace_back(i, i, 1.0);
            sys.rhs[i] = lift[i];
        }
    }

    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return sys;
}

void write_triplets(const SparseMatrix& A, std::ostream& out) {
    out.precision(17);
    for (int col = 0; col < A.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(A, col); it; ++it)
            out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace edgediff
