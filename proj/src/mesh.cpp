#include "edgediff/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace edgediff {

namespace {

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

void push_triangle(Mesh& mesh, int a, int b, int c) {
    if (signed_area(mesh.nodes[a], mesh.nodes[b], mesh.nodes[c]) <= 0.0) {
        std::swap(b, c);
    }
    mesh.triangles.push_back({a, b, c});
}

}  // namespace

std::string to_string(MeshKind kind) {
    switch (kind) {
        case MeshKind::CrissCross: return "criss-cross";
        case MeshKind::UnionJack: return "union-jack";
        case MeshKind::ThreeDirectional: return "three-directional";
        case MeshKind::NonSymmetric: return "non-symmetric";
        case MeshKind::External: return "external";
    }
    return "unknown";
}

MeshKind mesh_kind_from_string(const std::string& name) {
    if (name == "criss-cross" || name == "a") return MeshKind::CrissCross;
    if (name == "union-jack" || name == "b") return MeshKind::UnionJack;
    if (name == "three-directional" || name == "c") return MeshKind::ThreeDirectional;
    if (name == "non-symmetric" || name == "d") return MeshKind::NonSymmetric;
    throw std::invalid_argument("unknown mesh kind: " + name);
}

double Mesh::triangle_area(int t) const {
    const auto& tr = triangles[static_cast<std::size_t>(t)];
    return signed_area(nodes[tr[0]], nodes[tr[1]], nodes[tr[2]]);
}

Mesh build_mesh(MeshKind kind, int level, std::size_t node_cap) {
    if (level < 1) throw std::invalid_argument("mesh level must be >= 1");
    if (kind == MeshKind::External)
        throw std::invalid_argument("external meshes are read from files, not built");

    const int n = 1 << level;  // cells per direction
    const std::size_t grid_nodes = static_cast<std::size_t>(n + 1) * (n + 1);
    const std::size_t total_nodes =
        grid_nodes + (kind == MeshKind::CrissCross ? static_cast<std::size_t>(n) * n : 0);
    if (total_nodes > node_cap)
        throw std::invalid_argument("mesh level exceeds the configured node cap");

    Mesh mesh;
    mesh.level = level;
    mesh.kind = kind;
    mesh.nodes.reserve(total_nodes);
    mesh.on_boundary.assign(total_nodes, false);

    const double h = 1.0 / n;

    // The non-symmetric family distorts the lower-left region (at least 2x2
    // cells; the fixed square [0,1/4]^2 from level 3 on): block-interior
    // vertical lines move so that 2-cell blocks split 1.6h/0.4h on even node
    // rows and 0.4h/1.6h on odd rows. The cells there become trapezoids, and a
    // flipped diagonal can then break the Delaunay criterion; the region
    // refines self-similarly so the family stays shape regular.
    const int distorted = std::min(n, std::max(n / 4, 2));

    // Grid nodes, row-major (x fastest).
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            double x = i * h;
            if (kind == MeshKind::NonSymmetric && (i % 2) == 1 && i < distorted &&
                j <= distorted) {
                const double wide = (j % 2 == 0) ? 1.6 : 0.4;
                x = (i - 1) * h + wide * h;
            }
            mesh.nodes.emplace_back(x, j * h);
            if (i == 0 || j == 0 || i == n || j == n)
                mesh.on_boundary[mesh.nodes.size() - 1] = true;
        }
    }

    const auto grid = [n](int i, int j) { return j * (n + 1) + i; };

    switch (kind) {
        case MeshKind::CrissCross: {
            // Cell centers appended after the grid nodes.
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    mesh.nodes.emplace_back((i + 0.5) * h, (j + 0.5) * h);
            const auto center = [&](int i, int j) {
                return static_cast<int>(grid_nodes) + j * n + i;
            };
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    const int v00 = grid(i, j), v10 = grid(i + 1, j);
                    const int v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
                    const int c = center(i, j);
                    push_triangle(mesh, v00, v10, c);
                    push_triangle(mesh, v10, v11, c);
                    push_triangle(mesh, v11, v01, c);
                    push_triangle(mesh, v01, v00, c);
                }
            }
            break;
        }
        case MeshKind::UnionJack:
        case MeshKind::ThreeDirectional:
        case MeshKind::NonSymmetric: {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i) {
                    const int v00 = grid(i, j), v10 = grid(i + 1, j);
                    const int v01 = grid(i, j + 1), v11 = grid(i + 1, j + 1);
                    bool main_diagonal = true;  // lower-left to upper-right
                    if (kind == MeshKind::UnionJack) main_diagonal = ((i + j) % 2 == 0);
                    if (kind == MeshKind::NonSymmetric && i < distorted && j < distorted)
                        main_diagonal = ((i + j) % 2 != 0);
                    if (main_diagonal) {
                        push_triangle(mesh, v00, v10, v11);
                        push_triangle(mesh, v00, v11, v01);
                    } else {
                        push_triangle(mesh, v00, v10, v01);
                        push_triangle(mesh, v10, v11, v01);
                    }
                }
            }
            break;
        }
        case MeshKind::External:
            break;
    }

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        if (mesh.triangle_area(t) <= 0.0)
            throw std::runtime_error("mesh construction produced a degenerate triangle");
    }

    if (kind == MeshKind::NonSymmetric) {
        // The family exists to be non-Delaunay; refuse to hand out a mesh that
        // fails to violate the criterion.
        const auto xz = check_xu_zikatanov(mesh, extract_edges(mesh));
        if (xz.satisfied)
            throw std::runtime_error("non-symmetric mesh did not violate the edge criterion");
    }

    return mesh;
}

EdgeTopology extract_edges(const Mesh& mesh) {
    struct SideInfo {
        std::array<int, 2> tris{-1, -1};
        int count = 0;
    };
    std::map<std::pair<int, int>, SideInfo> sides;

    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tr = mesh.triangles[static_cast<std::size_t>(t)];
        for (int s = 0; s < 3; ++s) {
            int a = tr[s], b = tr[(s + 1) % 3];
            if (a > b) std::swap(a, b);
            auto& info = sides[{a, b}];
            if (info.count >= 2)
                throw std::runtime_error("non-conforming mesh: side shared by >2 triangles");
            info.tris[info.count++] = t;
        }
    }

    EdgeTopology topo;
    for (const auto& [key, info] : sides) {
        Edge e;
        e.a = key.first;
        e.b = key.second;
        const Eigen::Vector2d d = mesh.nodes[e.b] - mesh.nodes[e.a];
        e.length = d.norm();
        if (!(e.length > 0.0)) throw std::runtime_error("zero-length edge");
        e.tangent = d / e.length;
        e.tris = info.tris;
        e.tri_count = info.count;
        if (info.count == 2) {
            topo.interior.push_back(e);
        } else {
            if (!mesh.is_boundary(e.a) || !mesh.is_boundary(e.b))
                throw std::runtime_error(
                    "non-conforming mesh: single-triangle side with interior endpoint");
            topo.boundary.push_back(e);
        }
    }
    return topo;
}

NodeStencil build_stencils(const Mesh& mesh, const EdgeTopology& edges) {
    NodeStencil st;
    const std::size_t n = static_cast<std::size_t>(mesh.num_nodes());
    st.neighbors.resize(n);
    st.edges.resize(n);
    st.triangles.resize(n);

    for (int e = 0; e < edges.num_interior(); ++e) {
        const Edge& edge = edges.interior[static_cast<std::size_t>(e)];
        st.neighbors[edge.a].push_back(edge.b);
        st.neighbors[edge.b].push_back(edge.a);
        st.edges[edge.a].push_back(e);
        st.edges[edge.b].push_back(e);
    }
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        for (int v : mesh.triangles[static_cast<std::size_t>(t)])
            st.triangles[v].push_back(t);
    }
    return st;
}

SymmetryReport is_symmetric(const Mesh& mesh, const NodeStencil& stencils) {
    constexpr double tol = 1e-12;
    SymmetryReport report;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        if (mesh.is_boundary(i)) continue;
        const auto& nb = stencils.neighbors[static_cast<std::size_t>(i)];
        bool ok = true;
        for (int j : nb) {
            const Eigen::Vector2d dj = mesh.nodes[j] - mesh.nodes[i];
            bool matched = false;
            for (int k : nb) {
                if ((dj + (mesh.nodes[k] - mesh.nodes[i])).norm() <= tol) {
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                ok = false;
                break;
            }
        }
        if (!ok) report.violating_nodes.push_back(i);
    }
    report.symmetric = report.violating_nodes.empty();
    return report;
}

XuZikatanovReport check_xu_zikatanov(const Mesh& mesh, const EdgeTopology& edges) {
    constexpr double tol = 1e-12;
    XuZikatanovReport report;
    report.edge_weight.resize(edges.interior.size());

    for (std::size_t e = 0; e < edges.interior.size(); ++e) {
        const Edge& edge = edges.interior[e];
        double sum = 0.0;
        for (int s = 0; s < edge.tri_count; ++s) {
            const auto& tr = mesh.triangles[static_cast<std::size_t>(edge.tris[s])];
            int opposite = -1;
            for (int v : tr)
                if (v != edge.a && v != edge.b) opposite = v;
            const Eigen::Vector2d u = mesh.nodes[edge.a] - mesh.nodes[opposite];
            const Eigen::Vector2d w = mesh.nodes[edge.b] - mesh.nodes[opposite];
            const double cross = u.x() * w.y() - u.y() * w.x();
            if (std::abs(cross) < 1e-30)
                throw std::runtime_error("degenerate triangle in cotangent computation");
            sum += 0.5 * u.dot(w) / std::abs(cross);
        }
        report.edge_weight[e] = sum;
        if (sum < -tol) report.violating_edges.push_back(static_cast<int>(e));
    }
    report.satisfied = report.violating_edges.empty();
    return report;
}

Triangulation Triangulation::build(MeshKind kind, int level) {
    return from_mesh(build_mesh(kind, level));
}

Triangulation Triangulation::from_mesh(Mesh mesh) {
    Triangulation tri;
    tri.mesh = std::move(mesh);
    tri.edges = extract_edges(tri.mesh);
    tri.stencils = build_stencils(tri.mesh, tri.edges);
    return tri;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
    out << "nodes " << mesh.num_nodes() << " triangles " << mesh.num_triangles() << "\n";
    out.precision(17);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        out << mesh.nodes[i].x() << " " << mesh.nodes[i].y() << " "
            << (mesh.is_boundary(i) ? 1 : 0) << "\n";
    }
    for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open mesh file for writing: " + path);
    write_mesh(mesh, out);
}

Mesh read_mesh(std::istream& in) {
    std::string kw1, kw2;
    int n_nodes = 0, n_tris = 0;
    if (!(in >> kw1 >> n_nodes >> kw2 >> n_tris) || kw1 != "nodes" || kw2 != "triangles")
        throw std::runtime_error("bad mesh header (expected 'nodes N triangles T')");
    if (n_nodes <= 0 || n_tris <= 0) throw std::runtime_error("empty mesh");

    Mesh mesh;
    mesh.kind = MeshKind::External;
    mesh.level = 0;
    mesh.nodes.reserve(static_cast<std::size_t>(n_nodes));
    mesh.on_boundary.assign(static_cast<std::size_t>(n_nodes), false);
    for (int i = 0; i < n_nodes; ++i) {
        double x, y;
        int tag;
        if (!(in >> x >> y >> tag)) throw std::runtime_error("truncated mesh node list");
        mesh.nodes.emplace_back(x, y);
        mesh.on_boundary[static_cast<std::size_t>(i)] = (tag != 0);
    }
    for (int t = 0; t < n_tris; ++t) {
        int a, b, c;
        if (!(in >> a >> b >> c)) throw std::runtime_error("truncated mesh triangle list");
        for (int v : {a, b, c})
            if (v < 0 || v >= n_nodes) throw std::runtime_error("triangle index out of range");
        mesh.triangles.push_back({a, b, c});
        if (mesh.triangle_area(t) <= 0.0)
            throw std::runtime_error("mesh file contains a non-CCW or degenerate triangle");
    }

    // Cross-check tags against the actual boundary.
    const EdgeTopology topo = extract_edges(mesh);
    std::vector<bool> derived(static_cast<std::size_t>(n_nodes), false);
    for (const Edge& e : topo.boundary) derived[e.a] = derived[e.b] = true;
    if (derived != mesh.on_boundary)
        throw std::runtime_error("mesh file boundary tags disagree with the triangulation");
    return mesh;
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mesh file: " + path);
    return read_mesh(in);
}

}  // namespace edgediff
