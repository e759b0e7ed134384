#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace edgediff {

/// Built-in structured triangulations of the unit square.
///
/// CrissCross      - every grid cell split into 4 triangles through its center
/// UnionJack       - cell diagonals alternate in a checkerboard pattern
/// ThreeDirectional- all cells split by the same (lower-left to upper-right) diagonal
/// NonSymmetric    - three-directional base with row-alternating 4:1 cell-width
///                   stretch and checkerboard diagonal flips; the flipped
///                   diagonals violate the Delaunay criterion
/// External        - read from a mesh file
enum class MeshKind { CrissCross, UnionJack, ThreeDirectional, NonSymmetric, External };

std::string to_string(MeshKind kind);
MeshKind mesh_kind_from_string(const std::string& name);

struct Mesh {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<bool> on_boundary;
    int level = 0;  // refinement index, h ~ 2^-level; 0 for external meshes
    MeshKind kind = MeshKind::External;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    bool is_boundary(int i) const { return on_boundary[static_cast<std::size_t>(i)]; }

    double triangle_area(int t) const;
};

struct Edge {
    int a = -1, b = -1;            // node indices, a < b
    double length = 0.0;           // h_E
    Eigen::Vector2d tangent;       // unit, oriented from a to b
    std::array<int, 2> tris{-1, -1};
    int tri_count = 0;
};

struct EdgeTopology {
    std::vector<Edge> interior;
    std::vector<Edge> boundary;

    int num_interior() const { return static_cast<int>(interior.size()); }
};

/// Per-node neighborhoods built from the interior edges: S_i (edge-neighbors),
/// E_i (incident interior edges), Omega_i (incident triangles).
struct NodeStencil {
    std::vector<std::vector<int>> neighbors;
    std::vector<std::vector<int>> edges;
    std::vector<std::vector<int>> triangles;
};

struct SymmetryReport {
    bool symmetric = false;
    std::vector<int> violating_nodes;
};

struct XuZikatanovReport {
    bool satisfied = false;
    std::vector<double> edge_weight;   // per interior edge: (1/2) sum of opposite cotangents
    std::vector<int> violating_edges;  // indices into EdgeTopology::interior
};

Mesh build_mesh(MeshKind kind, int level, std::size_t node_cap = 16u * 1024u * 1024u);

EdgeTopology extract_edges(const Mesh& mesh);

NodeStencil build_stencils(const Mesh& mesh, const EdgeTopology& edges);

SymmetryReport is_symmetric(const Mesh& mesh, const NodeStencil& stencils);

XuZikatanovReport check_xu_zikatanov(const Mesh& mesh, const EdgeTopology& edges);

/// Mesh plus derived topology, built once and shared read-only.
struct Triangulation {
    Mesh mesh;
    EdgeTopology edges;
    NodeStencil stencils;

    static Triangulation build(MeshKind kind, int level);
    static Triangulation from_mesh(Mesh mesh);
};

// Plain-text mesh format: "nodes N triangles T", N lines "x y tag",
// T lines "i j k" (0-based).
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh_file(const Mesh& mesh, const std::string& path);
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);

}  // namespace edgediff
