#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgediff/afc.hpp"
#include "edgediff/analysis.hpp"
#include "edgediff/presets.hpp"

namespace edgediff {

/// Experiment runner configuration. Presets pin every parameter; the optional
/// fields are overrides and win when set. The custom preset requires all of
/// them.
struct RunConfig {
    std::string preset = "smooth-sine";  // smooth-sine | rotating-layer | skew-advection | custom
    std::optional<MeshKind> mesh_kind;
    int level_min = 3;
    int level_max = 7;
    std::optional<double> epsilon;
    std::optional<double> sigma;
    std::optional<double> bx, by;  // custom runs use a constant velocity
    std::optional<double> gamma0;
    std::optional<double> p;
    std::optional<double> omega;
    std::optional<double> residual_tol;
    std::optional<int> max_iters;
    std::string output_dir = ".";
    std::vector<double> p_values;  // layer runs: record these p variants
    bool write_residual_log = false;
    int threads = 1;  // level parallelism for convergence runs

    std::string metadata_line(const std::string& command) const;
};

/// Resolve the preset named by the config and apply the overrides.
Experiment configure_experiment(const RunConfig& config);

struct ConvergenceRunResult {
    ConvergenceReport report;
    std::string csv_path;
    std::string dat_path;
    bool all_converged = true;
};

/// Solve the configured problem across the level range, compute error norms
/// and orders, and write the CSV table plus a gnuplot-style error-vs-h file.
ConvergenceRunResult run_convergence(const RunConfig& config);

struct LayerRunResult {
    struct Variant {
        double p = 0.0;
        DmpReport dmp;
        bool converged = true;
        int iterations = 0;
        int layer_nodes = 0;  // nodes with value strictly inside (0.1, 0.9)
        std::string field_path;
        std::string vtk_path;
    };
    std::vector<Variant> variants;
    std::string dmp_path;
    bool all_converged = true;
};

/// Solve a layer preset at one level (level_min) for the requested p variants;
/// write the nodal field as (x, y, value) triples, a legacy VTK file, and a
/// DMP report.
LayerRunResult run_layer(const RunConfig& config);

struct AfcCompareResult {
    int feasible_edges = 0;
    int infeasible_edges = 0;
    int dirichlet_edges = 0;
    double max_edge_discrepancy = 0.0;  // feasible edges, stabilizer vs limiter coefficient
    double residual_discrepancy = 0.0;  // free-node max norm between the two assemblies
    bool converged = true;
    std::string csv_path;
};

/// Solve via the stabilized scheme, derive the equivalent flux limiters, and
/// compare the two assemblies of the nonlinear term edge by edge.
AfcCompareResult run_afc_compare(const RunConfig& config);

struct MeshAuditResult {
    int nodes = 0, triangles = 0, interior_edges = 0, boundary_edges = 0;
    SymmetryReport symmetry;
    XuZikatanovReport xu_zikatanov;
};

MeshAuditResult run_mesh_audit(MeshKind kind, int level);

struct LipschitzRunResult {
    std::vector<int> levels;
    std::vector<double> constants;
    double max_ratio = 1.0;  // max pairwise ratio across levels
};

LipschitzRunResult run_measure_lipschitz(MeshKind kind, int level_min, int level_max,
                                         double gamma0, double p, int samples,
                                         std::uint64_t seed);

// Report writers (CSV files carry a "# key=value ..." metadata header).
void write_convergence_csv(const ConvergenceReport& report, const std::string& path);
void write_convergence_dat(const ConvergenceReport& report, const std::string& path);
void write_field_triples(const Mesh& mesh, const DiscreteField& u, const std::string& metadata,
                         const std::string& path);
void write_legacy_vtk(const Mesh& mesh, const DiscreteField& u, const std::string& title,
                      const std::string& path);
void write_dmp_report(const std::vector<std::pair<double, DmpReport>>& per_p,
                      const std::string& metadata, const std::string& path);
void write_residual_csv(const SolveReport& report, const std::string& metadata,
                        const std::string& path);

/// Thread count from the EDGEDIFF_THREADS environment variable (>= 1);
/// defaults to 1 (single-threaded, deterministic).
int threads_from_env();

}  // namespace edgediff
