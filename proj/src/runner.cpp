#include "edgediff/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "edgediff/solver.hpp"

namespace edgediff {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string order_field(double v) {
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string RunConfig::metadata_line(const std::string& command) const {
    std::ostringstream os;
    os << "# command=" << command << " preset=" << preset;
    if (mesh_kind) os << " mesh=" << to_string(*mesh_kind);
    os << " levels=" << level_min << ":" << level_max;
    if (epsilon) os << " epsilon=" << fmt(*epsilon);
    if (sigma) os << " sigma=" << fmt(*sigma);
    if (bx) os << " bx=" << fmt(*bx);
    if (by) os << " by=" << fmt(*by);
    if (gamma0) os << " gamma0=" << fmt(*gamma0);
    if (p) os << " p=" << fmt(*p);
    if (omega) os << " omega=" << fmt(*omega);
    if (residual_tol) os << " tol=" << fmt(*residual_tol);
    if (max_iters) os << " max_iters=" << *max_iters;
    if (!p_values.empty()) {
        os << " p_values=";
        for (std::size_t i = 0; i < p_values.size(); ++i)
            os << (i ? "," : "") << fmt(p_values[i]);
    }
    return os.str();
}

Experiment configure_experiment(const RunConfig& config) {
    Experiment exp;
    if (config.preset == "custom") {
        require(config.mesh_kind && config.epsilon && config.sigma && config.bx &&
                    config.by && config.gamma0 && config.p,
                "custom preset requires mesh, epsilon, sigma, bx, by, gamma0 and p");
        exp = smooth_sine_preset(*config.epsilon, *config.mesh_kind);
        exp.name = "custom";
        exp.problem.sigma = *config.sigma;
        const double bx = *config.bx, by = *config.by;
        exp.problem.velocity = [bx, by](double, double) { return Eigen::Vector2d(bx, by); };
        // Rebuild the manufactured source for the custom coefficients.
        const auto exact = *exp.exact;
        const double eps = *config.epsilon, sigma = *config.sigma;
        constexpr double pi = 3.14159265358979323846;
        exp.problem.source = [exact, eps, sigma, bx, by](double x, double y) {
            const double u = exact.value(x, y);
            const Eigen::Vector2d grad = exact.gradient(x, y);
            return eps * 8.0 * pi * pi * u + bx * grad.x() + by * grad.y() + sigma * u;
        };
    } else {
        exp = preset_by_name(config.preset);
        if (config.mesh_kind) exp.mesh_kind = *config.mesh_kind;
        if (config.epsilon) exp.problem.epsilon = *config.epsilon;
        if (config.sigma) exp.problem.sigma = *config.sigma;
        require(!config.bx && !config.by,
                "velocity overrides are only available with the custom preset");
        if (config.preset == "smooth-sine" && config.epsilon) {
            // epsilon enters the manufactured source; rebuild the preset with it.
            exp = smooth_sine_preset(*config.epsilon,
                                     config.mesh_kind ? *config.mesh_kind : exp.mesh_kind);
        }
    }
    if (config.gamma0) exp.stabilizer.gamma0 = *config.gamma0;
    if (config.p) exp.stabilizer.p = *config.p;
    if (config.omega) exp.solver.omega = *config.omega;
    if (config.residual_tol) exp.solver.residual_tol = *config.residual_tol;
    if (config.max_iters) exp.solver.max_iters = *config.max_iters;
    return exp;
}

ConvergenceRunResult run_convergence(const RunConfig& config) {
    require(config.level_min >= 1 && config.level_max >= config.level_min,
            "convergence run needs 1 <= level_min <= level_max");
    const Experiment exp = configure_experiment(config);
    require(exp.exact.has_value(), "convergence run needs a preset with an exact solution");

    const int n_levels = config.level_max - config.level_min + 1;
    std::vector<ConvergenceRow> rows(static_cast<std::size_t>(n_levels));
    std::vector<SolveReport> reports(static_cast<std::size_t>(n_levels));

    const auto solve_level = [&](int idx) {
        const int level = config.level_min + idx;
        const Triangulation tri = Triangulation::build(exp.mesh_kind, level);
        FixedPointResult res = fixed_point_solve(tri, exp.problem, exp.stabilizer, exp.solver);
        ConvergenceRow row;
        row.level = level;
        row.errors = error_norms(*exp.exact, res.u, tri, exp.problem, exp.stabilizer);
        row.converged = res.report.converged;
        row.iterations = res.report.iterations;
        row.residual = res.report.final_residual;
        rows[static_cast<std::size_t>(idx)] = row;
        reports[static_cast<std::size_t>(idx)] = std::move(res.report);
    };

    if (config.threads > 1) {
        // Levels are independent; run them concurrently and merge in order.
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<std::size_t>(n_levels));
        for (int idx = 0; idx < n_levels; ++idx)
            futures.push_back(std::async(std::launch::async, solve_level, idx));
        for (auto& f : futures) f.get();
    } else {
        for (int idx = 0; idx < n_levels; ++idx) solve_level(idx);
    }

    ConvergenceRunResult result;
    result.report.rows = std::move(rows);
    result.report.metadata = config.metadata_line("convergence");
    for (const auto& row : result.report.rows)
        result.all_converged = result.all_converged && row.converged;

    result.csv_path = join_path(config.output_dir, "convergence.csv");
    result.dat_path = join_path(config.output_dir, "convergence.dat");
    write_convergence_csv(result.report, result.csv_path);
    write_convergence_dat(result.report, result.dat_path);

    if (config.write_residual_log) {
        for (int idx = 0; idx < n_levels; ++idx) {
            const std::string path = join_path(
                config.output_dir,
                "residuals_level" + std::to_string(config.level_min + idx) + ".csv");
            write_residual_csv(reports[static_cast<std::size_t>(idx)],
                               result.report.metadata, path);
        }
    }
    return result;
}

LayerRunResult run_layer(const RunConfig& config) {
    require(config.preset == "rotating-layer" || config.preset == "skew-advection",
            "layer runs are defined for the rotating-layer and skew-advection presets");
    const Experiment base = configure_experiment(config);
    const int level = config.level_min;

    std::vector<double> p_values = config.p_values;
    if (p_values.empty()) p_values.push_back(base.stabilizer.p);

    const Triangulation tri = Triangulation::build(base.mesh_kind, level);

    LayerRunResult result;
    std::vector<std::pair<double, DmpReport>> dmp_rows;
    const std::string metadata = config.metadata_line("layer") + " level=" + std::to_string(level);

    for (double p : p_values) {
        Experiment exp = base;
        exp.stabilizer.p = p;
        FixedPointResult res = fixed_point_solve(tri, exp.problem, exp.stabilizer, exp.solver);

        LayerRunResult::Variant variant;
        variant.p = p;
        variant.converged = res.report.converged;
        variant.iterations = res.report.iterations;
        variant.dmp = dmp_check(res.u, tri.mesh, exp.problem, exp.expected_bounds);
        for (int i = 0; i < res.u.size(); ++i)
            if (res.u[i] > 0.1 && res.u[i] < 0.9) ++variant.layer_nodes;

        std::ostringstream tag;
        tag << "p" << p;
        variant.field_path = join_path(config.output_dir, "field_" + tag.str() + ".txt");
        variant.vtk_path = join_path(config.output_dir, "field_" + tag.str() + ".vtk");
        write_field_triples(tri.mesh, res.u, metadata + " p=" + fmt(p), variant.field_path);
        write_legacy_vtk(tri.mesh, res.u, base.name + " " + tag.str(), variant.vtk_path);
        if (config.write_residual_log) {
            write_residual_csv(res.report, metadata + " p=" + fmt(p),
                               join_path(config.output_dir, "residuals_" + tag.str() + ".csv"));
        }

        result.all_converged = result.all_converged && variant.converged;
        dmp_rows.emplace_back(p, variant.dmp);
        result.variants.push_back(std::move(variant));
    }

    result.dmp_path = join_path(config.output_dir, "dmp_report.csv");
    write_dmp_report(dmp_rows, metadata, result.dmp_path);
    return result;
}

AfcCompareResult run_afc_compare(const RunConfig& config) {
    const Experiment exp = configure_experiment(config);
    const int level = config.level_min;
    const Triangulation tri = Triangulation::build(exp.mesh_kind, level);

    const FixedPointResult res = fixed_point_solve(tri, exp.problem, exp.stabilizer, exp.solver);
    const SparseMatrix A = assemble_galerkin(tri.mesh, exp.problem);
    const DiscreteField load = assemble_load(tri.mesh, exp.problem);
    const auto mask = dirichlet_node_mask(tri.mesh, exp.problem);

    const EdgeCoefficients coeffs = edge_coefficients(res.u, tri, exp.stabilizer);
    const SparseMatrix D = build_diffusion_matrix(A);
    const LimiterSet limiters =
        limiters_from_stabilizer(tri.edges, coeffs, D, exp.stabilizer, mask);

    AfcCompareResult result;
    result.converged = res.report.converged;
    result.dirichlet_edges = limiters.num_dirichlet_edges;
    result.infeasible_edges = static_cast<int>(limiters.infeasible_edges.size());
    result.feasible_edges =
        tri.edges.num_interior() - result.infeasible_edges - result.dirichlet_edges;

    // Per-edge coefficient of (u_i - u_j)(v_i - v_j): gamma0 h_E alpha_E for the
    // edge-diffusion route, (1 - alpha_ij)|d_ij| for the limiter route.
    std::vector<Eigen::Triplet<double>> stab_trip, afc_trip;
    for (int e = 0; e < tri.edges.num_interior(); ++e) {
        const Edge& edge = tri.edges.interior[static_cast<std::size_t>(e)];
        const bool dirichlet_edge = mask[static_cast<std::size_t>(edge.a)] &&
                                    mask[static_cast<std::size_t>(edge.b)];
        const double k_stab = exp.stabilizer.gamma0 * edge.length * coeffs.alpha[e];
        const double k_afc =
            (1.0 - limiters.alpha_ij[static_cast<std::size_t>(e)]) *
            std::abs(D.coeff(edge.a, edge.b));
        if (limiters.feasible[static_cast<std::size_t>(e)] && !dirichlet_edge) {
            result.max_edge_discrepancy =
                std::max(result.max_edge_discrepancy, std::abs(k_stab - k_afc));
        }
        if (!limiters.feasible[static_cast<std::size_t>(e)]) continue;  // census'd above
        for (auto [k, trip] : {std::pair{k_stab, &stab_trip}, std::pair{k_afc, &afc_trip}}) {
            trip->emplace_back(edge.a, edge.a, k);
            trip->emplace_back(edge.b, edge.b, k);
            trip->emplace_back(edge.a, edge.b, -k);
            trip->emplace_back(edge.b, edge.a, -k);
        }
    }
    const int n = tri.mesh.num_nodes();
    SparseMatrix D_stab(n, n), D_afc(n, n);
    D_stab.setFromTriplets(stab_trip.begin(), stab_trip.end());
    D_afc.setFromTriplets(afc_trip.begin(), afc_trip.end());
    const DiscreteField r1 = A * res.u + D_stab * res.u - load;
    const DiscreteField r2 = A * res.u + D_afc * res.u - load;
    for (int i = 0; i < n; ++i) {
        if (mask[static_cast<std::size_t>(i)]) continue;
        result.residual_discrepancy =
            std::max(result.residual_discrepancy, std::abs(r1[i] - r2[i]));
    }

    result.csv_path = join_path(config.output_dir, "afc_compare.csv");
    std::ofstream out = open_out(result.csv_path);
    out << config.metadata_line("afc-compare") << " level=" << level
        << " feasible=" << result.feasible_edges
        << " infeasible=" << result.infeasible_edges
        << " dirichlet_edges=" << result.dirichlet_edges << "\n";
    write_limiter_csv(tri.edges, coeffs, D, limiters, out);
    return result;
}

MeshAuditResult run_mesh_audit(MeshKind kind, int level) {
    const Triangulation tri = Triangulation::build(kind, level);
    MeshAuditResult result;
    result.nodes = tri.mesh.num_nodes();
    result.triangles = tri.mesh.num_triangles();
    result.interior_edges = tri.edges.num_interior();
    result.boundary_edges = static_cast<int>(tri.edges.boundary.size());
    result.symmetry = is_symmetric(tri.mesh, tri.stencils);
    result.xu_zikatanov = check_xu_zikatanov(tri.mesh, tri.edges);
    return result;
}

LipschitzRunResult run_measure_lipschitz(MeshKind kind, int level_min, int level_max,
                                         double gamma0, double p, int samples,
                                         std::uint64_t seed) {
    require(level_min >= 1 && level_max >= level_min, "bad level range");
    StabilizerParams params;
    params.gamma0 = gamma0;
    params.p = p;

    LipschitzRunResult result;
    for (int level = level_min; level <= level_max; ++level) {
        const Triangulation tri = Triangulation::build(kind, level);
        result.levels.push_back(level);
        result.constants.push_back(measure_lipschitz(tri, params, samples, seed));
    }
    const auto [lo, hi] = std::minmax_element(result.constants.begin(), result.constants.end());
    result.max_ratio = (*lo > 0.0) ? *hi / *lo : std::numeric_limits<double>::infinity();
    return result;
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path) {
    std::ofstream out = open_out(path);
    out << report.metadata << "\n";
    out << "level,l2,ord,h1,ord,hnorm,ord,converged\n";
    const auto l2o = report.l2_orders();
    const auto h1o = report.h1_orders();
    const auto hno = report.hnorm_orders();
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const auto& row = report.rows[r];
        out << row.level << "," << fmt(row.errors.l2) << "," << order_field(l2o[r]) << ","
            << fmt(row.errors.h1_semi) << "," << order_field(h1o[r]) << ","
            << fmt(row.errors.h_norm) << "," << order_field(hno[r]) << ","
            << (row.converged ? 1 : 0) << "\n";
    }
}

void write_convergence_dat(const ConvergenceReport& report, const std::string& path) {
    std::ofstream out = open_out(path);
    out << report.metadata << "\n";
    out << "# h l2 h1 hnorm\n";
    for (const auto& row : report.rows) {
        out << fmt(std::ldexp(1.0, -row.level)) << " " << fmt(row.errors.l2) << " "
            << fmt(row.errors.h1_semi) << " " << fmt(row.errors.h_norm) << "\n";
    }
}

void write_field_triples(const Mesh& mesh, const DiscreteField& u, const std::string& metadata,
                         const std::string& path) {
    std::ofstream out = open_out(path);
    out << metadata << "\n";
    out.precision(12);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
        const auto& x = mesh.nodes[static_cast<std::size_t>(i)];
        out << x.x() << " " << x.y() << " " << u[i] << "\n";
    }
}

void write_legacy_vtk(const Mesh& mesh, const DiscreteField& u, const std::string& title,
                      const std::string& path) {
    std::ofstream out = open_out(path);
    out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out.precision(12);
    out << "POINTS " << mesh.num_nodes() << " double\n";
    for (const auto& x : mesh.nodes) out << x.x() << " " << x.y() << " 0\n";
    out << "CELLS " << mesh.num_triangles() << " " << 4 * mesh.num_triangles() << "\n";
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << mesh.num_triangles() << "\n";
    for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";
    out << "POINT_DATA " << mesh.num_nodes() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < mesh.num_nodes(); ++i) out << u[i] << "\n";
}

void write_dmp_report(const std::vector<std::pair<double, DmpReport>>& per_p,
                      const std::string& metadata, const std::string& path) {
    std::ofstream out = open_out(path);
    out << metadata << "\n";
    out << "p,undershoots,overshoots,boundary_min,boundary_max,global_min,global_max,"
           "within_expected\n";
    for (const auto& [p, dmp] : per_p) {
        out << fmt(p) << "," << dmp.undershoots << "," << dmp.overshoots << ","
            << fmt(dmp.boundary_min) << "," << fmt(dmp.boundary_max) << ","
            << fmt(dmp.global_min) << "," << fmt(dmp.global_max) << ","
            << (dmp.within_expected ? 1 : 0) << "\n";
    }
}

void write_residual_csv(const SolveReport& report, const std::string& metadata,
                        const std::string& path) {
    std::ofstream out = open_out(path);
    out << metadata << "\n";
    out << "iteration,residual\n";
    for (std::size_t k = 0; k < report.residual_history.size(); ++k)
        out << k << "," << fmt(report.residual_history[k]) << "\n";
}

int threads_from_env() {
    const char* env = std::getenv("EDGEDIFF_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    if (n < 1) throw std::invalid_argument("EDGEDIFF_THREADS must be a positive integer");
    return n;
}

}  // namespace edgediff
