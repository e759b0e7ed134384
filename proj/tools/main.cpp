// Command line driver: convergence studies, layer experiments, the flux
// limiter comparison, mesh audits and the Lipschitz measurement.
//
// Exit codes: 0 success, 2 a solve did not converge, 3 invalid configuration.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgediff/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNonConverged = 2;
constexpr int kExitBadConfig = 3;

struct CliOptions {
    edgediff::RunConfig run;
    std::string mesh_kind;
    int level = 0;  // single-level commands
    std::string levels;
    int samples = 1000;
    std::uint64_t seed = 42;
    std::string mesh_out;
    std::string config_path;
};

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

// Plain-text key=value config; keys mirror the long flags. Values apply only
// where the corresponding flag was not given, so flags always win.
void apply_config_file(const CLI::App& cmd, CliOptions& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + opts.config_path);

    const auto given = [&cmd](const std::string& flag) {
        const auto* opt = cmd.get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (key == "preset") {
                if (!given("--preset")) opts.run.preset = value;
            } else if (key == "mesh") {
                if (!given("--mesh")) opts.mesh_kind = value;
            } else if (key == "levels") {
                if (!given("--levels")) opts.levels = value;
            } else if (key == "level") {
                if (!given("--level")) opts.level = std::stoi(value);
            } else if (key == "epsilon") {
                if (!opts.run.epsilon) opts.run.epsilon = std::stod(value);
            } else if (key == "sigma") {
                if (!opts.run.sigma) opts.run.sigma = std::stod(value);
            } else if (key == "bx") {
                if (!opts.run.bx) opts.run.bx = std::stod(value);
            } else if (key == "by") {
                if (!opts.run.by) opts.run.by = std::stod(value);
            } else if (key == "gamma0") {
                if (!opts.run.gamma0) opts.run.gamma0 = std::stod(value);
            } else if (key == "p") {
                if (!opts.run.p) opts.run.p = std::stod(value);
            } else if (key == "omega") {
                if (!opts.run.omega) opts.run.omega = std::stod(value);
            } else if (key == "tol") {
                if (!opts.run.residual_tol) opts.run.residual_tol = std::stod(value);
            } else if (key == "max-iters" || key == "max_iters") {
                if (!opts.run.max_iters) opts.run.max_iters = std::stoi(value);
            } else if (key == "output") {
                if (!given("--output")) opts.run.output_dir = value;
            } else if (key == "p-values" || key == "p_values") {
                if (!given("--p-values")) {
                    opts.run.p_values.clear();
                    std::istringstream items(value);
                    std::string item;
                    while (std::getline(items, item, ','))
                        opts.run.p_values.push_back(std::stod(trim(item)));
                }
            } else if (key == "residual-log" || key == "residual_log") {
                if (!given("--residual-log"))
                    opts.run.write_residual_log = (value == "1" || value == "true");
            } else if (key == "samples") {
                if (!given("--samples")) opts.samples = std::stoi(value);
            } else if (key == "seed") {
                if (!given("--seed")) opts.seed = std::stoull(value);
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": bad value for '" + key + "'");
        }
    }
}

void parse_levels(const std::string& text, edgediff::RunConfig& run) {
    if (text.empty()) return;
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            run.level_min = run.level_max = std::stoi(text);
        } else {
            run.level_min = std::stoi(text.substr(0, colon));
            run.level_max = std::stoi(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad level range: " + text);
    }
}

void add_common_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--preset", opts.run.preset,
                    "smooth-sine | rotating-layer | skew-advection | custom");
    cmd->add_option("--mesh", opts.mesh_kind,
                    "criss-cross|a, union-jack|b, three-directional|c, non-symmetric|d");
    cmd->add_option_function<double>(
        "--epsilon", [&](double v) { opts.run.epsilon = v; }, "diffusion coefficient");
    cmd->add_option_function<double>(
        "--sigma", [&](double v) { opts.run.sigma = v; }, "reaction coefficient");
    cmd->add_option_function<double>(
        "--bx", [&](double v) { opts.run.bx = v; }, "constant velocity x (custom preset)");
    cmd->add_option_function<double>(
        "--by", [&](double v) { opts.run.by = v; }, "constant velocity y (custom preset)");
    cmd->add_option_function<double>(
        "--gamma0", [&](double v) { opts.run.gamma0 = v; }, "stabilization strength");
    cmd->add_option_function<double>(
        "--p", [&](double v) { opts.run.p = v; }, "indicator exponent");
    cmd->add_option_function<double>(
        "--omega", [&](double v) { opts.run.omega = v; }, "fixed-point damping");
    cmd->add_option_function<double>(
        "--tol", [&](double v) { opts.run.residual_tol = v; }, "residual stopping tolerance");
    cmd->add_option_function<int>(
        "--max-iters", [&](int v) { opts.run.max_iters = v; }, "fixed-point iteration cap");
    cmd->add_option("--output", opts.run.output_dir, "output directory");
    cmd->add_flag("--residual-log", opts.run.write_residual_log,
                  "write per-iteration residual CSVs");
    cmd->add_option("--config", opts.config_path,
                    "plain-text key=value config file (flags win)");
}

void finalize(const CLI::App& cmd, CliOptions& opts) {
    if (!opts.config_path.empty()) apply_config_file(cmd, opts);
    if (!opts.mesh_kind.empty())
        opts.run.mesh_kind = edgediff::mesh_kind_from_string(opts.mesh_kind);
    parse_levels(opts.levels, opts.run);
    if (opts.level > 0) opts.run.level_min = opts.run.level_max = opts.level;
    opts.run.threads = edgediff::threads_from_env();
}

int cmd_convergence(const CLI::App& cmd, CliOptions& opts) {
    finalize(cmd, opts);
    const auto result = edgediff::run_convergence(opts.run);
    const auto l2o = result.report.l2_orders();
    const auto h1o = result.report.h1_orders();
    const auto hno = result.report.hnorm_orders();
    std::cout << result.report.metadata << "\n";
    std::cout << "level        l2    ord        h1    ord     hnorm    ord  converged\n";
    for (std::size_t r = 0; r < result.report.rows.size(); ++r) {
        const auto& row = result.report.rows[r];
        std::printf("%5d  %.5e %5.2f  %.5e %5.2f  %.5e %5.2f  %d\n", row.level, row.errors.l2,
                    l2o[r], row.errors.h1_semi, h1o[r], row.errors.h_norm, hno[r],
                    row.converged ? 1 : 0);
    }
    std::cout << "wrote " << result.csv_path << " and " << result.dat_path << "\n";
    return result.all_converged ? kExitOk : kExitNonConverged;
}

int cmd_layer(const CLI::App& cmd, CliOptions& opts) {
    finalize(cmd, opts);
    const auto result = edgediff::run_layer(opts.run);
    for (const auto& v : result.variants) {
        std::cout << "p=" << v.p << ": converged=" << (v.converged ? 1 : 0)
                  << " iterations=" << v.iterations << " undershoots=" << v.dmp.undershoots
                  << " overshoots=" << v.dmp.overshoots << " range=[" << v.dmp.global_min
                  << ", " << v.dmp.global_max << "]"
                  << " layer_nodes=" << v.layer_nodes << "\n";
        std::cout << "  field: " << v.field_path << "  vtk: " << v.vtk_path << "\n";
    }
    std::cout << "dmp report: " << result.dmp_path << "\n";
    return result.all_converged ? kExitOk : kExitNonConverged;
}

int cmd_afc_compare(const CLI::App& cmd, CliOptions& opts) {
    finalize(cmd, opts);
    const auto result = edgediff::run_afc_compare(opts.run);
    std::cout << "feasible edges:        " << result.feasible_edges << "\n"
              << "infeasible edges:      " << result.infeasible_edges << "\n"
              << "dirichlet-pair edges:  " << result.dirichlet_edges << "\n"
              << "max edge discrepancy:  " << result.max_edge_discrepancy << "\n"
              << "residual discrepancy:  " << result.residual_discrepancy << "\n"
              << "per-edge csv:          " << result.csv_path << "\n";
    return result.converged ? kExitOk : kExitNonConverged;
}

int cmd_mesh_audit(const CLI::App& cmd, CliOptions& opts) {
    finalize(cmd, opts);
    const auto kind = opts.run.mesh_kind.value_or(edgediff::MeshKind::ThreeDirectional);
    const auto result = edgediff::run_mesh_audit(kind, opts.run.level_min);
    std::cout << "mesh " << edgediff::to_string(kind) << " level " << opts.run.level_min
              << ": " << result.nodes << " nodes, " << result.triangles << " triangles, "
              << result.interior_edges << " interior edges, " << result.boundary_edges
              << " boundary edges\n";
    std::cout << "symmetric: " << (result.symmetry.symmetric ? "yes" : "no") << " ("
              << result.symmetry.violating_nodes.size() << " violating nodes)\n";
    std::cout << "edge criterion (Delaunay): "
              << (result.xu_zikatanov.satisfied ? "satisfied" : "violated") << " ("
              << result.xu_zikatanov.violating_edges.size() << " violating edges)\n";
    if (!opts.mesh_out.empty()) {
        edgediff::write_mesh_file(edgediff::build_mesh(kind, opts.run.level_min),
                                  opts.mesh_out);
        std::cout << "wrote " << opts.mesh_out << "\n";
    }
    return kExitOk;
}

int cmd_measure_lipschitz(const CLI::App& cmd, CliOptions& opts) {
    finalize(cmd, opts);
    const auto kind = opts.run.mesh_kind.value_or(edgediff::MeshKind::ThreeDirectional);
    const auto result = edgediff::run_measure_lipschitz(
        kind, opts.run.level_min, opts.run.level_max, opts.run.gamma0.value_or(1.0),
        opts.run.p.value_or(1.0), opts.samples, opts.seed);
    for (std::size_t i = 0; i < result.levels.size(); ++i)
        std::cout << "level " << result.levels[i] << ": empirical constant "
                  << result.constants[i] << "\n";
    std::cout << "max cross-level ratio: " << result.max_ratio << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge-based nonlinear diffusion stabilization for P1 finite elements"};
    app.require_subcommand(1);

    CliOptions opts;

    auto* conv = app.add_subcommand("convergence", "error norms and orders across levels");
    add_common_options(conv, opts);
    conv->add_option("--levels", opts.levels, "level range, e.g. 3:7");

    auto* layer = app.add_subcommand("layer", "layer experiment with DMP report");
    add_common_options(layer, opts);
    layer->add_option("--level", opts.level, "refinement level");
    layer->add_option("--p-values", opts.run.p_values, "p variants to record, e.g. 1 4");

    auto* afc = app.add_subcommand("afc-compare", "flux limiter equivalence report");
    add_common_options(afc, opts);
    afc->add_option("--level", opts.level, "refinement level");

    auto* audit = app.add_subcommand("mesh-audit", "symmetry and edge-criterion diagnostics");
    audit->add_option("--mesh", opts.mesh_kind, "mesh family")->required();
    audit->add_option("--level", opts.level, "refinement level")->required();
    audit->add_option("--write-mesh", opts.mesh_out, "write the mesh file here");

    auto* lip = app.add_subcommand("measure-lipschitz", "empirical Lipschitz constant");
    lip->add_option("--mesh", opts.mesh_kind, "mesh family");
    lip->add_option("--levels", opts.levels, "level range, e.g. 3:5");
    lip->add_option_function<double>(
        "--gamma0", [&](double v) { opts.run.gamma0 = v; }, "stabilization strength");
    lip->add_option_function<double>(
        "--p", [&](double v) { opts.run.p = v; }, "indicator exponent");
    lip->add_option("--samples", opts.samples, "random triples per level");
    lip->add_option("--seed", opts.seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadConfig;
    }

    try {
        if (conv->parsed()) return cmd_convergence(*conv, opts);
        if (layer->parsed()) return cmd_layer(*layer, opts);
        if (afc->parsed()) return cmd_afc_compare(*afc, opts);
        if (audit->parsed()) return cmd_mesh_audit(*audit, opts);
        if (lip->parsed()) return cmd_measure_lipschitz(*lip, opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitBadConfig;
}
