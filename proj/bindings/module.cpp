// Python bindings for the main operations: mesh construction and audits, the
// stabilized solver, error norms, DMP checks and the flux-limiter bridge.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edgediff/afc.hpp"
#include "edgediff/analysis.hpp"
#include "edgediff/presets.hpp"
#include "edgediff/runner.hpp"
#include "edgediff/solver.hpp"

namespace py = pybind11;
using namespace edgediff;

namespace {

Eigen::MatrixXd node_array(const Mesh& mesh) {
    Eigen::MatrixXd out(mesh.num_nodes(), 2);
    for (int i = 0; i < mesh.num_nodes(); ++i) out.row(i) = mesh.nodes[i].transpose();
    return out;
}

Eigen::MatrixXi triangle_array(const Mesh& mesh) {
    Eigen::MatrixXi out(mesh.num_triangles(), 3);
    for (int t = 0; t < mesh.num_triangles(); ++t)
        for (int v = 0; v < 3; ++v) out(t, v) = mesh.triangles[t][v];
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Edge-based nonlinear diffusion stabilization for P1 finite elements";

    py::class_<Mesh>(m, "Mesh")
        .def_property_readonly("num_nodes", &Mesh::num_nodes)
        .def_property_readonly("num_triangles", &Mesh::num_triangles)
        .def_readonly("level", &Mesh::level)
        .def_property_readonly("kind", [](const Mesh& mesh) { return to_string(mesh.kind); })
        .def("nodes", &node_array, "node coordinates, shape (N, 2)")
        .def("triangles", &triangle_array, "triangle node indices, shape (T, 3)")
        .def("boundary_mask",
             [](const Mesh& mesh) {
                 std::vector<bool> mask(mesh.on_boundary.begin(), mesh.on_boundary.end());
                 return mask;
             })
        .def("area", &Mesh::triangle_area, py::arg("triangle"));

    py::class_<Triangulation>(m, "Triangulation")
        .def_readonly("mesh", &Triangulation::mesh)
        .def_property_readonly("num_interior_edges",
                               [](const Triangulation& tri) {
                                   return tri.edges.num_interior();
                               })
        .def_property_readonly("num_boundary_edges", [](const Triangulation& tri) {
            return static_cast<int>(tri.edges.boundary.size());
        });

    m.def(
        "build_triangulation",
        [](const std::string& kind, int level) {
            return Triangulation::build(mesh_kind_from_string(kind), level);
        },
        py::arg("kind"), py::arg("level"),
        "criss-cross | union-jack | three-directional | non-symmetric (or a|b|c|d)");

    m.def(
        "is_symmetric",
        [](const Triangulation& tri) {
            const SymmetryReport report = is_symmetric(tri.mesh, tri.stencils);
            return py::make_tuple(report.symmetric, report.violating_nodes);
        },
        py::arg("tri"), "returns (symmetric, violating node indices)");

    m.def(
        "check_xu_zikatanov",
        [](const Triangulation& tri) {
            const XuZikatanovReport report = check_xu_zikatanov(tri.mesh, tri.edges);
            return py::make_tuple(report.satisfied, report.edge_weight,
                                  report.violating_edges);
        },
        py::arg("tri"), "returns (satisfied, per-edge cotangent sums, violating edges)");

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<>())
        .def_readwrite("epsilon", &ProblemSpec::epsilon)
        .def_readwrite("sigma", &ProblemSpec::sigma)
        .def_property(
            "velocity", nullptr,
            [](ProblemSpec& spec, VectorFn fn) { spec.velocity = std::move(fn); })
        .def_property(
            "source", nullptr,
            [](ProblemSpec& spec, ScalarFn fn) { spec.source = std::move(fn); })
        .def_property(
            "dirichlet_data", nullptr,
            [](ProblemSpec& spec, ScalarFn fn) { spec.dirichlet_data = std::move(fn); })
        .def("set_boundary_layout",
             [](ProblemSpec& spec, const std::vector<std::string>& sides) {
                 if (sides.size() != 4)
                     throw std::invalid_argument(
                         "boundary layout needs 4 entries (bottom, right, top, left)");
                 for (int s = 0; s < 4; ++s) {
                     if (sides[s] == "dirichlet")
                         spec.boundary_layout[s] = BoundaryCondition::Dirichlet;
                     else if (sides[s] == "neumann")
                         spec.boundary_layout[s] = BoundaryCondition::NeumannHomogeneous;
                     else
                         throw std::invalid_argument("unknown boundary condition: " + sides[s]);
                 }
             });

    py::class_<StabilizerParams>(m, "StabilizerParams")
        .def(py::init<>())
        .def_readwrite("gamma0", &StabilizerParams::gamma0)
        .def_readwrite("p", &StabilizerParams::p)
        .def_readwrite("boundary_xi", &StabilizerParams::boundary_xi);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("omega", &SolverConfig::omega)
        .def_readwrite("residual_tol", &SolverConfig::residual_tol)
        .def_readwrite("max_iters", &SolverConfig::max_iters);

    py::class_<SolveReport>(m, "SolveReport")
        .def_readonly("iterations", &SolveReport::iterations)
        .def_readonly("final_residual", &SolveReport::final_residual)
        .def_readonly("residual_history", &SolveReport::residual_history)
        .def_readonly("converged", &SolveReport::converged);

    py::class_<Experiment>(m, "Experiment")
        .def_readonly("name", &Experiment::name)
        .def_readwrite("problem", &Experiment::problem)
        .def_readwrite("stabilizer", &Experiment::stabilizer)
        .def_readwrite("solver", &Experiment::solver)
        .def_property_readonly(
            "mesh_kind", [](const Experiment& exp) { return to_string(exp.mesh_kind); });

    m.def("preset", &preset_by_name, py::arg("name"),
          "smooth-sine | rotating-layer | skew-advection");

    m.def(
        "fixed_point_solve",
        [](const Triangulation& tri, const ProblemSpec& spec, const StabilizerParams& params,
           const SolverConfig& config, py::object initial) {
            FixedPointResult result;
            if (initial.is_none()) {
                result = fixed_point_solve(tri, spec, params, config);
            } else {
                const DiscreteField start = initial.cast<DiscreteField>();
                result = fixed_point_solve(tri, spec, params, config, &start);
            }
            return py::make_tuple(result.u, result.report);
        },
        py::arg("tri"), py::arg("problem"), py::arg("stabilizer"),
        py::arg("solver") = SolverConfig{}, py::arg("initial") = py::none(),
        "returns (nodal values, report)");

    m.def("solve_galerkin", &solve_galerkin, py::arg("tri"), py::arg("problem"),
          py::arg("solver") = SolverConfig{});

    m.def("assemble_galerkin",
          [](const Triangulation& tri, const ProblemSpec& spec) {
              return assemble_galerkin(tri.mesh, spec);
          });
    m.def("assemble_load", [](const Triangulation& tri, const ProblemSpec& spec) {
        return assemble_load(tri.mesh, spec);
    });
    m.def("assemble_dh", &assemble_dh, py::arg("w"), py::arg("tri"), py::arg("params"));
    m.def("dh_apply",
          py::overload_cast<const DiscreteField&, const DiscreteField&, const DiscreteField&,
                            const Triangulation&, const StabilizerParams&>(&dh_apply),
          py::arg("w"), py::arg("u"), py::arg("v"), py::arg("tri"), py::arg("params"));
    m.def(
        "compute_xi",
        [](const DiscreteField& w, const Triangulation& tri, double boundary_xi) {
            return compute_xi(w, tri.mesh, tri.stencils, boundary_xi);
        },
        py::arg("w"), py::arg("tri"), py::arg("boundary_xi") = 0.0);
    m.def(
        "edge_alpha",
        [](const DiscreteField& w, const Triangulation& tri, const StabilizerParams& params) {
            return edge_coefficients(w, tri, params).alpha;
        },
        py::arg("w"), py::arg("tri"), py::arg("params"),
        "per-interior-edge limiter input alpha_E(w)");

    m.def("build_diffusion_matrix", &build_diffusion_matrix, py::arg("A"));
    m.def("compute_fluxes", &compute_fluxes, py::arg("D"), py::arg("u"));

    py::class_<ErrorTriple>(m, "ErrorTriple")
        .def_readonly("l2", &ErrorTriple::l2)
        .def_readonly("h1_semi", &ErrorTriple::h1_semi)
        .def_readonly("h_norm", &ErrorTriple::h_norm);

    m.def(
        "error_norms",
        [](ScalarFn value, VectorFn gradient, const DiscreteField& u_h,
           const Triangulation& tri, const ProblemSpec& spec, const StabilizerParams& params) {
            ExactSolution exact{std::move(value), std::move(gradient)};
            return error_norms(exact, u_h, tri, spec, params);
        },
        py::arg("exact_value"), py::arg("exact_gradient"), py::arg("u_h"), py::arg("tri"),
        py::arg("problem"), py::arg("stabilizer"));

    m.def("eoc", &eoc, py::arg("errors"), "log2 ratios of consecutive errors (NaN first)");

    py::class_<DmpReport>(m, "DmpReport")
        .def_readonly("undershoots", &DmpReport::undershoots)
        .def_readonly("overshoots", &DmpReport::overshoots)
        .def_readonly("boundary_min", &DmpReport::boundary_min)
        .def_readonly("boundary_max", &DmpReport::boundary_max)
        .def_readonly("global_min", &DmpReport::global_min)
        .def_readonly("global_max", &DmpReport::global_max)
        .def_readonly("violating_nodes", &DmpReport::violating_nodes)
        .def_readonly("within_expected", &DmpReport::within_expected)
        .def("clean", &DmpReport::clean);

    m.def(
        "dmp_check",
        [](const DiscreteField& u_h, const Triangulation& tri, const ProblemSpec& spec,
           py::object bounds, double tol) {
            std::optional<std::pair<double, double>> expected;
            if (!bounds.is_none()) expected = bounds.cast<std::pair<double, double>>();
            return dmp_check(u_h, tri.mesh, spec, expected, tol);
        },
        py::arg("u_h"), py::arg("tri"), py::arg("problem"), py::arg("bounds") = py::none(),
        py::arg("tol") = 1e-10);

    m.def("measure_lipschitz", &measure_lipschitz, py::arg("tri"), py::arg("params"),
          py::arg("samples"), py::arg("seed"));

    m.def("exact_value",
          [](const Experiment& exp, double x, double y) {
              if (!exp.exact) throw std::invalid_argument("preset has no exact solution");
              return exp.exact->value(x, y);
          });
    m.def("expected_bounds", [](const Experiment& exp) -> py::object {
        if (!exp.expected_bounds) return py::none();
        return py::make_tuple(exp.expected_bounds->first, exp.expected_bounds->second);
    });
    m.def("experiment_error_norms",
          [](const Experiment& exp, const DiscreteField& u_h, const Triangulation& tri) {
              if (!exp.exact) throw std::invalid_argument("preset has no exact solution");
              return error_norms(*exp.exact, u_h, tri, exp.problem, exp.stabilizer);
          });
}
