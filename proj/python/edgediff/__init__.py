"""Edge-based nonlinear diffusion stabilization for P1 finite elements.

The compiled extension carries the actual implementation; this package just
re-exports it.
"""

from edgediff._core import (  # noqa: F401
    DmpReport,
    ErrorTriple,
    Experiment,
    Mesh,
    ProblemSpec,
    SolveReport,
    SolverConfig,
    StabilizerParams,
    Triangulation,
    assemble_dh,
    assemble_galerkin,
    assemble_load,
    build_diffusion_matrix,
    build_triangulation,
    check_xu_zikatanov,
    compute_fluxes,
    compute_xi,
    dh_apply,
    dmp_check,
    edge_alpha,
    eoc,
    error_norms,
    exact_value,
    expected_bounds,
    experiment_error_norms,
    fixed_point_solve,
    is_symmetric,
    measure_lipschitz,
    preset,
    solve_galerkin,
)

__version__ = "0.1.0"
