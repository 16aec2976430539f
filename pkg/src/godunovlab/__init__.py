"""Godunov-type finite-volume solvers for the 1D ideal-gas Euler equations."""
from .bench import (
    ConvergenceTable,
    RunReport,
    TestCase,
    builtin_suite,
    convergence_study,
    error_norms,
    exact_reference,
    get_case,
    initial_field,
    run_case,
)
from .engine import (
    BoundaryKind,
    Grid1D,
    RcmState,
    RunConfig,
    RunStats,
    SolutionField,
    apply_boundary,
    compute_dt,
    conservative_step,
    rcm_step,
    run,
    van_der_corput,
)
from .errors import (
    ConfigurationError,
    DegenerateSpeeds,
    NoConvergence,
    NonPhysicalStar,
    NonPhysicalState,
    ReferenceUnavailable,
    SolverError,
    VacuumGenerated,
)
from .euler import (
    ConservedState,
    GasModel,
    PrimitiveState,
    conserved_to_primitive,
    eigenvalues,
    physical_flux,
    primitive_to_conserved,
    sound_speed,
)
from .riemann import (
    RiemannFan,
    StarEstimate,
    WaveKind,
    sample_fan,
    sample_linearised,
    solve_star_exact,
    solve_star_linearised,
    vacuum_check,
)
from .schemes import (
    FluxMethod,
    Limiter,
    MeshRatio,
    ader2_flux,
    davis_wave_speeds,
    godunov_flux,
    hll_flux,
    lax_friedrichs_flux,
    lax_wendroff_flux,
    muscl_reconstruct,
)

__version__ = "0.1.0"
