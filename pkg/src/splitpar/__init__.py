"""Time-splitting solvers for parabolic problems on the unit square.

Finite-difference discretization of u_t - div(a grad u) + c u = f with
homogeneous Dirichlet data, implicit theta-scheme time stepping, and
operator splittings of two kinds: directionwise (alternating-direction)
and overlapping-domain-decomposition via a sine partition of unity.  The
factored m-stage scheme and its corrected variant, which cancels the
leading splitting error by a forcing shift, are the centerpiece; preset
experiments measure their accuracy against manufactured solutions.
"""

from .decomposition import (
    ComponentMap,
    Decomposition,
    PartitionOfUnity,
    component_indices,
    make_partition_of_unity,
    make_strip_decomposition,
)
from .experiments import (
    CellResult,
    ExperimentConfig,
    ExperimentReport,
    error_norm,
    fitted_rate,
    format_table,
    plot_errors,
    rate_table,
    read_csv,
    run_experiment,
    table_config,
    write_csv,
)
from .linsolve import Factorization, LinearSolver, SolverError, factor, solve
from .mesh import Grid, apply_operator, assemble_operator
from .operators import (
    SplitOperators,
    UnsupportedSplittingError,
    bh_apply,
    build_adi_split,
    build_dd_split,
    build_unsplit,
)
from .problems import (
    COEFFICIENT_NAMES,
    DiffusionTensor,
    ManufacturedProblem,
    make_coefficient,
    make_problem,
    sample_on_grid,
)
from .steppers import (
    METHODS,
    RunReport,
    StepperConfig,
    dg_step,
    dk_step,
    douglas_rachford_step,
    douglas_step,
    run,
    theta_step,
)

__version__ = "0.1.0"
