"""Coupled steady-state reaction-diffusion systems on (0,1) with
parameter-dependent Robin boundary rows: discretization, sub/supersolution
brackets, monotone iteration, and an independent shooting oracle."""

from .grid import (
    EigenResult,
    Grid1D,
    RobinOperator,
    ScalarField,
    assemble_robin_operator,
    coupled_eigenvalue,
    existence_threshold,
    principal_eigenpair,
    solve_poisson,
    spectral_shift,
    unit_source_solution,
)
from .monotone import IterationTrace, SolutionRecord, iterate_down, iterate_up, residual
from .pairs import (
    OrderInterval,
    PairField,
    VerificationReport,
    bounded_supersolution,
    dirichlet_large_subsolution,
    eigen_subsolution,
    eigenshape_supersolution,
    scaled_profile_supersolution,
    small_amplitude_supersolution,
    strict_subsolution_lift,
    sublinear_pair_supersolution,
    unbounded_pair_supersolution,
    verify_pair,
)
from .reactions import (
    HypothesisReport,
    Nonlinearity,
    ReactionQuad,
    example_family,
    inscribed_ball_constant,
    max_ratio,
    min_ratio,
    multiplicity_window,
    uniform_concavity_bound,
    validate_f,
    validate_h,
)
from .shooting import (
    Enumeration,
    RootCandidate,
    count_positive_solutions,
    enumerate_solutions,
    integrate,
    reintegrate,
)

__version__ = "0.1.0"
