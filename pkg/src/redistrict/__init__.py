"""Envy-free school redistricting between two demographic groups.

Given students with group labels and accessibility constraints, schools with
values, and an initial assignment that fixes each school's capacity, this
package computes an allocation that is 1-relaxed envy-free (per-school
headcounts move by at most one seat and neither group has a justifying
alternative allocation) and can independently certify that property for any
allocation.  All arithmetic is exact integer work on top of three network
flow kernels.
"""

from .core import (
    Allocation,
    Instance,
    deviation,
    initial_allocation,
    is_amount_preserving,
    utility,
    validate_instance,
)
from .errors import (
    InaccessibleInitialError,
    InternalError,
    InvalidGroupCountError,
    NoPathError,
    OverflowGuardError,
    ParseError,
    PreconditionViolatedError,
    RedistrictError,
    SizeMismatchError,
    TooLargeError,
    ValidationError,
)
from .flow import FlowNetwork, feasible_circulation, max_flow, min_cost_circulation
from .generate import GenConfig, generate_instance
from .solver import (
    SolvePath,
    SolveResult,
    SwapGraph,
    adjust,
    balanced_allocation,
    build_swap_graph,
    find_perfectly_swapped,
    max_utility_amount_preserving,
    solve,
)
from .verifier import (
    EnvyReport,
    PairStatus,
    PairVerdict,
    brute_force_check,
    brute_force_solve,
    check_1ref,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "Instance",
    "validate_instance",
    "initial_allocation",
    "utility",
    "deviation",
    "is_amount_preserving",
    "FlowNetwork",
    "max_flow",
    "feasible_circulation",
    "min_cost_circulation",
    "SolvePath",
    "SolveResult",
    "SwapGraph",
    "build_swap_graph",
    "max_utility_amount_preserving",
    "find_perfectly_swapped",
    "balanced_allocation",
    "adjust",
    "solve",
    "EnvyReport",
    "PairStatus",
    "PairVerdict",
    "check_1ref",
    "brute_force_check",
    "brute_force_solve",
    "GenConfig",
    "generate_instance",
    "RedistrictError",
    "ValidationError",
    "InvalidGroupCountError",
    "InaccessibleInitialError",
    "OverflowGuardError",
    "SizeMismatchError",
    "PreconditionViolatedError",
    "NoPathError",
    "InternalError",
    "TooLargeError",
    "ParseError",
]
