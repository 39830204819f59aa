"""Privacy-preserving distributed linear inference over straggling edge nodes.

Secret-shared user data, cyclic assignment of matrix partitions and shares,
a normalized-latency schedule model with beamformed download, and an
exhaustive Monte Carlo parameter search.
"""

from .assignment import AssignmentPlan, CyclicGenerator, build_plan, default_generator
from .field import FieldElement, PrimeField
from .latency import ScheduleTrace, SetupTimes, StopRule, SystemParams, simulate
from .optimizer import OptimizationResult, optimize
from .sss import SssParams, make_share_matrices, reconstruct

__all__ = [
    "AssignmentPlan",
    "CyclicGenerator",
    "FieldElement",
    "OptimizationResult",
    "PrimeField",
    "ScheduleTrace",
    "SetupTimes",
    "SssParams",
    "StopRule",
    "SystemParams",
    "build_plan",
    "default_generator",
    "make_share_matrices",
    "optimize",
    "reconstruct",
    "simulate",
]

__version__ = "0.1.0"
