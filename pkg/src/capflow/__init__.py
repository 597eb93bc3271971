"""capflow: a deterministic engine, service, and CLI for running a
capstone semester: intake, conformity review, demand balancing, ranked
ballots, heuristic group formation with manual what-if reassignment,
advisor assignment, and end-of-semester survey aggregation.
"""

from .allocator import (
    Allocation,
    ConflictFlag,
    Instance,
    MoveRecord,
    MovePreview,
    ObjectiveBreakdown,
    allocate,
    apply_move,
    detect_conflicts,
    finalize,
    initial_assignment,
    objective,
    redistribute,
    what_if_move,
)
from .model import (
    INTEREST_AREAS,
    Organization,
    Program,
    SemesterConfig,
    Student,
    WeightSet,
    validate_config,
)
from .oracle import OracleLimits, exact_allocate
from .state import Semester
from .workflow import Phase

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ConflictFlag",
    "Instance",
    "INTEREST_AREAS",
    "MoveRecord",
    "MovePreview",
    "ObjectiveBreakdown",
    "OracleLimits",
    "Organization",
    "Phase",
    "Program",
    "Semester",
    "SemesterConfig",
    "Student",
    "WeightSet",
    "allocate",
    "apply_move",
    "detect_conflicts",
    "exact_allocate",
    "finalize",
    "initial_assignment",
    "objective",
    "redistribute",
    "validate_config",
    "what_if_move",
    "__version__",
]
