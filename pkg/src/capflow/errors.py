"""Error hierarchy shared by the engine, CLI and HTTP service.

Every error carries a machine-readable ``code`` plus a ``details`` payload
naming the offending entities, so transport layers can map it to exactly
one status class.
"""
from __future__ import annotations

from typing import Any


class CapflowError(Exception):
    code = "error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "details": self.details}


class InvalidInput(CapflowError):
    """A value violates a field or argument invariant."""

    code = "invalid_input"


class DuplicateId(CapflowError):
    """An identifier is already registered; duplicates are rejected, not overwritten."""

    code = "duplicate_id"


class NotFound(CapflowError):
    code = "not_found"


class LifecycleError(CapflowError):
    """Operation attempted in a state the lifecycle graph does not allow."""

    code = "lifecycle"


class PhaseError(CapflowError):
    """Operation blocked by the semester phase gate."""

    code = "phase_gate"


class VersionConflict(CapflowError):
    code = "version_conflict"


class CapacityError(CapflowError):
    code = "capacity"


class OracleLimit(CapflowError):
    code = "oracle_limit"


class IntegrityError(CapflowError):
    """Snapshot failed schema or referential-integrity validation."""

    code = "integrity"


class FinalizeError(CapflowError):
    code = "finalize_preconditions"
