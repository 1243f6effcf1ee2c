"""Error types shared across the engine.

Every error carries a stable ``code`` string plus a ``details`` dict so that
callers (CLI, HTTP service) can map failures without parsing messages.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class DocumentSyntaxError(EngineError):
    """A document is not well-formed (JSON syntax or wrong field types).

    For JSON syntax errors, ``details`` includes ``line``, ``column`` and
    ``pos``; for structural problems it includes ``path``.
    """

    code = "syntax"


class ModelValidationError(EngineError):
    """A network violates a structural invariant. ``details['violations']``
    holds the offending :class:`~intervene_bn.model.Violation` records."""

    code = "invalid-model"


class DuplicateNameError(ModelValidationError):
    code = "duplicate-name"


class UnknownParentError(ModelValidationError):
    code = "unknown-parent"


class CptShapeError(ModelValidationError):
    code = "cpt-shape"


class RowSumError(ModelValidationError):
    code = "row-sum"


class CycleError(ModelValidationError):
    code = "cycle"


class UnknownVariableError(EngineError):
    code = "unknown-variable"


class UnknownStateError(EngineError):
    code = "unknown-state"


class InconsistentEvidenceError(EngineError):
    """The supplied evidence has probability zero under the model."""

    code = "inconsistent-evidence"


class EvidenceOverlapError(EngineError):
    """A variable appears both as evidence and as an intervention."""

    code = "evidence-do-overlap"


class CapacityError(EngineError):
    """An enumeration would exceed the configured cap. ``details`` reports
    ``size`` and ``cap``."""

    code = "capacity"


class SearchCancelled(EngineError):
    """A bound search was cancelled before completion."""

    code = "cancelled"
