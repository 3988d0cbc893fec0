"""Exception types shared across the engine."""

from __future__ import annotations


class ErmcdaError(Exception):
    """Base class for all engine errors."""


class FrameError(ErmcdaError):
    """Invalid frame construction or an operation on incompatible frames."""


class ExpressionError(FrameError):
    """An element expression cannot be parsed or represented in this frame."""


class MatrixError(ErmcdaError):
    """A pairwise-comparison matrix violates its invariants."""


class ConvergenceError(ErmcdaError):
    """Power iteration failed to converge; carries the final residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class DistributionError(ErmcdaError):
    """A possibility distribution violates nesting or normalization."""


class MappingError(ErmcdaError):
    """An evaluation cannot be mapped onto the decision frame."""


class FusionError(ErmcdaError):
    """A combination rule was applied outside its domain."""


class FrameModeError(FusionError):
    """A rule was requested on a frame mode it does not support."""


class TotalConflictError(FusionError):
    """Dempster's rule on totally conflicting sources; carries the conflict mass."""

    def __init__(self, conflict: float):
        super().__init__(
            f"total conflict (K={conflict:.12g}); Dempster's rule is undefined"
        )
        self.conflict = conflict


class TieError(ErmcdaError):
    """A decision tie under the error-on-tie policy."""


class ScenarioError(ErmcdaError):
    """A scenario document failed validation.

    ``errors`` is a list of (path, message) pairs naming each offending entity.
    """

    def __init__(self, errors: list[tuple[str, str]]):
        lines = "; ".join(f"{path}: {msg}" for path, msg in errors)
        super().__init__(f"invalid scenario: {lines}")
        self.errors = list(errors)


class StageError(ErmcdaError):
    """A pipeline stage failed; names the stage and entity, chains the cause."""

    def __init__(self, stage: str, entity: str, cause: Exception):
        super().__init__(f"stage {stage} ({entity}): {cause}")
        self.stage = stage
        self.entity = entity
        self.__cause__ = cause
