"""
Exception hierarchy for the toolkit.

Every failure a caller can provoke with bad input is an InputError, which is
also a ValueError so plain `except ValueError` keeps working.
"""
from typing import Any, Optional


class PPCError(Exception):
    """Base class for all toolkit errors."""


class InputError(PPCError, ValueError):
    """Invalid argument, point set or parameter combination."""


class UnsupportedDimensionError(InputError):
    """Operation only available for a restricted set of dimensions."""

    def __init__(self, dim: int, supported: tuple = (1, 2, 3)):
        self.dim = dim
        self.supported = supported
        super().__init__(f"dimension {dim} not supported (supported: {', '.join(map(str, supported))})")


class PointsFileError(InputError):
    """Malformed points file."""

    def __init__(self, path: Any, reason: str):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


class NumericalError(PPCError):
    """A computed value violated an invariant that must hold exactly."""


class ExperimentError(PPCError):
    """A stage of an experiment failed; carries where and with what parameters."""

    def __init__(
        self,
        stage: str,
        message: str,
        index: Optional[int] = None,
        kind: Optional[str] = None,
        params: Optional[dict] = None,
        seed: Optional[int] = None,
    ):
        self.stage = stage
        self.index = index
        self.kind = kind
        self.params = params or {}
        self.seed = seed
        where = stage if index is None else f"{stage} #{index} ({kind})"
        if seed is not None:
            where += f" seed={seed}"
        super().__init__(f"{where}: {message}")

    def to_dict(self) -> dict:
        """Structured form used in logs."""
        return {
            "stage": self.stage,
            "index": self.index,
            "kind": self.kind,
            "params": self.params,
            "seed": self.seed,
            "message": str(self),
        }
