"""
Domain types shared by every module.

PointSet wraps a read-only (N, d) float64 array; the remaining types are
small validated parameter records.
"""
import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

UINT64_MOD = 1 << 64


class NormKind(str, Enum):
    """Distance used for pair counting."""

    EUCLIDEAN = "l2"
    SUP = "linf"


class Algorithm(str, Enum):
    """Pair enumeration strategy."""

    BRUTE = "brute"
    CELLS = "cells"


class Family(str, Enum):
    """Sequence families produced by app.generators."""

    RANDOM = "random"
    KRONECKER = "kronecker"
    QUADRATIC = "quadratic"
    GRID = "grid"
    HALTON = "halton"
    CLUSTERED = "clustered"


class Verdict(str, Enum):
    WITHIN_BOUND = "WITHIN_BOUND"
    EXCEEDS_BOUND = "EXCEEDS_BOUND"


class TorusPoint(BaseModel):
    """A point of the unit-volume torus [0,1)^d."""

    model_config = ConfigDict(frozen=True)

    coords: Tuple[float, ...] = Field(min_length=1)

    @field_validator("coords")
    @classmethod
    def _in_unit_cube(cls, coords: Tuple[float, ...]) -> Tuple[float, ...]:
        for c in coords:
            if not (0.0 <= c < 1.0):
                raise ValueError(f"coordinate {c!r} outside [0, 1)")
        return coords

    @property
    def dim(self) -> int:
        return len(self.coords)


class PointSet(BaseModel):
    """
    Ordered sequence x_1..x_N on the d-torus.

    The coordinate array is copied on construction and marked read-only, so a
    PointSet can be shared freely between worker threads.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: np.ndarray
    label: str = ""

    @field_validator("points", mode="before")
    @classmethod
    def _freeze(cls, value) -> np.ndarray:
        arr = np.array(value, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"points must be a non-empty (N, d) array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr >= 1.0):
            raise ValueError("coordinates must lie in [0, 1)")
        arr.flags.writeable = False
        return arr

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return self.n

    def point(self, index: int) -> TorusPoint:
        return TorusPoint(coords=tuple(float(c) for c in self.points[index]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.points, other.points)

    def __hash__(self) -> int:
        return hash((self.label, self.points.shape, self.points.tobytes()))


class KernelParams(BaseModel):
    """Box kernel g (normalized indicator of a δ-ball) and its self-convolution f."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(ge=1)
    delta: float = Field(gt=0.0, lt=0.25)


def first_primes(count: int) -> List[int]:
    """First `count` primes by trial division."""
    primes: List[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


# Families that read each optional parameter
_PARAM_FAMILIES = {
    "seed": {Family.RANDOM, Family.CLUSTERED},
    "alpha": {Family.KRONECKER, Family.QUADRATIC},
    "bases": {Family.HALTON},
    "clusters": {Family.CLUSTERED},
}


class GeneratorSpec(BaseModel):
    """
    Recipe for a PointSet.

    Parameters not read by the chosen family must be absent; KRONECKER α and
    HALTON bases default to √p_i and p_i over the first d primes.
    """

    model_config = ConfigDict(frozen=True)

    family: Family
    dim: int = Field(default=1, ge=1)
    count: int = Field(ge=1)
    seed: Optional[int] = None
    alpha: Optional[List[float]] = None
    bases: Optional[List[int]] = None
    clusters: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        family = data.get("family")
        try:
            family = Family(family)
        except ValueError:
            return data
        dim = int(data.get("dim", 1) or 1)
        if family is Family.KRONECKER and data.get("alpha") is None:
            data["alpha"] = [math.sqrt(p) for p in first_primes(dim)]
        if family is Family.HALTON and data.get("bases") is None:
            data["bases"] = first_primes(dim)
        if isinstance(data.get("alpha"), (int, float)):
            data["alpha"] = [data["alpha"]]
        return data

    @model_validator(mode="after")
    def _check_family_params(self) -> "GeneratorSpec":
        for name, families in _PARAM_FAMILIES.items():
            present = getattr(self, name) is not None
            if present and self.family not in families:
                raise ValueError(f"{name} is not a parameter of family {self.family.value}")
            if not present and self.family in families:
                raise ValueError(f"family {self.family.value} requires {name}")

        if self.seed is not None and not (-(1 << 63) <= self.seed < UINT64_MOD):
            raise ValueError("seed must fit in 64 bits")
        if self.alpha is not None:
            if not all(math.isfinite(a) for a in self.alpha):
                raise ValueError("alpha must be finite")
            expected = self.dim if self.family is Family.KRONECKER else 1
            if len(self.alpha) != expected:
                raise ValueError(f"alpha needs {expected} value(s), got {len(self.alpha)}")
        if self.bases is not None:
            if len(self.bases) != self.dim:
                raise ValueError(f"bases needs {self.dim} values, got {len(self.bases)}")
            if any(b < 2 for b in self.bases):
                raise ValueError("bases must be integers >= 2")
            for i, a in enumerate(self.bases):
                for b in self.bases[i + 1:]:
                    if math.gcd(a, b) != 1:
                        raise ValueError(f"bases {a} and {b} are not coprime")
        return self

    @property
    def seed_u64(self) -> int:
        return (self.seed or 0) % UINT64_MOD

    def describe(self) -> str:
        """Provenance label stored on generated PointSets."""
        parts = [f"{self.family.value}", f"d={self.dim}", f"n={self.count}"]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        if self.alpha is not None:
            parts.append("alpha=" + ",".join(repr(a) for a in self.alpha))
        if self.bases is not None:
            parts.append("bases=" + ",".join(map(str, self.bases)))
        if self.clusters is not None:
            parts.append(f"clusters={self.clusters}")
        return " ".join(parts)
