"""
Canned experiment configs reproducing the acceptance runs.

Each recipe is a plain config document, so `run --recipe NAME` and a TOML
file with the same content produce the same report.
"""
import math
from typing import Callable, Dict

from app.errors import InputError
from app.experiment import parse_config
from app.schemas import ExperimentConfig

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def _random(dim: int, count: int, seed: int) -> dict:
    return {"family": "random", "dim": dim, "count": count, "seed": seed}


RECIPES: Dict[str, Callable[[], dict]] = {
    "random-ppc-1d": lambda: {
        "generator": _random(1, 100_000, 11),
        "seeds": [11, 12, 13],
        "analyses": [{"kind": "paircorr", "s": [0.5, 1.0, 2.0, 5.0]}],
    },
    "random-ppc-2d": lambda: {
        "generator": _random(2, 100_000, 21),
        "seeds": [21, 22, 23],
        "analyses": [{"kind": "paircorr", "s": [0.5, 1.0, 1.5], "norm": "l2"}],
    },
    "certificate-1d": lambda: {
        "generator": _random(1, 10_000, 31),
        "seeds": [31, 32, 33, 34, 35],
        "analyses": [{"kind": "certify", "t": [1.0, 2.0, 4.0]}],
    },
    "kronecker-control": lambda: {
        "generator": {"family": "kronecker", "dim": 1, "count": 5000, "alpha": [GOLDEN_RATIO]},
        "analyses": [
            {"kind": "paircorr", "s": [0.3]},
            {"kind": "spectrum", "lmax": 4200, "t": 1.0},
        ],
    },
    "smoothed-limit": lambda: {
        "generator": _random(1, 50_000, 41),
        "seeds": [41, 42, 43],
        "analyses": [{"kind": "smoothed", "delta": [20.0], "scaled": True}],
    },
    # same seeds at both sizes, so the smaller set is a prefix of the larger one
    "discrepancy-scale-1k": lambda: {
        "generator": _random(1, 1_000, 51),
        "seeds": [51, 52, 53],
        "analyses": [{"kind": "discrepancy", "resolution": 1000}],
    },
    "discrepancy-scale-10k": lambda: {
        "generator": _random(1, 10_000, 51),
        "seeds": [51, 52, 53],
        "analyses": [{"kind": "discrepancy", "resolution": 1000}],
    },
    "weak-correlation": lambda: {
        "generator": _random(1, 10_000, 61),
        "seeds": [61, 62, 63],
        "analyses": [
            {"kind": "paircorr", "s": [1.0], "alpha": 0.5},
            {"kind": "certify", "t": [1.0], "alpha": 0.5},
        ],
    },
    "parseval-oracle": lambda: {
        "generator": _random(1, 300, 71),
        "seeds": [71, 72, 73],
        "analyses": [{"kind": "parseval", "delta": d} for d in (0.02, 0.05, 0.1)],
    },
}


def recipe_names() -> list:
    return sorted(RECIPES)


def get_recipe(name: str) -> ExperimentConfig:
    """Validated config for recipe `name`."""
    try:
        builder = RECIPES[name]
    except KeyError:
        raise InputError(f"unknown recipe {name!r}; available: {', '.join(recipe_names())}") from None
    return parse_config(builder(), source=f"recipe:{name}")
