"""Seeded game families for benchmarks and the test sweep.

Generation is bitwise deterministic: a given (family, n, seed, extra)
always yields the same matrices, via numpy's default_rng.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, UsageError
from .game import BimatrixGame

FAMILIES = (
    "uniform-random",
    "win-lose",
    "constant-sum",
    "planted-pure-ne",
    "from-file",
)


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int = 0
    seed: int = 0
    extra: dict = field(default_factory=dict)


def generate(spec):
    """Build the game an InstanceSpec describes.

    uniform-random: independent entries uniform on [0, 1).
    win-lose: independent {0, 1} entries, ones with probability p
      (extra key "p", default 0.5).
    constant-sum: uniform R with C = 1 - R.
    planted-pure-ne: uniform matrices with one uniformly chosen cell
      (i, j) set to R[i,j] = C[i,j] = 1, a strict pure equilibrium since
      every other entry is below 1.
    from-file: loads extra["path"] via anash.gameio.
    """
    if spec.family == "from-file":
        from .gameio import load_game

        path = spec.extra.get("path")
        if not path:
            raise UsageError("from-file instance needs extra['path']")
        return load_game(path)
    if spec.family not in FAMILIES:
        raise UsageError(
            f"unknown family {spec.family!r}; choose from "
            + ", ".join(FAMILIES)
        )
    if spec.n < 2:
        raise ParameterError(f"family {spec.family} needs n >= 2, got {spec.n}")
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    if spec.family == "uniform-random":
        R = rng.random((n, n))
        C = rng.random((n, n))
    elif spec.family == "win-lose":
        p = float(spec.extra.get("p", 0.5))
        if not (0.0 <= p <= 1.0):
            raise ParameterError(f"win-lose probability {p} outside [0, 1]")
        R = (rng.random((n, n)) < p).astype(np.float64)
        C = (rng.random((n, n)) < p).astype(np.float64)
    elif spec.family == "constant-sum":
        R = rng.random((n, n))
        C = 1.0 - R
    else:  # planted-pure-ne
        R = rng.random((n, n))
        C = rng.random((n, n))
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        R[i, j] = 1.0
        C[i, j] = 1.0
    return BimatrixGame(R, C)
