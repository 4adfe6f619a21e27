"""Bimatrix game representation, payoffs, regrets and best responses.

Conventions used throughout the package:
  * payoff matrices R (row player) and C (column player) are n x n
    numpy arrays with entries in [0, 1];
  * a mixed strategy is a point of the simplex, stored as a length-n
    vector;
  * the row player's expected payoff is x^T R y, the column player's
    is x^T C y.

Row payoffs are always evaluated as x . (R y) and column payoffs as
(x C) . y. Keeping the association fixed makes identities such as
"the regret of w at (w, y) equals the best-response gap" hold exactly
in floating point, which several construction-phase checks rely on.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ParameterError, StructuralError

# Tolerance for simplex membership (sum-to-one and nonnegativity).
SIMPLEX_TOL = 1e-9
# Slack used when collecting best-response index sets for LP construction.
# Certification always uses the exact argmax (tol = 0).
BR_TOL = 1e-7


@dataclass(frozen=True)
class BimatrixGame:
    """An n x n bimatrix game with payoffs normalized to [0, 1]."""

    R: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=np.float64)
        C = np.asarray(self.C, dtype=np.float64)
        if R.ndim != 2 or R.shape[0] != R.shape[1]:
            raise StructuralError(f"R must be square, got shape {R.shape}")
        if C.shape != R.shape:
            raise StructuralError(
                f"C shape {C.shape} does not match R shape {R.shape}")
        if not (np.isfinite(R).all() and np.isfinite(C).all()):
            raise InputError("payoff matrices must be finite")
        if R.min() < -1e-12 or R.max() > 1 + 1e-12 \
                or C.min() < -1e-12 or C.max() > 1 + 1e-12:
            raise InputError("payoff entries must lie in [0, 1]; "
                             "use normalize_game for raw matrices")
        R = R.copy()
        C = C.copy()
        R.flags.writeable = False
        C.flags.writeable = False
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "C", C)

    @property
    def n(self):
        return self.R.shape[0]


@dataclass(frozen=True)
class MixedStrategy:
    """A probability vector over a player's pure strategies.

    Entries below -SIMPLEX_TOL or a total mass off by more than
    SIMPLEX_TOL are rejected; surviving round-off is cleaned up (tiny
    negatives clamped, the vector rescaled to sum exactly to one).
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise StructuralError("strategy must be a nonempty vector")
        if not np.isfinite(p).all():
            raise InputError("strategy entries must be finite")
        if p.min() < -SIMPLEX_TOL:
            raise ParameterError(f"strategy entry {p.min()} below -{SIMPLEX_TOL}")
        total = p.sum()
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise ParameterError(f"strategy mass {total} not within "
                                 f"{SIMPLEX_TOL} of 1")
        p = np.where(p < 0.0, 0.0, p)
        s = p.sum()
        if s != 1.0:
            p = p / s
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def n(self):
        return self.probs.shape[0]

    @classmethod
    def pure(cls, index, n):
        v = np.zeros(n)
        v[index] = 1.0
        return cls(v)

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def project(cls, vec):
        """Build a strategy from an approximate simplex point.

        Clamps negatives to zero and renormalizes; meant for vectors
        coming out of LP solves, which satisfy the simplex constraints
        only up to the solver's feasibility tolerance.
        """
        v = np.asarray(vec, dtype=np.float64)
        v = np.where(v < 0.0, 0.0, v)
        s = v.sum()
        if s <= 0.0 or not np.isfinite(s):
            raise ParameterError("cannot project vector with no positive mass")
        return cls(v / s)


@dataclass(frozen=True)
class StrategyProfile:
    row: MixedStrategy
    col: MixedStrategy

    def __post_init__(self):
        if self.row.n != self.col.n:
            raise StructuralError("profile strategies have different lengths")


@dataclass(frozen=True)
class RegretReport:
    """Both players' regrets at a profile, with best-response payoffs."""

    row_regret: float
    col_regret: float
    max_regret: float
    row_br_payoff: float
    col_br_payoff: float


@dataclass(frozen=True)
class BestResponseSet:
    """Pure strategies within ``tolerance`` of the best payoff."""

    indices: frozenset
    best_payoff: float
    tolerance: float


# ---------------------------------------------------------------------------
# payoff evaluation


def _check_dims(game, *strategies):
    for s in strategies:
        if s.n != game.n:
            raise StructuralError(
                f"strategy length {s.n} does not match game size {game.n}")


def row_payoff(game, x, y):
    """Expected payoff x^T R y of the row player."""
    _check_dims(game, x, y)
    return float(x.probs @ (game.R @ y.probs))


def col_payoff(game, x, y):
    """Expected payoff x^T C y of the column player."""
    _check_dims(game, x, y)
    return float((x.probs @ game.C) @ y.probs)


def best_response_set(game, player, opponent_strategy, tol=0.0):
    """All pure strategies within ``tol`` of the best payoff.

    ``player`` is "row" or "col"; ``opponent_strategy`` is the other
    player's mixed strategy. With tol = 0 this is the exact argmax set.
    """
    if tol < 0:
        raise ParameterError("tolerance must be nonnegative")
    _check_dims(game, opponent_strategy)
    if player == "row":
        payoffs = game.R @ opponent_strategy.probs
    elif player == "col":
        payoffs = opponent_strategy.probs @ game.C
    else:
        raise ParameterError(f"unknown player {player!r}")
    best = float(payoffs.max())
    indices = frozenset(np.flatnonzero(payoffs >= best - tol).tolist())
    return BestResponseSet(indices=indices, best_payoff=best, tolerance=tol)


def regret_report(game, profile):
    """Exact regrets of both players at ``profile``.

    This is the certification authority: best responses are exact
    argmaxes (no slack), and acceptance checks trust only this function.
    """
    _check_dims(game, profile.row, profile.col)
    row_vals = game.R @ profile.col.probs
    col_vals = profile.row.probs @ game.C
    row_br = float(row_vals.max())
    col_br = float(col_vals.max())
    row_reg = row_br - float(profile.row.probs @ row_vals)
    col_reg = col_br - float(col_vals @ profile.col.probs)
    return RegretReport(
        row_regret=row_reg,
        col_regret=col_reg,
        max_regret=max(row_reg, col_reg),
        row_br_payoff=row_br,
        col_br_payoff=col_br,
    )


def mix(a, b, weight_a):
    """Convex combination weight_a * a + (1 - weight_a) * b.

    The result is re-projected onto the simplex (clamp, renormalize) so
    that repeated mixing over thousands of descent steps cannot drift.
    """
    if not 0.0 <= weight_a <= 1.0:
        raise ParameterError(f"mix weight {weight_a} outside [0, 1]")
    if a.n != b.n:
        raise StructuralError("cannot mix strategies of different lengths")
    return MixedStrategy.project(weight_a * a.probs + (1.0 - weight_a) * b.probs)


def normalize_game(raw_R, raw_C):
    """Map raw payoff matrices affinely onto [0, 1], per player.

    Each matrix is normalized independently (subtract its minimum,
    divide by its range); a constant matrix becomes all zeros. Positive
    affine maps preserve every best-response set, so the normalized game
    has the same equilibria.
    """
    out = []
    for raw in (raw_R, raw_C):
        m = np.asarray(raw, dtype=np.float64)
        if not np.isfinite(m).all():
            raise InputError("payoff matrix has non-finite entries")
        lo = m.min()
        span = m.max() - lo
        if span == 0.0:
            out.append(np.zeros_like(m))
        else:
            out.append((m - lo) / span)
    return BimatrixGame(R=out[0], C=out[1])
