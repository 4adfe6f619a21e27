"""Descent to a delta-stationary point of the max-regret function.

Each iteration first rebalances the current profile so the moving
player is the one with the larger regret (regret equalization, one LP
over that player's simplex), then solves the primal direction LP whose
optimum gamma lower-bounds the achievable one-step regret. The point
is delta-stationary when gamma - g >= -delta, where g is the current
max regret; otherwise both strategies step toward the LP direction
with weight delta / (delta + 2) and the loop repeats.

The max regret of the visited profiles is nonincreasing (up to LP
tolerance), so the trace doubles as a progress monitor. If the
iteration budget runs out the best visited profile is returned with
``stationary=False`` and downstream guarantees are off.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError, ParameterError, SolverFailureError
from .game import (
    BR_TOL,
    MixedStrategy,
    StrategyProfile,
    best_response_set,
    col_payoff,
    regret_report,
    row_payoff,
)
from .lp import LP_FEAS_TOL, LinearProgram, solve

EQUALIZE_TOL = 1e-6
HARD_ITERATION_CAP = 200000
DEFAULT_DELTA = 0.005
BACKTRACK_LIMIT = 30
PROGRESS_TOL = 1e-12


def default_iterations(delta):
    """Iteration budget sized to the descent's worst-case progress rate."""
    return min(int(math.ceil(40.0 / (delta * delta))), HARD_ITERATION_CAP)


@dataclass(frozen=True)
class SolverConfig:
    delta: float = DEFAULT_DELTA
    max_iterations: int = None
    br_tol: float = BR_TOL
    lp_feas_tol: float = LP_FEAS_TOL
    rng_seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.delta < 1.0 / 3.0):
            raise ParameterError(
                f"delta must lie in (0, 1/3), got {self.delta}"
            )
        if self.max_iterations is None:
            object.__setattr__(
                self, "max_iterations", default_iterations(self.delta)
            )
        if not (isinstance(self.max_iterations, int) and self.max_iterations >= 1):
            raise ParameterError("max_iterations must be a positive integer")


@dataclass(frozen=True)
class PrimalSolution:
    gamma: float
    x_prime: MixedStrategy
    y_prime: MixedStrategy


@dataclass(frozen=True)
class StationaryCertificate:
    profile: StrategyProfile
    gamma: float
    g_value: float
    iterations_used: int
    descent_trace: list
    stationary: bool


def equalize_regrets(game, profile):
    """Move the higher-regret player to minimize its regret subject to
    keeping it at least the other player's regret; ties move the row
    player. Max regret never increases and the gap closes to within
    EQUALIZE_TOL."""
    rep = regret_report(game, profile)
    n = game.n
    ones = np.ones(n)
    if rep.row_regret >= rep.col_regret:
        y0 = profile.col
        Ry = game.R @ y0.probs
        Cy = game.C @ y0.probs
        K = float(Ry.max())
        # reg_row(x, y0) >= reg_col(x, y0) for every column j
        cons = [(game.C[:, j] - Cy + Ry, "<=", K) for j in range(n)]
        cons.append((ones, "=", 1.0))
        sol = _solve_equalize(LinearProgram(Ry, "max", cons))
        moved = StrategyProfile(MixedStrategy.project(sol.primal_values), y0)
    else:
        x0 = profile.row
        xR = x0.probs @ game.R
        xC = x0.probs @ game.C
        K = float(xC.max())
        cons = [(game.R[i, :] - xR + xC, "<=", K) for i in range(n)]
        cons.append((ones, "=", 1.0))
        sol = _solve_equalize(LinearProgram(xC, "max", cons))
        moved = StrategyProfile(x0, MixedStrategy.project(sol.primal_values))

    out = regret_report(game, moved)
    if abs(out.row_regret - out.col_regret) > EQUALIZE_TOL:
        raise InvariantViolationError(
            "regret equalization left a gap of "
            f"{out.row_regret - out.col_regret:.3e}"
        )
    if out.max_regret > rep.max_regret + 1e-9:
        raise InvariantViolationError(
            f"regret equalization raised max regret from {rep.max_regret!r} "
            f"to {out.max_regret!r}"
        )
    return moved


def _solve_equalize(lp):
    sol = solve(lp)
    if sol.status != "optimal":
        # the incumbent strategy is always feasible and payoffs are
        # bounded, so anything else is an internal error
        raise InvariantViolationError(
            f"equalization LP reported {sol.status}"
        )
    return sol


def build_primal_lp(game, profile, br_tol=BR_TOL):
    """Direction LP over (gamma, x', y'): minimize gamma subject to,
    for every row best response i and column best response j at the
    profile, the mixed one-step improvement constraints; x', y' on the
    simplex, gamma free."""
    n = game.n
    x, y = profile.row, profile.col
    Ry = game.R @ y.probs
    xR = x.probs @ game.R
    Cy = game.C @ y.probs
    xC = x.probs @ game.C
    Rxy = row_payoff(game, x, y)
    Cxy = col_payoff(game, x, y)
    br_rows = sorted(best_response_set(game, "row", y, br_tol).indices)
    br_cols = sorted(best_response_set(game, "col", x, br_tol).indices)

    nvars = 1 + 2 * n
    cons = []
    for i in br_rows:
        row = np.zeros(nvars)
        row[0] = 1.0
        row[1 : n + 1] = Ry
        row[n + 1 :] = xR - game.R[i, :]
        cons.append((row, ">=", Rxy))
    for j in br_cols:
        row = np.zeros(nvars)
        row[0] = 1.0
        row[1 : n + 1] = Cy - game.C[:, j]
        row[n + 1 :] = xC
        cons.append((row, ">=", Cxy))
    sx = np.zeros(nvars)
    sx[1 : n + 1] = 1.0
    cons.append((sx, "=", 1.0))
    sy = np.zeros(nvars)
    sy[n + 1 :] = 1.0
    cons.append((sy, "=", 1.0))

    obj = np.zeros(nvars)
    obj[0] = 1.0
    bounds = [(None, None)] + [(0.0, None)] * (2 * n)
    return LinearProgram(obj, "min", cons, bounds)


def solve_primal(game, profile, br_tol=BR_TOL):
    n = game.n
    sol = solve(build_primal_lp(game, profile, br_tol))
    if sol.status != "optimal":
        raise SolverFailureError(
            f"primal direction LP reported {sol.status}"
        )
    return PrimalSolution(
        gamma=float(sol.objective_value),
        x_prime=MixedStrategy.project(sol.primal_values[1 : n + 1]),
        y_prime=MixedStrategy.project(sol.primal_values[n + 1 :]),
    )


def _step(profile, primal, weight):
    row = MixedStrategy.project(
        (1.0 - weight) * profile.row.probs + weight * primal.x_prime.probs
    )
    col = MixedStrategy.project(
        (1.0 - weight) * profile.col.probs + weight * primal.y_prime.probs
    )
    return StrategyProfile(row, col)


def descent_step(profile, primal, delta):
    """Move both strategies toward the LP direction with weight
    delta / (delta + 2)."""
    return _step(profile, primal, delta / (delta + 2.0))


def run_descent(game, config=None, initial=None):
    """Iterate equalization and direction LPs until delta-stationary.

    Each iteration first tries the full step toward the LP direction.
    The regret function is piecewise bilinear, so a full step can jump
    across a breakpoint where a nearly-best reply takes over and undo
    the predicted improvement; when that happens the step weight is
    halved along the same segment until the equalized regret strictly
    decreases.  gamma - g < -delta guarantees such a weight exists.

    Returns a StationaryCertificate; ``stationary`` is False only when
    max_iterations ran out (or no step length made progress, which is a
    strictly stronger budget exhaustion), in which case the best visited
    profile is certified instead.
    """
    if config is None:
        config = SolverConfig()
    profile = initial
    if profile is None:
        n = game.n
        profile = StrategyProfile(MixedStrategy.uniform(n), MixedStrategy.uniform(n))
    profile = equalize_regrets(game, profile)
    g = regret_report(game, profile).max_regret
    trace = []
    best = None
    for it in range(config.max_iterations):
        trace.append(g)
        primal = solve_primal(game, profile, config.br_tol)
        if best is None or g < best[2]:
            best = (profile, primal.gamma, g, it + 1)
        if primal.gamma - g >= -config.delta:
            return StationaryCertificate(
                profile=profile,
                gamma=primal.gamma,
                g_value=g,
                iterations_used=it + 1,
                descent_trace=trace,
                stationary=True,
            )
        weight = config.delta / (config.delta + 2.0)
        moved = False
        for _ in range(BACKTRACK_LIMIT):
            candidate = equalize_regrets(game, _step(profile, primal, weight))
            g_candidate = regret_report(game, candidate).max_regret
            if g_candidate < g - PROGRESS_TOL:
                profile = candidate
                g = g_candidate
                moved = True
                break
            weight *= 0.5
        if not moved:
            break
    return StationaryCertificate(
        profile=best[0],
        gamma=best[1],
        g_value=best[2],
        iterations_used=len(trace),
        descent_trace=trace,
        stationary=False,
    )
