"""Dual of the direction LP and the (w, z) profile it induces.

At a delta-stationary profile (x_s, y_s) the direction LP's dual has
variables p_i over the row best responses, q_j over the column best
responses, their totals P and Q with P + Q = 1, and free offsets a, b.
Normalizing p gives a mixed row strategy w supported on best responses
to y_s, and q gives z supported on best responses to x_s. The dual
optimum equals the primal gamma (strong duality), which is what links
the pair (w, z) to the stationarity gap.

The derived quantities lambda = R(w,z) - R(x_s,z) and
mu = C(w,z) - C(w,y_s) drive the case analysis in anash.construct.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolationError, SolverFailureError
from .game import (
    BR_TOL,
    MixedStrategy,
    best_response_set,
    col_payoff,
    row_payoff,
)
from .lp import LinearProgram, solve

P_DEGENERATE_TOL = 1e-9


@dataclass(frozen=True)
class DualSolution:
    w: MixedStrategy
    z: MixedStrategy
    P: float
    Q: float
    a: float
    b: float
    dual_objective: float
    degenerate_w: bool = False
    degenerate_z: bool = False


@dataclass(frozen=True)
class ConstructParams:
    lam: float
    mu: float


def build_dual_lp(game, stationary_profile, br_tol=BR_TOL):
    """Maximize P*R(x,y) + Q*C(x,y) + a + b over (p, q, P, Q, a, b)."""
    n = game.n
    x, y = stationary_profile.row, stationary_profile.col
    Ry = game.R @ y.probs
    xR = x.probs @ game.R
    Cy = game.C @ y.probs
    xC = x.probs @ game.C
    Rxy = row_payoff(game, x, y)
    Cxy = col_payoff(game, x, y)
    br_rows = sorted(best_response_set(game, "row", y, br_tol).indices)
    br_cols = sorted(best_response_set(game, "col", x, br_tol).indices)
    nb, nc = len(br_rows), len(br_cols)

    # variable layout: p (nb), q (nc), P, Q, a, b
    nvars = nb + nc + 4
    iP, iQ, ia, ib = nb + nc, nb + nc + 1, nb + nc + 2, nb + nc + 3
    cons = []

    row = np.zeros(nvars)
    row[:nb] = -1.0
    row[iP] = 1.0
    cons.append((row, "=", 0.0))

    row = np.zeros(nvars)
    row[nb : nb + nc] = -1.0
    row[iQ] = 1.0
    cons.append((row, "=", 0.0))

    row = np.zeros(nvars)
    row[iP] = 1.0
    row[iQ] = 1.0
    cons.append((row, "=", 1.0))

    for k in range(n):
        row = np.zeros(nvars)
        row[:nb] = Ry[k]
        for col, j in enumerate(br_cols):
            row[nb + col] = Cy[k] - game.C[k, j]
        row[ia] = 1.0
        cons.append((row, "<=", 0.0))

    for l in range(n):
        row = np.zeros(nvars)
        for pos, i in enumerate(br_rows):
            row[pos] = xR[l] - game.R[i, l]
        row[nb : nb + nc] = xC[l]
        row[ib] = 1.0
        cons.append((row, "<=", 0.0))

    obj = np.zeros(nvars)
    obj[iP] = Rxy
    obj[iQ] = Cxy
    obj[ia] = 1.0
    obj[ib] = 1.0
    bounds = [(0.0, None)] * (nb + nc + 2) + [(None, None), (None, None)]
    return LinearProgram(obj, "max", cons, bounds)


def extract_duals(game, stationary_profile, lp_solution, br_tol=BR_TOL):
    """Map a solved dual LP back to strategies (w, z) and weights.

    A vanishing weight block (sum below P_DEGENERATE_TOL) degenerates to
    the least-index exact best response, flagged on the result.
    """
    n = game.n
    x, y = stationary_profile.row, stationary_profile.col
    br_rows = sorted(best_response_set(game, "row", y, br_tol).indices)
    br_cols = sorted(best_response_set(game, "col", x, br_tol).indices)
    nb, nc = len(br_rows), len(br_cols)
    vals = lp_solution.primal_values
    p = np.asarray(vals[:nb], dtype=np.float64)
    q = np.asarray(vals[nb : nb + nc], dtype=np.float64)
    P, Q = float(vals[nb + nc]), float(vals[nb + nc + 1])
    a, b = float(vals[nb + nc + 2]), float(vals[nb + nc + 3])

    w, degenerate_w = _weights_to_strategy(
        p, br_rows, n, np.argmax(game.R @ y.probs)
    )
    z, degenerate_z = _weights_to_strategy(
        q, br_cols, n, np.argmax(x.probs @ game.C)
    )

    if abs(P + Q - 1.0) > 1e-8:
        raise InvariantViolationError(f"dual weights sum to {P + Q!r}, not 1")
    return DualSolution(
        w=w,
        z=z,
        P=P,
        Q=Q,
        a=a,
        b=b,
        dual_objective=float(lp_solution.objective_value),
        degenerate_w=degenerate_w,
        degenerate_z=degenerate_z,
    )


def _weights_to_strategy(weights, support, n, fallback_index):
    total = float(weights.sum())
    if total < P_DEGENERATE_TOL:
        return MixedStrategy.pure(int(fallback_index), n), True
    probs = np.zeros(n)
    for val, idx in zip(weights, support):
        probs[idx] = val
    return MixedStrategy.project(probs), False


def solve_dual(game, stationary_profile, br_tol=BR_TOL):
    lp = build_dual_lp(game, stationary_profile, br_tol)
    sol = solve(lp)
    if sol.status != "optimal":
        raise SolverFailureError(f"dual LP reported {sol.status}")
    return extract_duals(game, stationary_profile, sol, br_tol)


def compute_lambda_mu(game, stationary_profile, duals):
    """lambda: row gain of w over x_s against z; mu: column gain of z
    over y_s against w."""
    x, y = stationary_profile.row, stationary_profile.col
    lam = row_payoff(game, duals.w, duals.z) - row_payoff(game, x, duals.z)
    mu = col_payoff(game, duals.w, duals.z) - col_payoff(game, duals.w, y)
    if lam > 1.0 + 1e-9 or mu > 1.0 + 1e-9:
        raise InvariantViolationError(
            f"impossible payoff gains lambda={lam!r} mu={mu!r}"
        )
    return ConstructParams(lam=lam, mu=mu)
