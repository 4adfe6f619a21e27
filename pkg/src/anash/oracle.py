"""Independent certification and small-game exact solvers.

certify() rechecks a profile from the raw matrices only; it never looks
at solver internals, so it can vet any claimed approximation level.
support_enumeration() finds exact equilibria of tiny games by solving
the indifference systems of every support pair, and grid_min_regret()
scans a simplex product grid; both exist to cross-examine the main
pipeline, not to be fast.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ParameterError
from .game import MixedStrategy, StrategyProfile, regret_report

ORACLE_MAX_N = 5
ORACLE_RESIDUAL_TOL = 1e-8
ORACLE_SUPPORT_TOL = 1e-9
ORACLE_REGRET_TOL = 1e-7
CERTIFY_SLACK = 1e-9


@dataclass(frozen=True)
class ExactEquilibrium:
    profile: StrategyProfile
    row_support: frozenset
    col_support: frozenset
    residual: float


def certify(game, profile, epsilon):
    """(is epsilon-approximate, full regret report)."""
    rep = regret_report(game, profile)
    return rep.max_regret <= epsilon + CERTIFY_SLACK, rep


def _solve_indifference(payoffs, own_support, other_support, n):
    """Mixed strategy over other_support making own_support indifferent.

    payoffs[i, j] is what the owning player gets from pure i against
    the opponent's pure j. Returns (strategy vector, value, residual)
    or None if the system is singular or leaves the simplex.
    """
    rows = len(own_support)
    cols = len(other_support)
    A = np.zeros((rows + 1, cols + 1))
    rhs = np.zeros(rows + 1)
    for r, i in enumerate(own_support):
        for c, j in enumerate(other_support):
            A[r, c] = payoffs[i, j]
        A[r, cols] = -1.0
    A[rows, :cols] = 1.0
    rhs[rows] = 1.0
    if rows + 1 == cols + 1:
        try:
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            return None
    else:
        sol, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    residual = float(np.abs(A @ sol - rhs).max())
    if residual > ORACLE_RESIDUAL_TOL:
        return None
    strategy = np.zeros(n)
    for c, j in enumerate(other_support):
        strategy[j] = sol[c]
    value = float(sol[cols])
    if strategy.min() < -ORACLE_SUPPORT_TOL:
        return None
    if any(strategy[j] <= ORACLE_SUPPORT_TOL for j in other_support):
        return None
    return strategy, value, residual


def support_enumeration(game, max_n=ORACLE_MAX_N):
    """All equilibria with supports that solve their indifference
    systems cleanly, equal-size support pairs first. Intended for
    n <= 5 only."""
    n = game.n
    if n > max_n:
        raise ParameterError(
            f"support enumeration is limited to n <= {max_n}, got {n}"
        )
    supports = [
        tuple(s) for size in range(1, n + 1)
        for s in combinations(range(n), size)
    ]
    pairs = sorted(
        ((sr, sc) for sr in supports for sc in supports),
        key=lambda p: (len(p[0]) != len(p[1]), len(p[0]) + len(p[1]), p),
    )
    found = []
    for sr, sc in pairs:
        y_sol = _solve_indifference(game.R, sr, sc, n)
        if y_sol is None:
            continue
        x_sol = _solve_indifference(game.C.T, sc, sr, n)
        if x_sol is None:
            continue
        y_vec, u, res_y = y_sol
        x_vec, v, res_x = x_sol
        # optimality: no pure strategy beats the support value
        if float((game.R @ y_vec).max()) > u + ORACLE_RESIDUAL_TOL:
            continue
        if float((x_vec @ game.C).max()) > v + ORACLE_RESIDUAL_TOL:
            continue
        profile = StrategyProfile(
            MixedStrategy.project(x_vec), MixedStrategy.project(y_vec)
        )
        rep = regret_report(game, profile)
        if rep.max_regret > ORACLE_REGRET_TOL:
            continue
        found.append(ExactEquilibrium(
            profile=profile,
            row_support=frozenset(sr),
            col_support=frozenset(sc),
            residual=max(res_y, res_x),
        ))
    return found


def _simplex_grid(n, m):
    """All compositions of m into n parts, as probabilities m_i / m."""
    points = []

    def fill(prefix, remaining, slots):
        if slots == 1:
            points.append(prefix + [remaining])
            return
        for k in range(remaining + 1):
            fill(prefix + [k], remaining - k, slots - 1)

    fill([], m, n)
    return np.array(points, dtype=np.float64) / float(m)


def grid_min_regret(game, resolution):
    """Profile minimizing max regret over the product of simplex grids.

    Exhaustive, so restricted to n <= 3; ties resolve to the first grid
    point in lexicographic composition order.
    """
    n = game.n
    if n > 3:
        raise ParameterError(f"grid search is limited to n <= 3, got {n}")
    if not (0.0 < resolution <= 0.5):
        raise ParameterError(f"resolution {resolution} out of range")
    m = int(round(1.0 / resolution))
    pts = _simplex_grid(n, m)
    G = pts.shape[0]
    RY = game.R @ pts.T  # (n, G): column b is R y_b
    br_row = RY.max(axis=0)  # (G,)
    XC = pts @ game.C  # (G, n): row a is x_a C
    br_col = XC.max(axis=1)  # (G,)

    best_val = np.inf
    best_pair = (0, 0)
    block = 512
    for start in range(0, G, block):
        stop = min(start + block, G)
        pay_r = pts[start:stop] @ RY  # (g, G)
        pay_c = XC[start:stop] @ pts.T
        gmat = np.maximum(br_row[None, :] - pay_r,
                          br_col[start:stop, None] - pay_c)
        flat = int(np.argmin(gmat))
        val = float(gmat.flat[flat])
        if val < best_val:
            best_val = val
            best_pair = (start + flat // G, flat % G)
    a, b = best_pair
    profile = StrategyProfile(
        MixedStrategy.project(pts[a]), MixedStrategy.project(pts[b])
    )
    return profile, best_val
