"""Dense linear programming via two-phase simplex.

Problems are stated over variables that are nonnegative by default;
individual variables can be declared free through ``bounds``. The
solver standardizes to equality form (free variables split into
positive and negative parts, slack/surplus and artificial columns
appended), runs the pivot kernel, and reconstructs both the primal
point and the dual multipliers from the final basis against the
untouched standardized data, so the reported solution does not inherit
accumulated tableau roundoff.

Two interchangeable kernels exist: a Cython extension
(anash._simplex_core) and a pure-python twin (anash._simplex_py). The
environment variable ANASH_BACKEND picks one explicitly ("compiled" or
"python"); by default the compiled kernel is used when importable.

Dual sign convention: for every status-"optimal" solution,
``objective_value == sum(dual_values[i] * rhs_i)`` exactly as built
(strong duality), with duals of ">=" rows nonnegative and duals of
"<=" rows nonpositive under sense "min", and the mirror under "max".
"""

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError, SolverFailureError, StructuralError

_choice = os.environ.get("ANASH_BACKEND", "").strip().lower()
if _choice not in ("", "compiled", "python"):
    raise ImportError(
        f"ANASH_BACKEND must be 'compiled' or 'python', got {_choice!r}"
    )
if _choice == "python":
    from . import _simplex_py as _kernel

    BACKEND = "python"
else:
    try:
        from . import _simplex_core as _kernel

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _simplex_py as _kernel

        BACKEND = "python"

RELATIONS = ("<=", "=", ">=")

SIMPLEX_PIV_TOL = 1e-9
LP_FEAS_TOL = 1e-8
PIVOT_BUDGET_FACTOR = 50


@dataclass(frozen=True)
class LinearProgram:
    """min or max objective @ x subject to linear constraints.

    constraints: list of (coefficients, relation, rhs) with relation in
    {"<=", "=", ">="}. bounds: optional per-variable (lower, upper)
    pairs; supported values are (0, None) for the default nonnegative
    variable and (None, None) for a free variable.
    """

    objective: np.ndarray
    sense: str
    constraints: list
    bounds: list = None

    def __post_init__(self):
        object.__setattr__(
            self, "objective", np.asarray(self.objective, dtype=np.float64)
        )


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    primal_values: np.ndarray = None
    objective_value: float = None
    dual_values: np.ndarray = None
    pivots: int = 0


@dataclass
class _Standardized:
    full: np.ndarray  # (m, ncols+1), [A | b] with b >= 0
    cfull: np.ndarray
    basis: np.ndarray
    art_start: int
    neg_col: np.ndarray  # per original var, column of negative part or -1
    rel_flip: np.ndarray  # +-1 per row, -1 where the row was negated
    rows: list  # validated (coeffs, relation, rhs) triples


def _validate(lp):
    c = lp.objective
    if c.ndim != 1 or c.size == 0:
        raise StructuralError("objective must be a nonempty vector")
    if not np.all(np.isfinite(c)):
        raise StructuralError("objective has non-finite entries")
    if lp.sense not in ("min", "max"):
        raise ParameterError(f"sense must be 'min' or 'max', got {lp.sense!r}")
    nv = c.size
    rows = []
    for k, (coeffs, rel, rhs) in enumerate(lp.constraints):
        a = np.asarray(coeffs, dtype=np.float64)
        if a.shape != (nv,):
            raise StructuralError(
                f"constraint {k} has {a.size} coefficients, expected {nv}"
            )
        if rel not in RELATIONS:
            raise ParameterError(f"constraint {k} relation {rel!r} invalid")
        rhs = float(rhs)
        if not (np.all(np.isfinite(a)) and np.isfinite(rhs)):
            raise StructuralError(f"constraint {k} has non-finite entries")
        rows.append((a, rel, rhs))
    free = np.zeros(nv, dtype=bool)
    if lp.bounds is not None:
        if len(lp.bounds) != nv:
            raise StructuralError("bounds length does not match objective")
        for j, (lo, hi) in enumerate(lp.bounds):
            if hi is not None:
                raise ParameterError("finite upper bounds are not supported")
            if lo is None:
                free[j] = True
            elif lo != 0:
                raise ParameterError(
                    "lower bounds other than 0 or None are not supported"
                )
    return c, rows, free


def _standardize(lp):
    c, rows, free = _validate(lp)
    nv = c.size
    m = len(rows)
    csgn = c if lp.sense == "min" else -c

    neg_col = np.full(nv, -1, dtype=np.int64)
    nsplit = nv
    for j in range(nv):
        if free[j]:
            neg_col[j] = nsplit
            nsplit += 1

    A = np.zeros((m, nsplit))
    b = np.zeros(m)
    rel_flip = np.ones(m)
    rels = []
    mirror = {"<=": ">=", ">=": "<=", "=": "="}
    for i, (a, rel, rhs) in enumerate(rows):
        row = np.zeros(nsplit)
        row[:nv] = a
        for j in range(nv):
            if neg_col[j] >= 0:
                row[neg_col[j]] = -a[j]
        if rhs < 0.0:
            row = -row
            rhs = -rhs
            rel = mirror[rel]
            rel_flip[i] = -1.0
        A[i] = row
        b[i] = rhs
        rels.append(rel)

    nslack = sum(1 for r in rels if r != "=")
    nart = sum(1 for r in rels if r != "<=")
    art_start = nsplit + nslack
    ncols = art_start + nart
    full = np.zeros((m, ncols + 1))
    full[:, :nsplit] = A
    full[:, ncols] = b
    basis = np.zeros(m, dtype=np.int64)
    s = nsplit
    t = art_start
    for i, rel in enumerate(rels):
        if rel == "<=":
            full[i, s] = 1.0
            basis[i] = s
            s += 1
        elif rel == ">=":
            full[i, s] = -1.0
            s += 1
            full[i, t] = 1.0
            basis[i] = t
            t += 1
        else:
            full[i, t] = 1.0
            basis[i] = t
            t += 1

    cfull = np.zeros(ncols)
    cfull[:nv] = csgn
    for j in range(nv):
        if neg_col[j] >= 0:
            cfull[neg_col[j]] = -csgn[j]

    return _Standardized(full, cfull, basis, art_start, neg_col, rel_flip, rows)


def _basic_solution(std, orig):
    """Solve for the basic point and multipliers against the original data."""
    m = orig.shape[0]
    ncols = orig.shape[1] - 1
    B = orig[:, std.basis].reshape(m, m)
    xB = np.linalg.solve(B, orig[:, ncols])
    y = np.linalg.solve(B.T, std.cfull[std.basis])
    xfull = np.zeros(ncols)
    xfull[std.basis] = xB
    return xfull, y


def _fold_primal(xfull, neg_col):
    nv = neg_col.size
    x = xfull[:nv].copy()
    for j in range(nv):
        if neg_col[j] >= 0:
            x[j] -= xfull[neg_col[j]]
    return x


def _check_feasible(rows, x):
    worst = 0.0
    for a, rel, rhs in rows:
        lhs = float(a @ x)
        if rel == "<=":
            worst = max(worst, lhs - rhs)
        elif rel == ">=":
            worst = max(worst, rhs - lhs)
        else:
            worst = max(worst, abs(lhs - rhs))
    return worst


def solve(lp):
    """Solve the program; deterministic for identical input.

    Returns LpSolution. Raises SolverFailureError if the pivot budget
    (50 * (variables + constraints)) is exhausted or the final basis is
    numerically singular.
    """
    std = _standardize(lp)
    nv = lp.objective.size
    m = std.full.shape[0]
    orig = std.full.copy()
    max_pivots = PIVOT_BUDGET_FACTOR * (nv + m)
    status, pivots = _kernel.run_simplex(
        std.full,
        orig,
        std.basis,
        std.cfull,
        std.art_start,
        max_pivots,
        SIMPLEX_PIV_TOL,
        LP_FEAS_TOL,
    )

    if status == 1:
        return LpSolution(status="infeasible", pivots=pivots)

    try:
        xfull, y = _basic_solution(std, orig)
    except np.linalg.LinAlgError:
        raise SolverFailureError(
            f"singular basis after {pivots} pivots (status {status})"
        ) from None
    x = _fold_primal(xfull, std.neg_col)

    if status == 3:
        raise SolverFailureError(
            f"pivot budget of {max_pivots} exhausted", last_iterate=x
        )
    if status == 2:
        inf = -np.inf if lp.sense == "min" else np.inf
        return LpSolution(
            status="unbounded", primal_values=x, objective_value=inf,
            pivots=pivots,
        )

    worst = _check_feasible(std.rows, x)
    if worst > LP_FEAS_TOL or xfull.min() < -LP_FEAS_TOL:
        raise SolverFailureError(
            f"optimal basis violates feasibility (row residual {worst:.3e}, "
            f"min variable {xfull.min():.3e})",
            last_iterate=x,
        )
    duals = std.rel_flip * y
    if lp.sense == "max":
        duals = -duals
    return LpSolution(
        status="optimal",
        primal_values=x,
        objective_value=float(lp.objective @ x),
        dual_values=duals,
        pivots=pivots,
    )
