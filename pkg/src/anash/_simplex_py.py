"""Pure-python two-phase simplex pivot kernel.

This is the fallback for the compiled kernel in _simplex_core.pyx; the
two implementations must be kept in lockstep pivot for pivot. The
entering column has the most negative reduced cost (first index on
ties); the leaving row is the least ratio, with exact ties refined
lexicographically, so a given tableau always produces the same pivot
sequence.

The kernel works on the standardized tableau assembled by anash.lp:
``T`` is the (m, ncols+1) matrix [A | b] with b >= 0, ``orig`` a
pristine copy of the same matrix that is never written, ``basis`` the
initial basic column of each row (slack or artificial), ``c`` the
phase-2 cost row (zeros on slack and artificial columns), and columns
``art_start:`` are the artificials. T and basis are mutated in place.

Long pivot sequences let roundoff accumulate in the updated tableau and
reduced-cost rows, which shows up as phantom negative reduced costs
(degenerate cycling) or as a final basis whose true solution is
infeasible. Every REFRESH pivots, and before any terminal decision
(optimal, unbounded, phase-1 infeasible), the tableau and reduced costs
are therefore recomputed exactly from ``orig`` and the current basis.

Status codes: 0 optimal, 1 infeasible, 2 unbounded, 3 pivot limit or
numerical breakdown.
"""

import numpy as np

REFRESH = 64
RATIO_TOL = 1e-6
SNAP_TOL = 1e-11


def _entering(reduced, limit, tol):
    # most negative reduced cost, first index on ties: on the massively
    # degenerate 0/1 games the least-index rule admits columns with
    # microscopic improvement and walks tens of thousands of bases
    j = int(np.argmin(reduced[:limit]))
    return j if reduced[j] < -tol else -1


def _ratio_row(T, basis, ident, ncols, j):
    # pivot elements below RATIO_TOL are rejected outright: dividing by
    # a near-zero entry wrecks the conditioning of every later basis
    col = T[:, j]
    pos = col > RATIO_TOL
    if not pos.any():
        return -1
    rhs = T[:, ncols].copy()
    rhs[rhs < 0.0] = 0.0
    ratios = np.where(pos, rhs / np.where(pos, col, 1.0), np.inf)
    best = ratios.min()
    ties = np.flatnonzero(ratios == best)
    # lexicographic refinement over the initial-basis columns (which
    # track the basis inverse): massively degenerate 0/1 games tie tens
    # of rows at ratio zero, and a plain least-index tie-break walks
    # that vertex fan essentially forever
    k = 0
    while ties.size > 1 and k < ident.size:
        sub = T[ties, ident[k]] / col[ties]
        ties = ties[sub == sub.min()]
        k += 1
    if ties.size > 1:
        return int(ties[np.argmin(basis[ties])])
    return int(ties[0])


def _pivot(T, basis, r, r1, ncols, br, j):
    piv = T[br, j]
    T[br, :] /= piv
    T[br, j] = 1.0
    col = T[:, j].copy()
    col[br] = 0.0
    T -= col[:, None] * T[br, :]
    T[:, j] = 0.0
    T[br, j] = 1.0
    f = r[j]
    if f != 0.0:
        r -= f * T[br, :ncols]
        r[j] = 0.0
    if r1 is not None:
        f = r1[j]
        if f != 0.0:
            r1 -= f * T[br, :ncols]
            r1[j] = 0.0
    basis[br] = j


def _refactor(T, orig, basis, c, art_start, r, r1):
    """Recompute T and the reduced-cost rows from the pristine data.

    Basic values within SNAP_TOL of zero are snapped to exactly zero:
    factorization fuzz otherwise makes the ratios of degenerate rows
    microscopically distinct, so they never tie exactly and the
    lexicographic refinement in the ratio test cannot engage. Larger
    negative values are kept as computed; they mark a basis that
    drifted infeasible and are repaired by the dual-simplex leg before
    optimality is accepted.
    """
    ncols = T.shape[1] - 1
    B = orig[:, basis]
    T[:, :] = np.linalg.solve(B, orig)
    rhs = T[:, ncols]
    rhs[np.abs(rhs) < SNAP_TOL] = 0.0
    r[:] = c - c[basis] @ T[:, :ncols]
    r[basis] = 0.0
    if r1 is not None:
        c1 = np.zeros(ncols)
        c1[art_start:] = 1.0
        r1[:] = c1 - c1[basis] @ T[:, :ncols]
        r1[basis] = 0.0


def _dual_restore(T, basis, r, ncols, art_start, feas_tol, pivots,
                  max_pivots):
    """Pivot negative basic variables out of an optimal-looking basis.

    Entering columns are chosen by the dual ratio test (least
    r_j / -T[i, j], ties by least column index) so the reduced costs
    stay nonnegative; rows are chosen by least basic-variable index
    among the violating ones. Returns the new pivot count, or -1 when
    no admissible column exists (numerical breakdown).
    """
    while True:
        rows = np.flatnonzero(T[:, ncols] < -feas_tol)
        if rows.size == 0:
            return pivots
        i = int(rows[np.argmin(basis[rows])])
        row = T[i, :art_start]
        neg = row < -RATIO_TOL
        if not neg.any():
            return -1
        ratios = np.where(neg, r[:art_start] / np.where(neg, -row, 1.0),
                          np.inf)
        j = int(np.argmin(ratios))
        if pivots >= max_pivots:
            return -1
        _pivot(T, basis, r, None, ncols, i, j)
        pivots += 1


def run_simplex(T, orig, basis, c, art_start, max_pivots, piv_tol, feas_tol):
    m = T.shape[0]
    ncols = T.shape[1] - 1
    ident = basis.copy()
    r = np.array(c, dtype=np.float64)
    r1 = np.zeros(ncols)
    r1[art_start:] = 1.0
    for i in range(m):
        if basis[i] >= art_start:
            r1 -= T[i, :ncols]
    pivots = 0
    since = 0

    # phase 1: minimize the sum of artificial variables
    while True:
        j = _entering(r1, art_start, piv_tol)
        if j < 0:
            if since == 0:
                break
            try:
                _refactor(T, orig, basis, c, art_start, r, r1)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        br = _ratio_row(T, basis, ident, ncols, j)
        if br < 0:
            # the phase-1 objective is bounded below by zero, so a
            # missing ratio row can only be stale data or breakdown
            if since == 0:
                return 3, pivots
            try:
                _refactor(T, orig, basis, c, art_start, r, r1)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        if pivots >= max_pivots:
            return 3, pivots
        _pivot(T, basis, r, r1, ncols, br, j)
        pivots += 1
        since += 1
        if since >= REFRESH:
            try:
                _refactor(T, orig, basis, c, art_start, r, r1)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0

    infeas = 0.0
    for i in range(m):
        if basis[i] >= art_start:
            infeas += T[i, ncols]
    if infeas > feas_tol:
        return 1, pivots

    # drive leftover artificials out of the basis (their values are
    # within feas_tol of zero; treat them as exactly zero)
    for i in range(m):
        if basis[i] >= art_start:
            T[i, ncols] = 0.0
            nz = np.flatnonzero(np.abs(T[i, :art_start]) > RATIO_TOL)
            if nz.size:
                if pivots >= max_pivots:
                    return 3, pivots
                _pivot(T, basis, r, None, ncols, i, int(nz[0]))
                pivots += 1
                since += 1
            # else: redundant row, the artificial stays basic at zero

    # phase 2: minimize c, artificial columns barred from entering
    while True:
        j = _entering(r, art_start, piv_tol)
        if j < 0:
            if since == 0:
                if T[:, ncols].min() >= -feas_tol:
                    return 0, pivots
                restored = _dual_restore(
                    T, basis, r, ncols, art_start, feas_tol, pivots,
                    max_pivots,
                )
                if restored < 0:
                    return 3, pivots
                since += restored - pivots
                pivots = restored
                continue
            try:
                _refactor(T, orig, basis, c, art_start, r, None)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        br = _ratio_row(T, basis, ident, ncols, j)
        if br < 0:
            if since == 0:
                return 2, pivots
            try:
                _refactor(T, orig, basis, c, art_start, r, None)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        if pivots >= max_pivots:
            return 3, pivots
        _pivot(T, basis, r, None, ncols, br, j)
        pivots += 1
        since += 1
        if since >= REFRESH:
            try:
                _refactor(T, orig, basis, c, art_start, r, None)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
