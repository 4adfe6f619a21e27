# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled two-phase simplex pivot kernel.

Mirror of _simplex_py.run_simplex; any change here must land there too.
Both kernels use the same entering rule (most negative reduced cost,
first index on ties), the same ratio test (least ratio, exact
ties refined lexicographically), the same elimination arithmetic,
and the same refactorization points (every REFRESH pivots and before
any terminal decision, the tableau and reduced costs are recomputed
from the pristine ``orig`` data via numpy), so they produce identical
pivot sequences on the same tableau. The extension is built with
floating-point contraction disabled to keep the arithmetic bit-identical
with numpy.
"""

import numpy as np

cimport numpy as cnp

REFRESH = 64
RATIO_TOL = 1e-6
SNAP_TOL = 1e-11


cdef Py_ssize_t _entering(double[::1] reduced, Py_ssize_t limit, double tol):
    # most negative reduced cost, first index on ties: on the massively
    # degenerate 0/1 games the least-index rule admits columns with
    # microscopic improvement and walks tens of thousands of bases
    cdef Py_ssize_t j, best = 0
    for j in range(1, limit):
        if reduced[j] < reduced[best]:
            best = j
    if reduced[best] < -tol:
        return best
    return -1


cdef Py_ssize_t _ratio_row(double[:, ::1] T, cnp.int64_t[::1] basis,
                           cnp.int64_t[::1] ident, cnp.int64_t[::1] ties,
                           Py_ssize_t m, Py_ssize_t ncols, Py_ssize_t j):
    # pivot elements below RATIO_TOL are rejected outright: dividing by
    # a near-zero entry wrecks the conditioning of every later basis
    cdef double a, rhs, ratio, best, sub
    cdef double tol = RATIO_TOL
    cdef Py_ssize_t i, k, t, nk, row, ck
    cdef Py_ssize_t nties = 0
    best = 0.0
    for i in range(m):
        a = T[i, j]
        if a <= tol:
            continue
        rhs = T[i, ncols]
        if rhs < 0.0:
            rhs = 0.0
        ratio = rhs / a
        if nties == 0 or ratio < best:
            best = ratio
            ties[0] = i
            nties = 1
        elif ratio == best:
            ties[nties] = i
            nties += 1
    if nties == 0:
        return -1
    # lexicographic refinement over the initial-basis columns (which
    # track the basis inverse): massively degenerate 0/1 games tie tens
    # of rows at ratio zero, and a plain least-index tie-break walks
    # that vertex fan essentially forever
    k = 0
    while nties > 1 and k < m:
        ck = <Py_ssize_t> ident[k]
        row = <Py_ssize_t> ties[0]
        best = T[row, ck] / T[row, j]
        for t in range(1, nties):
            row = <Py_ssize_t> ties[t]
            sub = T[row, ck] / T[row, j]
            if sub < best:
                best = sub
        nk = 0
        for t in range(nties):
            row = <Py_ssize_t> ties[t]
            sub = T[row, ck] / T[row, j]
            if sub == best:
                ties[nk] = ties[t]
                nk += 1
        nties = nk
        k += 1
    if nties > 1:
        nk = 0
        for t in range(1, nties):
            if basis[<Py_ssize_t> ties[t]] < basis[<Py_ssize_t> ties[nk]]:
                nk = t
        return <Py_ssize_t> ties[nk]
    return <Py_ssize_t> ties[0]


cdef void _pivot(double[:, ::1] T, cnp.int64_t[::1] basis, double[::1] r,
                 double[::1] r1, Py_ssize_t m, Py_ssize_t ncols,
                 Py_ssize_t br, Py_ssize_t j, bint phase1):
    cdef double piv = T[br, j]
    cdef double f
    cdef Py_ssize_t k, l
    for l in range(ncols + 1):
        T[br, l] = T[br, l] / piv
    T[br, j] = 1.0
    for k in range(m):
        if k == br:
            continue
        f = T[k, j]
        if f != 0.0:
            for l in range(ncols + 1):
                T[k, l] = T[k, l] - f * T[br, l]
        T[k, j] = 0.0
    f = r[j]
    if f != 0.0:
        for l in range(ncols):
            r[l] = r[l] - f * T[br, l]
        r[j] = 0.0
    if phase1:
        f = r1[j]
        if f != 0.0:
            for l in range(ncols):
                r1[l] = r1[l] - f * T[br, l]
            r1[j] = 0.0
    basis[br] = j


def _refactor(Tnp, orignp, basisnp, cvec, Py_ssize_t art_start, rnp, r1np):
    """Recompute T and the reduced-cost rows from the pristine data.

    Pure numpy, kept expression-for-expression identical with
    _simplex_py._refactor so both kernels stay in bitwise lockstep.
    Basic values within SNAP_TOL of zero are snapped to exactly zero
    so degenerate rows tie exactly in the ratio test and the
    lexicographic refinement can engage; larger negative values are
    kept, marking a drifted-infeasible basis for the dual-simplex leg.
    """
    ncols = Tnp.shape[1] - 1
    B = orignp[:, basisnp]
    Tnp[:, :] = np.linalg.solve(B, orignp)
    rhs = Tnp[:, ncols]
    rhs[np.abs(rhs) < SNAP_TOL] = 0.0
    rnp[:] = cvec - cvec[basisnp] @ Tnp[:, :ncols]
    rnp[basisnp] = 0.0
    if r1np is not None:
        c1 = np.zeros(ncols)
        c1[art_start:] = 1.0
        r1np[:] = c1 - c1[basisnp] @ Tnp[:, :ncols]
        r1np[basisnp] = 0.0


cdef long _dual_restore(double[:, ::1] T, cnp.int64_t[::1] basis,
                        double[::1] r, double[::1] r1, Py_ssize_t m,
                        Py_ssize_t ncols, Py_ssize_t art_start,
                        double feas_tol, long pivots, long max_pivots):
    # pivot negative basic variables out of an optimal-looking basis:
    # rows by least basic-variable index among violations, columns by
    # the dual ratio test (least r_j / -T[i, j], ties by least index)
    cdef Py_ssize_t i, j, vi, vj
    cdef double a, ratio, best
    cdef double tol = RATIO_TOL
    while True:
        vi = -1
        for i in range(m):
            if T[i, ncols] < -feas_tol and (
                    vi < 0 or basis[i] < basis[vi]):
                vi = i
        if vi < 0:
            return pivots
        vj = -1
        best = 0.0
        for j in range(art_start):
            a = T[vi, j]
            if a < -tol:
                ratio = r[j] / (-a)
                if vj < 0 or ratio < best:
                    vj = j
                    best = ratio
        if vj < 0:
            return -1
        if pivots >= max_pivots:
            return -1
        _pivot(T, basis, r, r1, m, ncols, vi, vj, False)
        pivots += 1


def run_simplex(double[:, ::1] T, double[:, ::1] orig,
                cnp.int64_t[::1] basis, double[::1] c,
                Py_ssize_t art_start, long max_pivots,
                double piv_tol, double feas_tol):
    cdef Py_ssize_t m = T.shape[0]
    cdef Py_ssize_t ncols = T.shape[1] - 1
    Tnp = np.asarray(T)
    orignp = np.asarray(orig)
    basisnp = np.asarray(basis)
    cvec = np.asarray(c)
    rnp = np.array(cvec, dtype=np.float64)
    r1np = np.zeros(ncols)
    identnp = basisnp.copy()
    tiesnp = np.empty(m, dtype=np.int64)
    cdef double[::1] r = rnp
    cdef double[::1] r1 = r1np
    cdef cnp.int64_t[::1] ident = identnp
    cdef cnp.int64_t[::1] ties = tiesnp
    cdef Py_ssize_t i, j, br, l
    cdef double infeas
    cdef double rhs_min
    cdef long pivots = 0
    cdef long since = 0
    cdef long restored

    for j in range(art_start, ncols):
        r1[j] = 1.0
    for i in range(m):
        if basis[i] >= art_start:
            for l in range(ncols):
                r1[l] = r1[l] - T[i, l]

    # phase 1: minimize the sum of artificial variables
    while True:
        j = _entering(r1, art_start, piv_tol)
        if j < 0:
            if since == 0:
                break
            try:
                _refactor(Tnp, orignp, basisnp, cvec, art_start, rnp, r1np)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        br = _ratio_row(T, basis, ident, ties, m, ncols, j)
        if br < 0:
            # the phase-1 objective is bounded below by zero, so a
            # missing ratio row can only be stale data or breakdown
            if since == 0:
                return 3, pivots
            try:
                _refactor(Tnp, orignp, basisnp, cvec, art_start, rnp, r1np)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        if pivots >= max_pivots:
            return 3, pivots
        _pivot(T, basis, r, r1, m, ncols, br, j, True)
        pivots += 1
        since += 1
        if since >= REFRESH:
            try:
                _refactor(Tnp, orignp, basisnp, cvec, art_start, rnp, r1np)
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
            for j in range(art_start):
                if T[i, j] > RATIO_TOL or T[i, j] < -RATIO_TOL:
                    if pivots >= max_pivots:
                        return 3, pivots
                    _pivot(T, basis, r, r1, m, ncols, i, j, False)
                    pivots += 1
                    since += 1
                    break
            # else: redundant row, the artificial stays basic at zero

    # phase 2: minimize c, artificial columns barred from entering
    while True:
        j = _entering(r, art_start, piv_tol)
        if j < 0:
            if since == 0:
                rhs_min = 0.0
                for i in range(m):
                    if T[i, ncols] < rhs_min:
                        rhs_min = T[i, ncols]
                if rhs_min >= -feas_tol:
                    return 0, pivots
                restored = _dual_restore(
                    T, basis, r, r1, m, ncols, art_start, feas_tol,
                    pivots, max_pivots,
                )
                if restored < 0:
                    return 3, pivots
                since += restored - pivots
                pivots = restored
                continue
            try:
                _refactor(Tnp, orignp, basisnp, cvec, art_start, rnp, None)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        br = _ratio_row(T, basis, ident, ties, m, ncols, j)
        if br < 0:
            if since == 0:
                return 2, pivots
            try:
                _refactor(Tnp, orignp, basisnp, cvec, art_start, rnp, None)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
            continue
        if pivots >= max_pivots:
            return 3, pivots
        _pivot(T, basis, r, r1, m, ncols, br, j, False)
        pivots += 1
        since += 1
        if since >= REFRESH:
            try:
                _refactor(Tnp, orignp, basisnp, cvec, art_start, rnp, None)
            except np.linalg.LinAlgError:
                return 3, pivots
            since = 0
