"""Rank-revealing Gaussian elimination, dense and sparse.

Both routines use partial pivoting and a pivot threshold ``tol`` relative to the
largest absolute entry of the input, so rank decisions are scale free.
"""

from __future__ import annotations

import numpy as np

__all__ = ["rref", "rank", "nullspace", "sparse_nullspace"]


def rref(A, tol: float = 1e-9) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` and its pivot columns."""
    R = np.array(A, dtype=float, copy=True)
    if R.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {R.shape}")
    n_rows, n_cols = R.shape
    scale = np.abs(R).max() if R.size else 0.0
    if scale == 0.0:
        return R * 0.0, []
    threshold = tol * scale
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= threshold:
            R[r:, c] = 0.0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] /= R[r, c]
        factors = R[:, c].copy()
        factors[r] = 0.0
        R -= np.outer(factors, R[r])
        R[:, c] = 0.0
        R[r, c] = 1.0
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, tol: float = 1e-9) -> int:
    A = np.asarray(A, dtype=float)
    # eliminate along the shorter side
    if A.ndim == 2 and A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(A, tol)[1])


def nullspace(A, tol: float = 1e-9) -> np.ndarray:
    """Columns spanning ``{x : A x = 0}``, one per free column of the echelon form."""
    A = np.asarray(A, dtype=float)
    n_cols = A.shape[1]
    R, pivots = rref(A, tol)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    N = np.zeros((n_cols, len(free)))
    for k, f in enumerate(free):
        N[f, k] = 1.0
        for row, pc in enumerate(pivots):
            N[pc, k] = -R[row, f]
    return N


def sparse_nullspace(rows: list[dict[int, float]], n_cols: int, tol: float = 1e-9) -> np.ndarray:
    """Null space of a sparse matrix given as a list of ``{column: value}`` rows.

    Full Gauss-Jordan elimination on dict rows, pivoting column by column on the
    entry of largest magnitude (ties go to the lowest row id, so the result is
    deterministic).  Returns an ``(n_cols, nullity)`` dense array.
    """
    rows = [dict(r) for r in rows]
    scale = max((abs(v) for r in rows for v in r.values()), default=0.0)
    if scale == 0.0:
        return np.eye(n_cols)
    threshold = tol * scale
    drop = 1e-14 * scale

    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)

    pivot_row_of: dict[int, int] = {}
    is_pivot_row = [False] * len(rows)
    for c in range(n_cols):
        holders = col_rows.get(c)
        if not holders:
            continue
        best, best_val = -1, threshold
        for i in sorted(holders):
            if is_pivot_row[i]:
                continue
            val = abs(rows[i][c])
            if val > best_val:
                best, best_val = i, val
        if best < 0:
            continue
        prow = rows[best]
        inv = 1.0 / prow[c]
        for cc in prow:
            prow[cc] *= inv
        prow[c] = 1.0
        is_pivot_row[best] = True
        pivot_row_of[c] = best
        for i in list(holders):
            if i == best:
                continue
            row = rows[i]
            f = row.get(c, 0.0)
            if f == 0.0:
                continue
            for cc, pv in prow.items():
                nv = row.get(cc, 0.0) - f * pv
                if abs(nv) <= drop or cc == c:
                    if cc in row:
                        del row[cc]
                        col_rows[cc].discard(i)
                else:
                    if cc not in row:
                        col_rows.setdefault(cc, set()).add(i)
                    row[cc] = nv

    free = [c for c in range(n_cols) if c not in pivot_row_of]
    index_of_free = {f: k for k, f in enumerate(free)}
    N = np.zeros((n_cols, len(free)))
    for f, k in index_of_free.items():
        N[f, k] = 1.0
    for c, i in pivot_row_of.items():
        for cc, v in rows[i].items():
            if cc != c:
                N[c, index_of_free[cc]] = -v
    return N
