"""Exact dense linear algebra over the rationals.

Two layers share the module: a plain Fraction RREF toolkit (rank, solve,
nullspace, subspace dimensions) and an integer rank engine for the large
indicator/toggle matrices.  The engine keeps an explicit integer basis of the
right kernel and certifies membership of whole row blocks by exact integer
matrix products, so its answers are as exact as the Fraction path while the
bulk work runs through numpy.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .errors import DimensionMismatch

Q = Fraction


def _as_rows(matrix):
    rows = [[Q(x) for x in row] for row in matrix]
    if rows:
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise DimensionMismatch("ragged matrix")
    return rows


def rref(matrix):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = _as_rows(matrix)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def solve(matrix, rhs):
    """One exact solution of M x = b, or None when inconsistent.

    The solution is the RREF particular solution with free variables 0.
    """
    rows = _as_rows(matrix)
    if len(rows) != len(rhs):
        raise DimensionMismatch(f"{len(rows)} rows vs {len(rhs)} rhs entries")
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [row + [Q(b)] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Q(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][-1]
    return x


def nullspace_basis(matrix):
    """Basis of {x : M x = 0}, from the RREF free columns."""
    rows = _as_rows(matrix)
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def subspace_intersection_dim(u_basis, w_basis) -> int:
    """dim(U ∩ W) = dim U + dim W - dim(U + W), all ranks exact."""
    u_rows = _as_rows(u_basis)
    w_rows = _as_rows(w_basis)
    if u_rows and w_rows and len(u_rows[0]) != len(w_rows[0]):
        raise DimensionMismatch("ambient dimensions differ")
    return rank(u_rows) + rank(w_rows) - rank(u_rows + w_rows)


class RatMatrix:
    """Thin exact-matrix wrapper over the functional toolkit."""

    def __init__(self, entries):
        self.entries = _as_rows(entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0

    def rank(self) -> int:
        return rank(self.entries)

    def solve(self, rhs):
        return solve(self.entries, rhs)

    def nullspace_basis(self):
        return nullspace_basis(self.entries)

    def rref(self):
        return rref(self.entries)


# -- integer rank engine ---------------------------------------------------

def _normalize(col):
    g = 0
    for x in col:
        g = gcd(g, abs(x))
        if g == 1:
            return col
    if g > 1:
        return [x // g for x in col]
    return col


def _kernel_update(kernel, residual):
    """Shrink a right-kernel basis by the hyperplane residual . x = 0.

    ``kernel`` is a list of integer columns K_i with basis . K_i = 0 and
    ``residual`` the vector (row . K_i) of the one new independent row; the
    pivot is chosen with smallest nonzero magnitude to slow entry growth.
    """
    piv = None
    for i, u in enumerate(residual):
        if u and (piv is None or abs(u) < abs(residual[piv])):
            piv = i
    up = residual[piv]
    kp = kernel[piv]
    out = []
    for i, (u, col) in enumerate(zip(residual, kernel)):
        if i == piv:
            continue
        if u == 0:
            out.append(col)
        else:
            out.append(_normalize([up * a - u * b for a, b in zip(col, kp)]))
    return out


def _residuals(block, kernel):
    """Exact block . K as numpy int64 when safe, else python ints."""
    if not kernel:
        return None
    w = len(kernel[0])
    kmax = max((max(abs(x) for x in col) for col in kernel), default=0)
    mmax = int(np.abs(block).max(initial=0))
    if kmax and mmax and w * kmax * mmax < 2**62:
        K = np.array(kernel, dtype=np.int64).T
        return np.asarray(block, dtype=np.int64) @ K
    K = list(map(list, zip(*kernel)))  # w x d, python ints
    return [[sum(int(r) * k for r, k in zip(row, kcol)) for kcol in kernel]
            for row in block]


def int_rank(matrix) -> int:
    """Exact rank of an integer matrix (rows may be any count, entries small).

    Maintains an integer basis of the right kernel; every processed row is
    either certified to lie in the current row space (residual 0 against the
    kernel) or used to shrink the kernel by one dimension.  Equivalent to
    rational elimination, arranged so certification runs as integer matmuls.
    """
    M = np.asarray(matrix)
    if M.ndim != 2:
        raise DimensionMismatch("need a 2-d matrix")
    nrows, w = M.shape
    if nrows == 0 or w == 0:
        return 0
    kernel = [[1 if i == j else 0 for i in range(w)] for j in range(w)]
    rnk = 0
    start = 0
    # warm-up: single rows, most of the rank is found here
    warm = min(nrows, 2 * w + 16)
    for i in range(warm):
        if not kernel:
            return w
        res = _residuals(M[i : i + 1], kernel)
        row_res = [int(x) for x in res[0]]
        if any(row_res):
            kernel = _kernel_update(kernel, row_res)
            rnk += 1
    start = warm
    while start < nrows and kernel:
        res = _residuals(M[start:], kernel)
        if isinstance(res, list):
            nz = next((i for i, row in enumerate(res) if any(row)), None)
            first_res = res[nz] if nz is not None else None
        else:
            nzmask = np.any(res != 0, axis=1)
            nz = int(np.argmax(nzmask)) if bool(nzmask.any()) else None
            first_res = [int(x) for x in res[nz]] if nz is not None else None
        if nz is None:
            return rnk
        kernel = _kernel_update(kernel, first_res)
        rnk += 1
        start = start + nz + 1
    return rnk if kernel else w


def int_matrix_rank_pair(a, b) -> tuple[int, int, int]:
    """(rank A, rank B, rank [A | B]) for integer blocks with equal row count."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[0] != b.shape[0]:
        raise DimensionMismatch("row counts differ")
    return int_rank(a), int_rank(b), int_rank(np.hstack([a, b]))
