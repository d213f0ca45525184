"""Exact rank and kernel computations over F_p.

A :class:`MatrixFp` picks its storage at construction: a sparse list of
nonzero ``(row, col, value)`` entries when fewer than 10% of the entries are
nonzero, a dense int64 array otherwise.  Dense elimination runs in the
kernels chosen by :mod:`fsig._backend`; sparse elimination works on
dict-of-rows.  Sparse matrices that stay small once their zero rows and
columns are dropped are handed to the dense kernel.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from . import _backend

SPARSE_DENSITY = 0.10
# sparse matrices whose nonzero rows x nonzero columns fit under this many
# entries are eliminated densely in the compiled kernel (128 MiB of int64)
DENSE_LIMIT = 1 << 24


class MatrixFp:
    """Immutable matrix over ``F_p``."""

    __slots__ = ("nrows", "ncols", "prime", "_dense", "_sparse")

    def __init__(self, nrows, ncols, prime, *, dense=None, sparse=None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.prime = int(prime)
        self._dense = dense
        self._sparse = sparse

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], prime: int, ncols: int = None, layout: str = "auto"):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        arr = np.array([[int(v) % prime for v in row] for row in rows], dtype=np.int64).reshape(nrows, ncols)
        return cls._from_array(arr, prime, layout)

    @classmethod
    def _from_array(cls, arr, prime, layout):
        nrows, ncols = arr.shape
        if layout == "auto":
            total = nrows * ncols
            layout = "sparse" if total and np.count_nonzero(arr) < SPARSE_DENSITY * total else "dense"
        if layout == "sparse":
            r, c = np.nonzero(arr)
            entries = tuple(zip(r.tolist(), c.tolist(), arr[r, c].tolist()))
            return cls(nrows, ncols, prime, sparse=entries)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        return cls(nrows, ncols, prime, dense=arr)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable, prime: int, layout: str = "auto"):
        """Build from ``(row, col, value)`` triples; repeated positions are summed."""
        acc = {}
        for r, c, v in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            acc[r, c] = (acc.get((r, c), 0) + int(v)) % prime
        nz = sorted((r, c, v) for (r, c), v in acc.items() if v)
        if layout == "auto":
            total = nrows * ncols
            layout = "sparse" if total and len(nz) < SPARSE_DENSITY * total else "dense"
        if layout == "sparse":
            return cls(nrows, ncols, prime, sparse=tuple(nz))
        arr = np.zeros((nrows, ncols), dtype=np.int64)
        for r, c, v in nz:
            arr[r, c] = v
        arr.setflags(write=False)
        return cls(nrows, ncols, prime, dense=arr)

    @classmethod
    def from_coo(cls, nrows: int, ncols: int, rows, cols, vals, prime: int, layout: str = "auto"):
        """Build from parallel index/value arrays; duplicates are summed."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.int64) % prime
        keys, inverse = np.unique(rows * ncols + cols, return_inverse=True)
        sums = np.zeros(len(keys), dtype=np.int64)
        np.add.at(sums, inverse, vals)
        sums %= prime
        keep = sums != 0
        keys, sums = keys[keep], sums[keep]
        if layout == "auto":
            total = nrows * ncols
            layout = "sparse" if total and len(keys) < SPARSE_DENSITY * total else "dense"
        r, c = np.divmod(keys, ncols) if ncols else (keys, keys)
        if layout == "sparse":
            return cls(nrows, ncols, prime, sparse=tuple(zip(r.tolist(), c.tolist(), sums.tolist())))
        arr = np.zeros((nrows, ncols), dtype=np.int64)
        arr[r, c] = sums
        arr.setflags(write=False)
        return cls(nrows, ncols, prime, dense=arr)

    @property
    def is_sparse(self) -> bool:
        return self._sparse is not None

    def nnz(self) -> int:
        if self.is_sparse:
            return len(self._sparse)
        return int(np.count_nonzero(self._dense))

    def to_array(self) -> np.ndarray:
        if not self.is_sparse:
            return self._dense.copy()
        arr = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for r, c, v in self._sparse:
            arr[r, c] = v
        return arr

    def with_layout(self, layout: str) -> "MatrixFp":
        return MatrixFp._from_array(self.to_array(), self.prime, layout)

    def row_dicts(self) -> list:
        rows = [dict() for _ in range(self.nrows)]
        if self.is_sparse:
            for r, c, v in self._sparse:
                rows[r][c] = v
        else:
            for r, c in zip(*np.nonzero(self._dense)):
                rows[int(r)][int(c)] = int(self._dense[r, c])
        return rows

    def mul_vec(self, v: Sequence[int]) -> list:
        p = self.prime
        out = [0] * self.nrows
        for r, row in enumerate(self.row_dicts()):
            out[r] = sum(val * v[c] for c, val in row.items()) % p
        return out

    def __eq__(self, other):
        if not isinstance(other, MatrixFp):
            return NotImplemented
        return (
            (self.nrows, self.ncols, self.prime) == (other.nrows, other.ncols, other.prime)
            and np.array_equal(self.to_array(), other.to_array())
        )

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"MatrixFp({self.nrows}x{self.ncols}, p={self.prime}, {kind}, nnz={self.nnz()})"


def _sparse_rank(rows: list, p: int) -> int:
    # rows: list of {col: val}; column-by-column elimination, first row as pivot
    by_col = {}
    for i, row in enumerate(rows):
        if row:
            by_col.setdefault(min(row), []).append(i)
    rank = 0
    alive = [dict(r) for r in rows]
    while by_col:
        c = min(by_col)
        idx = sorted(by_col.pop(c))
        piv = alive[idx[0]]
        inv = pow(piv[c], -1, p)
        for i in idx[1:]:
            row = alive[i]
            f = row[c] * inv % p
            for j, v in piv.items():
                nv = (row.get(j, 0) - f * v) % p
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            if row:
                by_col.setdefault(min(row), []).append(i)
        rank += 1
    return rank


def _compressed_dense(M: MatrixFp):
    """Sparse entries scattered into a dense array without zero rows/columns."""
    r = np.fromiter((t[0] for t in M._sparse), dtype=np.int64, count=len(M._sparse))
    c = np.fromiter((t[1] for t in M._sparse), dtype=np.int64, count=len(M._sparse))
    v = np.fromiter((t[2] for t in M._sparse), dtype=np.int64, count=len(M._sparse))
    ur, ri = np.unique(r, return_inverse=True)
    uc, ci = np.unique(c, return_inverse=True)
    if len(ur) * len(uc) > DENSE_LIMIT:
        return None
    arr = np.zeros((len(ur), len(uc)), dtype=np.int64)
    arr[ri, ci] = v
    return arr


def rank_fp(M: MatrixFp, method: str = "auto") -> int:
    """Rank of ``M`` over ``F_p``; deterministic first-nonzero pivoting.

    ``method="sparse"`` forces dict-of-rows elimination on any matrix,
    ``"dense"`` the array kernel; ``"auto"`` follows the storage layout, except
    that small enough sparse matrices are compressed and run densely.
    """
    if M.nrows == 0 or M.ncols == 0:
        return 0
    if method == "sparse":
        return _sparse_rank(M.row_dicts(), M.prime)
    if method == "dense":
        return _backend.rank_dense(M.to_array(), M.prime)
    if M.is_sparse:
        if not M._sparse:
            return 0
        arr = _compressed_dense(M)
        if arr is None:
            return _sparse_rank(M.row_dicts(), M.prime)
        return _backend.rank_dense(arr, M.prime)
    return _backend.rank_dense(M.to_array(), M.prime)


def rref_fp(M: MatrixFp):
    """Reduced row echelon form as ``(array, pivot_columns)``."""
    arr = M.to_array()
    pivots = _backend.rref_dense(arr, M.prime) if M.nrows and M.ncols else []
    return arr, list(pivots)


def kernel_basis_fp(M: MatrixFp) -> list:
    """Basis of the right kernel, one vector per free column in increasing order.

    The vector for free column ``j`` has a 1 in position ``j``, zeros in the
    other free positions, and pivot positions fixed by the echelon form.
    """
    p = M.prime
    arr, pivots = rref_fp(M)
    pivset = set(pivots)
    basis = []
    for j in range(M.ncols):
        if j in pivset:
            continue
        v = [0] * M.ncols
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = int(-arr[i, j]) % p
        basis.append(tuple(v))
    return basis


def thread_count(default: int = 1) -> int:
    """Worker cap from ``FSIG_THREADS`` (at least 1)."""
    raw = os.environ.get("FSIG_THREADS")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def batch_rank(mats: Sequence[MatrixFp], threads: int = None) -> list:
    """Ranks of independent matrices, returned in input order."""
    threads = thread_count() if threads is None else max(1, threads)
    if threads == 1 or len(mats) < 2:
        return [rank_fp(m) for m in mats]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(rank_fp, mats))
