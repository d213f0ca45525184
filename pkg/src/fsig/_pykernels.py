"""Fallback elimination kernels written with numpy row operations.

Same contract as the compiled ``_kernels`` module: int64 C-contiguous input
with residues in ``0..p-1``, overwritten in place.
"""

import numpy as np


def _eliminate(a, p, full):
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], c:] = a[[piv, r], c:]
        lead = int(a[r, c])
        if lead != 1:
            a[r, c:] = a[r, c:] * pow(lead, -1, p) % p
        lo = 0 if full else r + 1
        col = a[lo:, c].copy()
        if full:
            col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            rows = hit + lo
            factors = (p - a[rows, c])[:, None]
            a[rows, c:] = (a[rows, c:] + factors * a[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def rank_dense(a, p):
    if min(a.shape) == 0:
        return 0
    return len(_eliminate(a, int(p), False))


def rref_dense(a, p):
    if min(a.shape) == 0:
        return []
    return _eliminate(a, int(p), True)
