# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels over F_p.

Matrices are C-contiguous int64 arrays with entries in 0..p-1 and p < 2^31,
so every product of two residues fits in a signed 64-bit integer.  Both
functions overwrite their input.
"""

from libc.stdint cimport int64_t


cdef inline int64_t _inv(int64_t a, int64_t p) nogil:
    # extended Euclid; a is a nonzero residue
    cdef int64_t t = 0, newt = 1, r = p, newr = a, quo, tmp
    while newr != 0:
        quo = r // newr
        tmp = t - quo * newt
        t = newt
        newt = tmp
        tmp = r - quo * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef inline int64_t _mod(int64_t x, int64_t p, double pinv) nogil:
    # x in [0, 2^62]; the float quotient is off by at most one
    cdef int64_t r = x - <int64_t>(<double>x * pinv) * p
    if r < 0:
        r += p
    elif r >= p:
        r -= p
    return r


cdef Py_ssize_t _eliminate(int64_t[:, ::1] a, int64_t p, bint full, Py_ssize_t* pivots) nogil:
    cdef Py_ssize_t nrows = a.shape[0], ncols = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t inv, f, tmp
    cdef int64_t* prow
    cdef int64_t* irow
    cdef double pinv = 1.0 / <double>p
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, ncols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        if a[r, c] != 1:
            inv = _inv(a[r, c], p)
            for j in range(c, ncols):
                a[r, j] = _mod(a[r, j] * inv, p, pinv)
        for i in range(0 if full else r + 1, nrows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            f = p - f
            prow = &a[r, 0]
            irow = &a[i, 0]
            for j in range(c, ncols):
                if prow[j] != 0:
                    irow[j] = _mod(irow[j] + f * prow[j], p, pinv)
        pivots[r] = c
        r += 1
    return r


def rank_dense(int64_t[:, ::1] a, int64_t p):
    """Rank of ``a`` over F_p by forward elimination (destroys ``a``)."""
    cdef Py_ssize_t n = min(a.shape[0], a.shape[1])
    cdef Py_ssize_t r
    cdef Py_ssize_t[::1] piv
    if n == 0:
        return 0
    import numpy as np
    piv = np.zeros(n, dtype=np.intp)
    with nogil:
        r = _eliminate(a, p, False, &piv[0])
    return int(r)


def rref_dense(int64_t[:, ::1] a, int64_t p):
    """Reduce ``a`` in place to reduced row echelon form; return pivot columns."""
    cdef Py_ssize_t n = min(a.shape[0], a.shape[1])
    cdef Py_ssize_t r, k
    cdef Py_ssize_t[::1] piv
    if n == 0:
        return []
    import numpy as np
    piv = np.zeros(n, dtype=np.intp)
    with nogil:
        r = _eliminate(a, p, True, &piv[0])
    return [int(piv[k]) for k in range(r)]
