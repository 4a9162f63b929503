# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer matrix kernels.

Same signatures as ``_pykernels``.  Work is done in int64 with explicit
overflow detection; any overflow (or an input entry outside int64) hands the
call to the pure-Python routine, so results are always exact.
"""

from libc.stdlib cimport malloc, free
from itertools import combinations

from kumlift import _pykernels as _py

cdef extern from *:
    """
    static inline int k_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int k_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int k_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int k_mul(long long a, long long b, long long *r) nogil
    int k_add(long long a, long long b, long long *r) nogil
    int k_sub(long long a, long long b, long long *r) nogil


cdef long long* _load(list xs) except NULL:
    cdef Py_ssize_t i, n = len(xs)
    cdef long long* buf = <long long*> malloc((n if n > 0 else 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            buf[i] = xs[i]
    except OverflowError:
        free(buf)
        raise
    return buf


cdef int _matmul(long long* a, long long* b, long long* out,
                 Py_ssize_t n, Py_ssize_t k, Py_ssize_t m) nogil:
    cdef Py_ssize_t i, t, j
    cdef long long x, p, s
    for i in range(n * m):
        out[i] = 0
    for i in range(n):
        for t in range(k):
            x = a[i * k + t]
            if x == 0:
                continue
            for j in range(m):
                if k_mul(x, b[t * m + j], &p):
                    return 1
                if k_add(out[i * m + j], p, &s):
                    return 1
                out[i * m + j] = s
    return 0


def matmul(list a, list b, Py_ssize_t n, Py_ssize_t k, Py_ssize_t m):
    cdef long long* ca
    cdef long long* cb
    cdef long long* co
    cdef int bad
    try:
        ca = _load(a)
    except OverflowError:
        return _py.matmul(a, b, n, k, m)
    try:
        cb = _load(b)
    except OverflowError:
        free(ca)
        return _py.matmul(a, b, n, k, m)
    co = <long long*> malloc((n * m if n * m > 0 else 1) * sizeof(long long))
    with nogil:
        bad = _matmul(ca, cb, co, n, k, m)
    try:
        if bad:
            return _py.matmul(a, b, n, k, m)
        return [co[i] for i in range(n * m)]
    finally:
        free(ca)
        free(cb)
        free(co)


cdef int _det(long long* m, Py_ssize_t n, long long* res) nogil:
    # Bareiss in place; returns 1 on overflow
    cdef Py_ssize_t t, p, i, j
    cdef long long piv, prev = 1, mit, u, v, w, tmp
    cdef int sign = 1
    if n == 0:
        res[0] = 1
        return 0
    for t in range(n - 1):
        p = t
        while p < n and m[p * n + t] == 0:
            p += 1
        if p == n:
            res[0] = 0
            return 0
        if p != t:
            for j in range(n):
                tmp = m[t * n + j]
                m[t * n + j] = m[p * n + j]
                m[p * n + j] = tmp
            sign = -sign
        piv = m[t * n + t]
        for i in range(t + 1, n):
            mit = m[i * n + t]
            for j in range(t + 1, n):
                if k_mul(piv, m[i * n + j], &u):
                    return 1
                if k_mul(mit, m[t * n + j], &v):
                    return 1
                if k_sub(u, v, &w):
                    return 1
                m[i * n + j] = w // prev
            m[i * n + t] = 0
        prev = piv
    res[0] = sign * m[n * n - 1]
    return 0


def det(list a, Py_ssize_t n):
    cdef long long* ca
    cdef long long r = 0
    cdef int bad
    try:
        ca = _load(a)
    except OverflowError:
        return _py.det(a, n)
    with nogil:
        bad = _det(ca, n, &r)
    free(ca)
    if bad:
        return _py.det(a, n)
    return r


cdef int _adjugate(long long* m, Py_ssize_t n, long long* prev_out, int* sign_out) nogil:
    # fraction-free Gauss-Jordan on [a | I] (row width 2n); 1 = overflow, 2 = singular
    cdef Py_ssize_t t, p, i, j, w = 2 * n
    cdef long long piv, prev = 1, mit, u, v, d, tmp
    cdef int sign = 1
    for t in range(n):
        p = t
        while p < n and m[p * w + t] == 0:
            p += 1
        if p == n:
            return 2
        if p != t:
            for j in range(w):
                tmp = m[t * w + j]
                m[t * w + j] = m[p * w + j]
                m[p * w + j] = tmp
            sign = -sign
        piv = m[t * w + t]
        for i in range(n):
            if i == t:
                continue
            mit = m[i * w + t]
            for j in range(w):
                if j == t:
                    continue
                if k_mul(piv, m[i * w + j], &u) or k_mul(mit, m[t * w + j], &v) or k_sub(u, v, &d):
                    return 1
                m[i * w + j] = d // prev
            m[i * w + t] = 0
        prev = piv
    prev_out[0] = prev
    sign_out[0] = sign
    return 0


def adjugate_solve(list a, Py_ssize_t n):
    cdef Py_ssize_t i, j, w = 2 * n
    cdef long long prev = 1
    cdef int sign = 1, status
    cdef long long* ca
    try:
        ca = _load(a)
    except OverflowError:
        return _py.adjugate_solve(a, n)
    cdef long long* m = <long long*> malloc((n * w if n > 0 else 1) * sizeof(long long))
    if m == NULL:
        free(ca)
        raise MemoryError()
    for i in range(n):
        for j in range(n):
            m[i * w + j] = ca[i * n + j]
            m[i * w + n + j] = 1 if i == j else 0
    free(ca)
    with nogil:
        status = _adjugate(m, n, &prev, &sign)
    try:
        if status == 2:
            raise ZeroDivisionError("singular matrix")
        if status == 1:
            return _py.adjugate_solve(a, n)
        return [sign * m[i * w + n + j] for i in range(n) for j in range(n)], sign * prev
    finally:
        free(m)


def exterior_power(list a, Py_ssize_t n, Py_ssize_t k):
    cdef long long* ca
    cdef long long* sub
    cdef long long* out
    cdef long long r = 0
    cdef Py_ssize_t size, ri, ci, x, y, i
    cdef int bad = 0
    if k == 0:
        return [1]
    subsets = list(combinations(range(n), k))
    size = len(subsets)
    try:
        ca = _load(a)
    except OverflowError:
        return _py.exterior_power(a, n, k)
    cdef long long* idx = <long long*> malloc(size * k * sizeof(long long))
    for ri in range(size):
        for x in range(k):
            idx[ri * k + x] = subsets[ri][x]
    sub = <long long*> malloc(k * k * sizeof(long long))
    out = <long long*> malloc(size * size * sizeof(long long))
    with nogil:
        for ri in range(size):
            for ci in range(size):
                for x in range(k):
                    for y in range(k):
                        sub[x * k + y] = ca[idx[ri * k + x] * n + idx[ci * k + y]]
                if _det(sub, k, &r):
                    bad = 1
                    break
                out[ri * size + ci] = r
            if bad:
                break
    try:
        if bad:
            return _py.exterior_power(a, n, k)
        return [out[i] for i in range(size * size)]
    finally:
        free(ca)
        free(idx)
        free(sub)
        free(out)
