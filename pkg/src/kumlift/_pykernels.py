"""Integer matrix kernels, pure Python.

Matrices are flat row-major lists of Python ints.  Every routine here is
exact; the compiled module mirrors these signatures and falls back to them
when an int64 intermediate would overflow.
"""

from itertools import combinations


def matmul(a, b, n, k, m):
    """Product of an n x k and a k x m matrix."""
    out = [0] * (n * m)
    for i in range(n):
        row = a[i * k:(i + 1) * k]
        base = i * m
        for t, x in enumerate(row):
            if x:
                off = t * m
                for j in range(m):
                    y = b[off + j]
                    if y:
                        out[base + j] += x * y
    return out


def det(a, n):
    """Determinant by Bareiss fraction-free elimination."""
    if n == 0:
        return 1
    m = list(a)
    sign = 1
    prev = 1
    for t in range(n - 1):
        p = t
        while p < n and m[p * n + t] == 0:
            p += 1
        if p == n:
            return 0
        if p != t:
            for j in range(n):
                m[t * n + j], m[p * n + j] = m[p * n + j], m[t * n + j]
            sign = -sign
        piv = m[t * n + t]
        for i in range(t + 1, n):
            mit = m[i * n + t]
            for j in range(t + 1, n):
                m[i * n + j] = (piv * m[i * n + j] - mit * m[t * n + j]) // prev
            m[i * n + t] = 0
        prev = piv
    return sign * m[n * n - 1]


def adjugate_solve(a, n):
    """Return (x, d) with a @ x == d * I and d == det(a).

    Fraction-free Gauss-Jordan on the augmented matrix [a | I].  Raises
    ZeroDivisionError for singular input.
    """
    w = 2 * n
    m = [0] * (n * w)
    for i in range(n):
        m[i * w:i * w + n] = a[i * n:(i + 1) * n]
        m[i * w + n + i] = 1
    sign = 1
    prev = 1
    for t in range(n):
        p = t
        while p < n and m[p * w + t] == 0:
            p += 1
        if p == n:
            raise ZeroDivisionError("singular matrix")
        if p != t:
            for j in range(w):
                m[t * w + j], m[p * w + j] = m[p * w + j], m[t * w + j]
            sign = -sign
        piv = m[t * w + t]
        for i in range(n):
            if i == t:
                continue
            mit = m[i * w + t]
            for j in range(w):
                if j == t:
                    continue
                m[i * w + j] = (piv * m[i * w + j] - mit * m[t * w + j]) // prev
            m[i * w + t] = 0
        prev = piv
    # after full elimination the left block is prev * I (up to row sign)
    x = [0] * (n * n)
    for i in range(n):
        x[i * n:(i + 1) * n] = [sign * v for v in m[i * w + n:(i + 1) * w]]
    return x, sign * prev


def exterior_power(a, n, k):
    """k-th exterior power of an n x n matrix in lexicographic subset order."""
    subsets = list(combinations(range(n), k))
    size = len(subsets)
    out = [0] * (size * size)
    if k == 0:
        return [1]
    for r, rows in enumerate(subsets):
        for c, cols in enumerate(subsets):
            sub = [a[i * n + j] for i in rows for j in cols]
            out[r * size + c] = det(sub, k)
    return out
