"""Exact rational matrices, Smith normal form and lattice arithmetic.

Everything here works over ``fractions.Fraction``; there is no floating
point anywhere in the package.  Lattices are given by bases stored as the
columns of a :class:`RatMatrix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterable, Sequence

from kumlift import kernels


class DimensionError(ValueError):
    pass


class NotIntegralError(ValueError):
    pass


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings such as ``"-3/4"``; reject floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class RatMatrix:
    """Immutable dense matrix of rationals.

    Entries are kept as a flat row-major tuple of Fractions (which are always
    in lowest terms with positive denominator).
    """

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(to_fraction(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise DimensionError(f"{len(entries)} entries for a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = None

    @classmethod
    def _raw(cls, rows, cols, entries):
        obj = cls.__new__(cls)
        obj.rows = rows
        obj.cols = cols
        obj.entries = tuple(entries)
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            raise DimensionError("empty matrix")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), width, [x for r in rows for x in r])

    @classmethod
    def column(cls, values: Sequence) -> "RatMatrix":
        return cls(len(values), 1, values)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls._raw(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls._raw(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def scalar(cls, n: int, c) -> "RatMatrix":
        c = to_fraction(c)
        z = Fraction(0)
        return cls._raw(n, n, [c if i == j else z for i in range(n) for j in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "RatMatrix") -> "RatMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [Fraction(0)] * (rows * cols)
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[(r0 + i) * cols + c0 + j] = b.entries[i * b.cols + j]
            r0 += b.rows
            c0 += b.cols
        return cls._raw(rows, cols, out)

    @classmethod
    def blocks(cls, grid: Sequence[Sequence["RatMatrix"]]) -> "RatMatrix":
        """Assemble a block matrix from a grid of compatible blocks."""
        row_mats = [cls.hstack(*row) for row in grid]
        return cls.vstack(*row_mats)

    @classmethod
    def hstack(cls, *mats: "RatMatrix") -> "RatMatrix":
        rows = mats[0].rows
        if any(m.rows != rows for m in mats):
            raise DimensionError("hstack row mismatch")
        out = []
        for i in range(rows):
            for m in mats:
                out.extend(m.entries[i * m.cols:(i + 1) * m.cols])
        return cls._raw(rows, sum(m.cols for m in mats), out)

    @classmethod
    def vstack(cls, *mats: "RatMatrix") -> "RatMatrix":
        cols = mats[0].cols
        if any(m.cols != cols for m in mats):
            raise DimensionError("vstack column mismatch")
        out = []
        for m in mats:
            out.extend(m.entries)
        return cls._raw(sum(m.rows for m in mats), cols, out)

    @classmethod
    def kron(cls, a: "RatMatrix", b: "RatMatrix") -> "RatMatrix":
        rows, cols = a.rows * b.rows, a.cols * b.cols
        out = [Fraction(0)] * (rows * cols)
        for i in range(a.rows):
            for j in range(a.cols):
                x = a[i, j]
                if not x:
                    continue
                for k in range(b.rows):
                    base = (i * b.rows + k) * cols + j * b.cols
                    for l in range(b.cols):
                        out[base + l] = x * b.entries[k * b.cols + l]
        return cls._raw(rows, cols, out)

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def column_matrix(self, j: int) -> "RatMatrix":
        return RatMatrix._raw(self.rows, 1, self.col(j))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RatMatrix":
        return RatMatrix._raw(len(rows), len(cols),
                              [self.entries[i * self.cols + j] for i in rows for j in cols])

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "RatMatrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    # predicates

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def denominator(self) -> int:
        """Least common denominator of all entries."""
        d = 1
        for e in self.entries:
            if e.denominator != 1:
                d = lcm(d, e.denominator)
        return d

    def _cleared(self) -> tuple[list[int], int]:
        d = self.denominator()
        if d == 1:
            return [e.numerator for e in self.entries], 1
        return [e.numerator * (d // e.denominator) for e in self.entries], d

    def int_entries(self) -> list[int]:
        if not self.is_integral():
            raise NotIntegralError("matrix has non-integral entries")
        return [e.numerator for e in self.entries]

    # arithmetic

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RatMatrix._raw(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return RatMatrix._raw(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "RatMatrix":
        return RatMatrix._raw(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c) -> "RatMatrix":
        c = to_fraction(c)
        return RatMatrix._raw(self.rows, self.cols, [c * a for a in self.entries])

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        a, da = self._cleared()
        b, db = other._cleared()
        prod = kernels.matmul(a, b, self.rows, self.cols, other.cols)
        d = da * db
        if d == 1:
            return RatMatrix._raw(self.rows, other.cols, [Fraction(x) for x in prod])
        return RatMatrix._raw(self.rows, other.cols, [Fraction(x, d) for x in prod])

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix._raw(self.cols, self.rows,
                              [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)])

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        a, d = self._cleared()
        return Fraction(kernels.det(a, self.rows), d ** self.rows)

    def inverse(self) -> "RatMatrix":
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        a, d = self._cleared()
        try:
            adj, det_a = kernels.adjugate_solve(a, self.rows)
        except ZeroDivisionError:
            raise ZeroDivisionError("matrix is singular") from None
        # (M/d)^-1 = d * adj(M) / det(M)
        return RatMatrix._raw(self.rows, self.rows, [Fraction(x * d, det_a) for x in adj])

    def exterior_power(self, k: int) -> "RatMatrix":
        """Matrix of the k-th exterior power in lexicographic subset bases."""
        if not self.is_square():
            raise DimensionError("exterior power of a non-square matrix")
        a, d = self._cleared()
        out = kernels.exterior_power(a, self.rows, k)
        size = len(out)
        side = isqrt(size)
        scale = d ** k
        return RatMatrix._raw(side, side, [Fraction(x, scale) for x in out])

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols}, {[[str(x) for x in r] for r in self.tolist()]})"


def fmt(x: Fraction) -> str:
    """Canonical ``p/q`` (or ``p``) spelling of a rational."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# Smith normal form

@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D in Smith form."""

    M: RatMatrix
    U: RatMatrix
    D: RatMatrix
    V: RatMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i].numerator for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(M: RatMatrix) -> SnfDecomposition:
    """Smith normal form with transforms.

    Pivot: the nonzero entry of smallest absolute value in the remaining
    submatrix, ties broken by lowest row then lowest column.
    """
    if not M.is_integral():
        raise NotIntegralError("Smith normal form needs an integer matrix")
    r, c = M.rows, M.cols
    a = [list(M.int_entries()[i * c:(i + 1) * c]) for i in range(r)]
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < r and t < c and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        if all(a[i][j] == 0 for i in range(t, r) for j in range(t, c)):
            break

    flat = lambda rows: [x for row in rows for x in row]
    return SnfDecomposition(
        M=M,
        U=RatMatrix(r, r, flat(U)),
        D=RatMatrix(r, c, flat(a)),
        V=RatMatrix(c, c, flat(V)),
    )


def is_smith_form(D: RatMatrix) -> bool:
    if not D.is_integral():
        return False
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j and D[i, j]:
                return False
    diag = [D[i, i].numerator for i in range(min(D.rows, D.cols))]
    if any(d < 0 for d in diag):
        return False
    for x, y in zip(diag, diag[1:]):
        if x == 0 and y != 0:
            return False
        if x and y % x:
            return False
    return True


# lattices

def _clear_system(M: RatMatrix, b: RatMatrix) -> tuple[RatMatrix, RatMatrix]:
    d = lcm(M.denominator(), b.denominator())
    return M.scale(d), b.scale(d)


def lattice_solve(M: RatMatrix, b) -> tuple[int, ...] | None:
    """Integer x with ``M @ x == b``, or None when no integral solution exists."""
    if not isinstance(b, RatMatrix):
        b = RatMatrix.column(list(b))
    if b.cols != 1 or b.rows != M.rows:
        raise DimensionError(f"right-hand side {b.shape} does not match {M.shape}")
    Mi, bi = _clear_system(M, b)
    dec = snf(Mi)
    ub = dec.U @ bi
    y = []
    for i in range(M.cols):
        d = dec.D[i, i].numerator if i < M.rows else 0
        v = ub[i, 0] if i < M.rows else Fraction(0)
        if d:
            if v.numerator % d:
                return None
            y.append(v.numerator // d)
        else:
            y.append(0)
    for i in range(M.cols, M.rows):
        if ub[i, 0] != 0:
            return None
    for i in range(min(M.rows, M.cols)):
        if dec.D[i, i] == 0 and ub[i, 0] != 0:
            return None
    x = dec.V @ RatMatrix.column(y)
    return tuple(e.numerator for e in x.entries)


def integer_kernel(M: RatMatrix) -> RatMatrix:
    """Basis (as columns) of the saturated lattice ``{x in Z^n : M x = 0}``."""
    d = M.denominator()
    dec = snf(M.scale(d))
    cols = [j for j in range(M.cols) if j >= M.rows or dec.D[j, j] == 0]
    if not cols:
        return RatMatrix.zeros(M.cols, 0)
    return dec.V.submatrix(range(M.cols), cols)


def _full_rank(B: RatMatrix, name: str):
    if not B.is_square() or B.det() == 0:
        raise DimensionError(f"{name} is not a full-rank square basis")


def sublattice_index(L_basis: RatMatrix, M_basis: RatMatrix) -> int | None:
    """``[L : M]`` when the lattice spanned by M lies inside L, else None."""
    _full_rank(L_basis, "L_basis")
    _full_rank(M_basis, "M_basis")
    if L_basis.rows != M_basis.rows:
        raise DimensionError("bases live in different ambient spaces")
    X = L_basis.inverse() @ M_basis
    if not X.is_integral():
        return None
    return abs(X.det().numerator)


def covolume(basis: RatMatrix) -> Fraction:
    return abs(basis.det())


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """A finite quotient ``L / M`` presented by invariant factors.

    ``generators[i]`` is a rational vector in the coordinates of ``basis``
    (a basis of M), reduced into [0, 1); it has exact order
    ``invariant_factors[i]`` modulo the integer lattice.
    """

    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    basis: RatMatrix

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def ambient_generators(self) -> list[RatMatrix]:
        return [self.basis @ RatMatrix.column(g) for g in self.generators]

    def elements(self) -> list[tuple[Fraction, ...]]:
        """All elements as reduced coordinate vectors (small groups only)."""
        dim = self.basis.cols
        out = [tuple(Fraction(0) for _ in range(dim))]
        for g, d in zip(self.generators, self.invariant_factors):
            out = [tuple(reduce_mod1(x + k * y) for x, y in zip(e, g)) for e in out for k in range(d)]
        return out


def reduce_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def finite_quotient(L_basis: RatMatrix, M_basis: RatMatrix) -> FiniteAbelianGroup:
    """Invariant factors and generator lifts of ``L / M`` for ``M <= L``."""
    _full_rank(L_basis, "L_basis")
    _full_rank(M_basis, "M_basis")
    X = L_basis.inverse() @ M_basis
    if not X.is_integral():
        raise ValueError("M is not contained in L")
    dec = snf(X)
    factors, gens = [], []
    for i, d in enumerate(dec.diagonal):
        if d >= 2:
            factors.append(d)
            gens.append(tuple(reduce_mod1(v / d) for v in dec.V.col(i)))
    return FiniteAbelianGroup(tuple(factors), tuple(gens), M_basis)


@dataclass(frozen=True)
class Check:
    """A verdict with an optional certificate.

    ``witness`` explains a failure; ``value`` carries whatever a success
    produced (a lifted map, a split pair, ...).
    """

    ok: bool
    witness: object = None
    value: object = None

    def __bool__(self) -> bool:
        return self.ok
