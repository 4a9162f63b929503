"""Complex tori as (standard lattice, complex structure) pairs.

A torus of dimension g is ``R^{2g} / Z^{2g}`` with a rational complex
structure J acting on H_1.  All basis choices live in the maps between tori;
a :class:`TorusHom` stores the matrix of the H_1 pushforward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from kumlift.linalg import (
    FiniteAbelianGroup,
    RatMatrix,
    finite_quotient,
    integer_kernel,
    lattice_solve,
    reduce_mod1,
)


class TorusError(ValueError):
    pass


J0 = RatMatrix.from_rows([[0, -1], [1, 0]])


@dataclass(frozen=True)
class ComplexTorus:
    g: int
    J: RatMatrix
    label: str = field(default="T", compare=False)

    @property
    def rank(self) -> int:
        return 2 * self.g

    def __repr__(self):
        return f"ComplexTorus({self.label!r}, g={self.g})"


def make_torus(g: int, J: RatMatrix, label: str = "T") -> ComplexTorus:
    if not isinstance(g, int) or g < 1:
        raise TorusError(f"dimension must be a positive integer, got {g!r}")
    if J.shape != (2 * g, 2 * g):
        raise TorusError(f"complex structure must be {2 * g}x{2 * g}, got {J.rows}x{J.cols}")
    if J @ J != -RatMatrix.identity(2 * g):
        raise TorusError("complex structure does not square to -I")
    return ComplexTorus(g, J, label)


def elliptic_curve(label: str = "E") -> ComplexTorus:
    return make_torus(1, J0, label)


def dual_torus(T: ComplexTorus) -> ComplexTorus:
    # -J^T, not J^T: only this choice makes the hyperbolic pairing J-invariant
    # on H^1(T) + H^1(T^).  Note -(-J^T)^T = J, so the double dual is T again.
    return ComplexTorus(T.g, -T.J.T, _dual_label(T.label))


def _dual_label(label: str) -> str:
    return label[:-1] if label.endswith("^") else label + "^"


def product_torus(tori: Sequence[ComplexTorus], label: str | None = None) -> ComplexTorus:
    if not tori:
        raise TorusError("empty product")
    J = RatMatrix.block_diag(*(t.J for t in tori))
    return ComplexTorus(sum(t.g for t in tori), J, label or "x".join(t.label for t in tori))


@dataclass(frozen=True)
class TorusHom:
    """Homomorphism S -> T given by its matrix on H_1 (target x source)."""

    source: ComplexTorus
    target: ComplexTorus
    M: RatMatrix

    @property
    def integral(self) -> bool:
        return self.M.is_integral()

    def __matmul__(self, other: "TorusHom") -> "TorusHom":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise TorusError(f"cannot compose {self.source} <- {other.target}")
        return TorusHom(other.source, self.target, self.M @ other.M)

    def __add__(self, other: "TorusHom") -> "TorusHom":
        if (self.source, self.target) != (other.source, other.target):
            raise TorusError("cannot add homomorphisms with different endpoints")
        return TorusHom(self.source, self.target, self.M + other.M)

    def __neg__(self) -> "TorusHom":
        return TorusHom(self.source, self.target, -self.M)

    def scale(self, c) -> "TorusHom":
        return TorusHom(self.source, self.target, self.M.scale(c))

    def inverse(self) -> "TorusHom":
        return TorusHom(self.target, self.source, self.M.inverse())


def commutes_with_structures(S: ComplexTorus, T: ComplexTorus, M: RatMatrix) -> bool:
    return M @ S.J == T.J @ M


def make_hom(S: ComplexTorus, T: ComplexTorus, M: RatMatrix) -> TorusHom:
    if M.shape != (T.rank, S.rank):
        raise TorusError(f"matrix must be {T.rank}x{S.rank}, got {M.rows}x{M.cols}")
    if not commutes_with_structures(S, T, M):
        raise TorusError("matrix is not complex-linear (M J_S != J_T M)")
    return TorusHom(S, T, M)


def identity_hom(T: ComplexTorus) -> TorusHom:
    return TorusHom(T, T, RatMatrix.identity(T.rank))


def zero_hom(S: ComplexTorus, T: ComplexTorus) -> TorusHom:
    return TorusHom(S, T, RatMatrix.zeros(T.rank, S.rank))


def multiplication_hom(T: ComplexTorus, n) -> TorusHom:
    return TorusHom(T, T, RatMatrix.scalar(T.rank, n))


def dual_hom(f: TorusHom) -> TorusHom:
    return TorusHom(dual_torus(f.target), dual_torus(f.source), f.M.T)


def is_isogeny(f: TorusHom) -> bool:
    return f.integral and f.M.is_square() and f.M.det() != 0


def isogeny_degree(f: TorusHom) -> int:
    if not is_isogeny(f):
        raise TorusError("not an isogeny (needs an integral square matrix with nonzero determinant)")
    return abs(f.M.det().numerator)


def hom_basis(S: ComplexTorus, T: ComplexTorus) -> list[RatMatrix]:
    """Z-basis of the integral matrices M with M J_S = J_T M."""
    r, c = T.rank, S.rank
    # Linear map vec(X) -> vec(X J_S - J_T X) on row-major vec.
    rows = []
    for i in range(r):
        for j in range(c):
            row = [Fraction(0)] * (r * c)
            for k in range(c):
                row[i * c + k] += S.J[k, j]
            for k in range(r):
                row[k * c + j] -= T.J[i, k]
            rows.append(row)
    K = integer_kernel(RatMatrix.from_rows(rows))
    return [RatMatrix(r, c, K.col(j)) for j in range(K.cols)]


# torsion points

@dataclass(frozen=True)
class TorsionPoint:
    torus: ComplexTorus
    v: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return lcm(*(x.denominator for x in self.v)) if self.v else 1

    def is_zero(self) -> bool:
        return not any(self.v)

    def column(self) -> RatMatrix:
        return RatMatrix.column(self.v)

    def __add__(self, other: "TorsionPoint") -> "TorsionPoint":
        return torsion_point(self.torus, [a + b for a, b in zip(self.v, other.v)])

    def __neg__(self) -> "TorsionPoint":
        return torsion_point(self.torus, [-a for a in self.v])


def torsion_point(T: ComplexTorus, v) -> TorsionPoint:
    if isinstance(v, RatMatrix):
        v = v.entries
    v = tuple(reduce_mod1(Fraction(x)) for x in v)
    if len(v) != T.rank:
        raise TorusError(f"point needs {T.rank} coordinates, got {len(v)}")
    return TorsionPoint(T, v)


def zero_point(T: ComplexTorus) -> TorsionPoint:
    return TorsionPoint(T, tuple(Fraction(0) for _ in range(T.rank)))


def apply_hom(f: TorusHom, p: TorsionPoint) -> TorsionPoint:
    if not f.integral:
        raise TorusError("only integral homomorphisms act on points")
    if p.torus != f.source:
        raise TorusError("point does not lie on the source torus")
    return torsion_point(f.target, f.M @ p.column())


def point_preimage(f: TorusHom, p: TorsionPoint) -> TorsionPoint:
    isogeny_degree(f)
    if p.torus != f.target:
        raise TorusError("point does not lie on the target torus")
    return torsion_point(f.source, f.M.inverse() @ p.column())


def kernel_group(f: TorusHom) -> FiniteAbelianGroup:
    """``ker f = M^-1(Z^{2g'}) / Z^{2g}``; generators are in source coordinates."""
    isogeny_degree(f)
    return finite_quotient(f.M.inverse(), RatMatrix.identity(f.source.rank))


def kernel_points(f: TorusHom) -> list[TorsionPoint]:
    return [torsion_point(f.source, g) for g in kernel_group(f).generators]


def group_points(T: ComplexTorus, G: FiniteAbelianGroup) -> list[TorsionPoint]:
    return [torsion_point(T, g) for g in G.generators]


def torsion_subgroup(T: ComplexTorus, n: int) -> FiniteAbelianGroup:
    """``T[n]``."""
    return kernel_group(multiplication_hom(T, n))


# products, summation and N_A

def power_torus(A: ComplexTorus, n: int) -> ComplexTorus:
    return product_torus([A] * n, label=f"{A.label}^{n}")


def summation_hom(A: ComplexTorus, n: int) -> TorusHom:
    if n < 2:
        raise TorusError("summation needs n >= 2")
    row = RatMatrix.hstack(*([RatMatrix.identity(A.rank)] * n))
    return TorusHom(power_torus(A, n), A, row)


def diagonal_hom(A: ComplexTorus, n: int) -> TorusHom:
    col = RatMatrix.vstack(*([RatMatrix.identity(A.rank)] * n))
    return TorusHom(A, power_torus(A, n), col)


def projection_hom(P: ComplexTorus, factors: Sequence[ComplexTorus], index: int) -> TorusHom:
    rows = factors[index].rank
    M = RatMatrix.hstack(*[
        RatMatrix.identity(rows) if i == index else RatMatrix.zeros(rows, f.rank)
        for i, f in enumerate(factors)
    ])
    if M.cols != P.rank:
        raise TorusError("factors do not match the product torus")
    return TorusHom(P, factors[index], M)


def hom_product(*fs: TorusHom) -> TorusHom:
    return TorusHom(product_torus([f.source for f in fs]), product_torus([f.target for f in fs]),
                    RatMatrix.block_diag(*(f.M for f in fs)))


def kernel_subtorus(Sigma: TorusHom, n: int) -> tuple[ComplexTorus, TorusHom]:
    """``N = ker Sigma`` with basis ``u_i = e_i - e_n`` (slotwise, i < n)."""
    if n < 2:
        raise TorusError("N_A needs n >= 2")
    A = Sigma.target
    r = A.rank
    if Sigma.source.rank != n * r:
        raise TorusError("summation source does not have n factors")
    P = RatMatrix.vstack(RatMatrix.identity(n - 1), RatMatrix(1, n - 1, [-1] * (n - 1)))
    incl = RatMatrix.kron(P, RatMatrix.identity(r))
    if not (Sigma.M @ incl).is_zero():
        raise TorusError("basis does not lie in the kernel")
    K = integer_kernel(Sigma.M)
    if K.cols != incl.cols:
        raise TorusError("summation map is not surjective on lattices")
    for j in range(K.cols):
        if lattice_solve(incl, K.column_matrix(j)) is None:
            raise TorusError("kernel basis is not saturated")
    J_N = RatMatrix.block_diag(*([A.J] * (n - 1)))
    N = ComplexTorus(A.g * (n - 1), J_N, f"N_{A.label}")
    return N, make_hom(N, Sigma.source, incl)
