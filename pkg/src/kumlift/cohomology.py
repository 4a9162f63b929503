"""Exterior-algebra model of ``H^*`` of a torus and the Poincare map phi.

``H^*(A)`` is the exterior algebra on ``H^1(A)`` (dual coordinates) and
``H^*(A^)`` the exterior algebra on the lattice of A itself.  Degree-m bases
are the m-subsets of ``{0..2g-1}`` in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from kumlift.linalg import Check, RatMatrix
from kumlift.torus import ComplexTorus, TorusHom, dual_hom, dual_torus, isogeny_degree


@dataclass(frozen=True)
class ExteriorAlgebra:
    base: ComplexTorus

    @property
    def n(self) -> int:
        return self.base.rank

    def basis(self, m: int) -> list[tuple[int, ...]]:
        return list(combinations(range(self.n), m))

    def rank(self, m: int) -> int:
        return comb(self.n, m)

    @property
    def total_rank(self) -> int:
        return 2 ** self.n


def _sort_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def wedge_basis(S: tuple[int, ...], T: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """``e_S ^ e_T = sign * e_U``; sign 0 when S and T overlap."""
    if set(S) & set(T):
        return 0, ()
    return _sort_sign(S + T), tuple(sorted(S + T))


def wedge(alg: ExteriorAlgebra, x: RatMatrix, p: int, y: RatMatrix, q: int) -> RatMatrix:
    """Wedge of a degree-p and a degree-q coordinate column."""
    index = {U: k for k, U in enumerate(alg.basis(p + q))}
    out = [Fraction(0)] * alg.rank(p + q)
    for a, S in zip(x.entries, alg.basis(p)):
        if not a:
            continue
        for b, T in zip(y.entries, alg.basis(q)):
            if not b:
                continue
            s, U = wedge_basis(S, T)
            if s:
                out[index[U]] += s * a * b
    return RatMatrix.column(out)


@dataclass(frozen=True)
class GradedMap:
    """Per-degree blocks; degree m of the source lands in degree ``m + shift(m)``."""

    source: ExteriorAlgebra
    target: ExteriorAlgebra
    blocks: tuple[RatMatrix, ...]
    reverses_degree: bool = False

    def target_degree(self, m: int) -> int:
        return self.source.n - m if self.reverses_degree else m

    def __getitem__(self, m: int) -> RatMatrix:
        return self.blocks[m]

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        blocks = tuple(self.blocks[other.target_degree(m)] @ other.blocks[m] for m in range(len(other.blocks)))
        return GradedMap(other.source, self.target, blocks, self.reverses_degree != other.reverses_degree)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, tuple(b.scale(c) for b in self.blocks), self.reverses_degree)


def induced_pullback(f: TorusHom) -> GradedMap:
    """``f^*: H^*(target) -> H^*(source)``; degree m is the m-th exterior power of ``M^T``."""
    Mt = f.M.T
    n = f.target.rank
    if f.source.rank != n:
        raise ValueError("pullback between tori of different rank is not graded-square")
    blocks = tuple(Mt.exterior_power(m) for m in range(n + 1))
    return GradedMap(ExteriorAlgebra(f.target), ExteriorAlgebra(f.source), blocks)


def pd_sign(m: int) -> int:
    return -1 if (m * (m + 1) // 2) % 2 else 1


def poincare_phi(T: ComplexTorus, flip_degrees: frozenset[int] = frozenset()) -> GradedMap:
    """Signed Poincare duality ``H^m(T) -> H^{2g-m}(T^)``.

    ``flip_degrees`` negates the chosen degrees; it exists for mutation tests.
    """
    alg = ExteriorAlgebra(T)
    n = alg.n
    full = set(range(n))
    blocks = []
    for m in range(n + 1):
        src = alg.basis(m)
        tgt = {U: k for k, U in enumerate(alg.basis(n - m))}
        sign = pd_sign(m) * (-1 if m in flip_degrees else 1)
        entries = [0] * (len(tgt) * len(src))
        for j, S in enumerate(src):
            C = tuple(sorted(full - set(S)))
            entries[tgt[C] * len(src) + j] = sign * _sort_sign(S + C)
        blocks.append(RatMatrix(len(tgt), len(src), entries))
    return GradedMap(alg, ExteriorAlgebra(dual_torus(T)), tuple(blocks), reverses_degree=True)


def pd_square_sides(q: TorusHom, flip_degrees: frozenset[int] = frozenset()) -> tuple[GradedMap, GradedMap]:
    """``(deg(q) phi_A, q^* o phi_B o q^*)`` for an isogeny ``q: B -> A``."""
    deg = isogeny_degree(q)
    lhs = poincare_phi(q.target, flip_degrees).scale(deg)
    rhs = induced_pullback(dual_hom(q)) @ poincare_phi(q.source) @ induced_pullback(q)
    return lhs, rhs


def check_pd_square(q: TorusHom, flip_degrees: frozenset[int] = frozenset()) -> Check:
    lhs, rhs = pd_square_sides(q, flip_degrees)
    for m, (L, R) in enumerate(zip(lhs.blocks, rhs.blocks)):
        if L != R:
            for idx, (a, b) in enumerate(zip(L.entries, R.entries)):
                if a != b:
                    return Check(False, witness={"degree": m, "index": divmod(idx, L.cols), "lhs": a, "rhs": b})
    return Check(True)


def degree_from_top(f: TorusHom) -> int:
    """``|det|`` read off the top-degree block of ``f^*``."""
    top = induced_pullback(f).blocks[-1]
    return abs(top[0, 0].numerator)
