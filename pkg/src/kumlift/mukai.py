"""Mukai lattices ``V_A = H^1(A) + H^1(A^)`` and their block maps.

Two kinds of matrices live here.

* :class:`BlockHom` is a homomorphism ``A x A^ -> A' x A'^`` stored on H_1,
  with blocks ``g1: A->A'``, ``g2: A^->A'``, ``g3: A->A'^``, ``g4: A^->A'^``.
* :class:`BlockIso` is a map of Mukai lattices (H^1 level), with blocks
  ``F1: H^1(A)->H^1(A')``, ``F2: H^1(A^)->H^1(A')``, ``F3: H^1(A)->H^1(A'^)``,
  ``F4: H^1(A^)->H^1(A'^)``.

The two are related by ``F = g^{-T}`` (pushforward on cohomology).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from kumlift.linalg import Check, RatMatrix
from kumlift.torus import ComplexTorus, TorusHom, dual_hom, dual_torus

# Sign of the identification of the double dual lattice with the original
# one.  Fixed by calibrate_epsilon(); kept overridable for mutation tests.
EPSILON = -1

LEGEND = ("H1(A)", "H1(A^)")


class MukaiError(ValueError):
    pass


def _eps(eps: int | None) -> int:
    return EPSILON if eps is None else eps


def hyperbolic_gram(r: int) -> RatMatrix:
    I, Z = RatMatrix.identity(r), RatMatrix.zeros(r, r)
    return RatMatrix.blocks([[Z, I], [I, Z]])


@dataclass(frozen=True)
class MukaiSpace:
    base: ComplexTorus

    @property
    def dual(self) -> ComplexTorus:
        return dual_torus(self.base)

    @property
    def rank(self) -> int:
        return 2 * self.base.rank

    @property
    def half(self) -> int:
        return self.base.rank

    @property
    def gram(self) -> RatMatrix:
        return hyperbolic_gram(self.half)

    @property
    def J(self) -> RatMatrix:
        # H^1 carries the transposed structures of the H_1 lattices.
        return RatMatrix.block_diag(self.base.J.T, self.dual.J.T)

    @property
    def legend(self) -> tuple[str, str]:
        return LEGEND


def mukai_space(T: ComplexTorus) -> MukaiSpace:
    return MukaiSpace(T)


def _split(F: RatMatrix, r: int, c: int) -> tuple[RatMatrix, RatMatrix, RatMatrix, RatMatrix]:
    return (F.block(0, r, 0, c), F.block(0, r, c, F.cols),
            F.block(r, F.rows, 0, c), F.block(r, F.rows, c, F.cols))


@dataclass(frozen=True)
class BlockIso:
    source: MukaiSpace
    target: MukaiSpace
    F: RatMatrix

    def __post_init__(self):
        if self.F.shape != (self.target.rank, self.source.rank):
            raise MukaiError(f"matrix is {self.F.rows}x{self.F.cols}, legend needs "
                             f"{self.target.rank}x{self.source.rank}")

    @property
    def blocks(self) -> tuple[RatMatrix, RatMatrix, RatMatrix, RatMatrix]:
        return _split(self.F, self.target.half, self.source.half)

    F1 = property(lambda self: self.blocks[0])
    F2 = property(lambda self: self.blocks[1])
    F3 = property(lambda self: self.blocks[2])
    F4 = property(lambda self: self.blocks[3])

    def __matmul__(self, other: "BlockIso") -> "BlockIso":
        return compose(self, other)

    def inverse(self) -> "BlockIso":
        return invert(self)

    def is_integral(self) -> bool:
        return self.F.is_integral()


def identity_iso(V: MukaiSpace) -> BlockIso:
    return BlockIso(V, V, RatMatrix.identity(V.rank))


def compose(F: BlockIso, G: BlockIso) -> BlockIso:
    """``F o G``."""
    if G.target != F.source:
        raise MukaiError("legends do not compose")
    return BlockIso(G.source, F.target, F.F @ G.F)


def invert(F: BlockIso) -> BlockIso:
    return BlockIso(F.target, F.source, F.F.inverse())


def _basis_vector(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(k == i)) for k in range(n))


def is_isometry(F: BlockIso) -> Check:
    """``F^T S' F == S``; the witness is a pair of basis indices whose pairing moves."""
    lhs = F.F.T @ F.target.gram @ F.F
    rhs = F.source.gram
    for i in range(lhs.rows):
        for j in range(lhs.cols):
            if lhs[i, j] != rhs[i, j]:
                return Check(False, witness={"pair": (i, j), "before": rhs[i, j], "after": lhs[i, j]})
    return Check(True)


def is_hodge(F: BlockIso) -> Check:
    lhs = F.F @ F.source.J
    rhs = F.target.J @ F.F
    for j in range(lhs.cols):
        if lhs.col(j) != rhs.col(j):
            return Check(False, witness={"column": j, "FJ": lhs.col(j), "JF": rhs.col(j)})
    return Check(True)


def is_special(F: BlockIso) -> Check:
    d = F.F.det()
    return Check(d == 1, witness=None if d == 1 else {"det": d}, value=d)


# H_1 block homomorphisms

@dataclass(frozen=True)
class BlockHom:
    """``A x A^ -> A' x A'^`` on H_1."""

    source: ComplexTorus
    target: ComplexTorus
    g: RatMatrix

    def __post_init__(self):
        n = 2 * self.source.rank
        m = 2 * self.target.rank
        if self.g.shape != (m, n):
            raise MukaiError(f"assembly must be {m}x{n}, got {self.g.rows}x{self.g.cols}")

    @property
    def blocks(self) -> tuple[RatMatrix, RatMatrix, RatMatrix, RatMatrix]:
        return _split(self.g, self.target.rank, self.source.rank)

    g1 = property(lambda self: self.blocks[0])
    g2 = property(lambda self: self.blocks[1])
    g3 = property(lambda self: self.blocks[2])
    g4 = property(lambda self: self.blocks[3])

    def homs(self) -> tuple[TorusHom, TorusHom, TorusHom, TorusHom]:
        A, Ah = self.source, dual_torus(self.source)
        B, Bh = self.target, dual_torus(self.target)
        g1, g2, g3, g4 = self.blocks
        return (TorusHom(A, B, g1), TorusHom(Ah, B, g2), TorusHom(A, Bh, g3), TorusHom(Ah, Bh, g4))

    def __matmul__(self, other: "BlockHom") -> "BlockHom":
        if other.target != self.source:
            raise MukaiError("assemblies do not compose")
        return BlockHom(other.source, self.target, self.g @ other.g)

    def inverse(self) -> "BlockHom":
        return BlockHom(self.target, self.source, self.g.inverse())


def assemble(g1: TorusHom, g2: TorusHom, g3: TorusHom, g4: TorusHom) -> BlockHom:
    A, B = g1.source, g1.target
    Ah, Bh = dual_torus(A), dual_torus(B)
    expected = [(A, B), (Ah, B), (A, Bh), (Ah, Bh)]
    for k, (f, (s, t)) in enumerate(zip((g1, g2, g3, g4), expected), start=1):
        if f.source != s or f.target != t:
            raise MukaiError(f"block g{k} has the wrong source or target")
    return BlockHom(A, B, RatMatrix.blocks([[g1.M, g2.M], [g3.M, g4.M]]))


def identity_block(A: ComplexTorus) -> BlockHom:
    return BlockHom(A, A, RatMatrix.identity(2 * A.rank))


def block_from_matrices(A: ComplexTorus, B: ComplexTorus, g1, g2, g3, g4) -> BlockHom:
    return BlockHom(A, B, RatMatrix.blocks([[g1, g2], [g3, g4]]))


def is_complex_linear(g: BlockHom) -> Check:
    """Each block commutes with the complex structures of its endpoints."""
    JS = RatMatrix.block_diag(g.source.J, dual_torus(g.source).J)
    JT = RatMatrix.block_diag(g.target.J, dual_torus(g.target).J)
    lhs, rhs = g.g @ JS, JT @ g.g
    for j in range(lhs.cols):
        if lhs.col(j) != rhs.col(j):
            return Check(False, witness={"column": j})
    return Check(True)


def hat_matrix(g: BlockHom, eps: int | None = None) -> RatMatrix:
    """``(g4^, -g2^; -g3^, g1^)`` with the double-dual sign folded in.

    Dualizing a block that leaves from (or lands in) a dual torus passes
    through the double-dual identification once, which contributes ``eps``;
    g2^ and g3^ pass through it once, g1^ and g4^ zero or two times.
    """
    e = _eps(eps)
    h1, h2, h3, h4 = (dual_hom(f).M for f in g.homs())
    return RatMatrix.blocks([[h4, h2.scale(-e)], [h3.scale(-e), h1]])


def is_symplectic_hat(g: BlockHom, eps: int | None = None) -> Check:
    if not g.g.is_square():
        raise MukaiError("assembly is not square")
    if g.g.det() == 0:
        raise MukaiError("assembly is not invertible")
    inv = g.g.inverse()
    hat = hat_matrix(g, eps)
    for i in range(inv.rows):
        for j in range(inv.cols):
            if inv[i, j] != hat[i, j]:
                return Check(False, witness={"entry": (i, j), "inverse": inv[i, j], "hat": hat[i, j]})
    return Check(True)


def mukai_action(g: BlockHom) -> BlockIso:
    """Induced map on H^1 for any invertible assembly: ``g^{-T}``."""
    return BlockIso(mukai_space(g.source), mukai_space(g.target), g.g.inverse().T)


def orlov_iso_of_sp(g: BlockHom, eps: int | None = None) -> BlockIso:
    if not is_symplectic_hat(g, eps):
        raise MukaiError("assembly is not symplectic")
    return mukai_action(g)


def assembly_of_iso(F: BlockIso) -> BlockHom:
    """Inverse of :func:`mukai_action`."""
    return BlockHom(F.source.base, F.target.base, F.F.inverse().T)


# reference maps

def phi_P(B: ComplexTorus, eps: int | None = None) -> BlockIso:
    """The Poincare-bundle map ``V_B -> V_{B^}``, matrix ``(0, -I; I, 0)``.

    The lower-left block lands in ``H^1`` of the double dual of B, so it is
    read through the double-dual sign.
    """
    e = _eps(eps)
    r = B.rank
    I, Z = RatMatrix.identity(r), RatMatrix.zeros(r, r)
    F = RatMatrix.blocks([[Z, -I], [I.scale(e), Z]])
    return BlockIso(mukai_space(B), mukai_space(dual_torus(B)), F)


def unipotent_upper(A: ComplexTorus, X: RatMatrix) -> BlockHom:
    """``[[I, X], [0, I]]`` on H_1."""
    r = A.rank
    return block_from_matrices(A, A, RatMatrix.identity(r), X, RatMatrix.zeros(r, r), RatMatrix.identity(r))


def unipotent_lower(A: ComplexTorus, Y: RatMatrix) -> BlockHom:
    r = A.rank
    return block_from_matrices(A, A, RatMatrix.identity(r), RatMatrix.zeros(r, r), Y, RatMatrix.identity(r))


def diagonal_block(f: TorusHom) -> BlockHom:
    """``diag(f, (f^)^{-1})`` for an isomorphism f."""
    r, c = f.target.rank, f.source.rank
    fh_inv = dual_hom(f).M.inverse()
    return block_from_matrices(f.source, f.target, f.M, RatMatrix.zeros(r, c),
                               RatMatrix.zeros(r, c), fh_inv)


def calibrate_epsilon() -> int:
    """The unique sign making the Poincare map both symplectic and an isometry."""
    from kumlift.torus import elliptic_curve

    E = elliptic_curve()
    good = []
    for e in (1, -1):
        F = phi_P(E, e)
        g = assembly_of_iso(F)
        if is_symplectic_hat(g, e) and is_isometry(F):
            good.append(e)
    if len(good) != 1:
        raise MukaiError(f"calibration is not unique: {good}")
    return good[0]
