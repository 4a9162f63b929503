"""Lattice shadow of the generalized Kummer construction.

``Sigma: A^n -> A`` sums coordinates, ``N = ker Sigma`` has basis
``u_i = e_i - e_n`` and ``q: N x A -> A^n`` is ``(x, a) -> x + (a, ..., a)``.
A symplectic g of ``A x A^`` acts diagonally on ``A^n``; the equivariant
transport to ``N x A`` is computed in two steps: lift through
multiplication by n (which is where the ``n^2`` divisibility enters) and then
conjugate the diagonal action by the iota of q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import chain

from kumlift.linalg import Check, FiniteAbelianGroup, RatMatrix
from kumlift.lift import IsogenyContext, lift_criterion, make_context, n_context
from kumlift.mukai import (
    BlockHom,
    BlockIso,
    block_from_matrices,
    is_hodge,
    is_isometry,
    is_symplectic_hat,
    mukai_action,
    mukai_space,
    orlov_iso_of_sp,
)
from kumlift.torus import (
    ComplexTorus,
    TorusHom,
    diagonal_hom,
    dual_torus,
    isogeny_degree,
    kernel_group,
    kernel_subtorus,
    power_torus,
    product_torus,
    summation_hom,
    torsion_subgroup,
)


class KummerError(ValueError):
    pass


def _perm_matrix(perm) -> RatMatrix:
    n = len(perm)
    return RatMatrix(n, n, [int(perm[j] == i) for i in range(n) for j in range(n)])


@dataclass(frozen=True)
class KummerSide:
    A: ComplexTorus
    n: int
    An: ComplexTorus
    Sigma: TorusHom
    N: ComplexTorus
    incl: TorusHom
    NxA: ComplexTorus
    q: TorusHom
    ctx: IsogenyContext
    n_ctx: IsogenyContext


def _side(A: ComplexTorus, n: int) -> KummerSide:
    Sigma = summation_hom(A, n)
    N, incl = kernel_subtorus(Sigma, n)
    An = Sigma.source
    NxA = product_torus([N, A], f"{N.label}x{A.label}")
    Q = RatMatrix.hstack(incl.M, diagonal_hom(A, n).M)
    q = TorusHom(NxA, An, Q)
    return KummerSide(A, n, An, Sigma, N, incl, NxA, q, make_context(q), n_context(A, n))


@dataclass(frozen=True)
class KummerContext:
    src: KummerSide
    dst: KummerSide

    @property
    def n(self) -> int:
        return self.src.n

    @property
    def G(self) -> FiniteAbelianGroup:
        return self.src.ctx.G


def make_kummer_context(A: ComplexTorus, A2: ComplexTorus | None = None, n: int = 2,
                        allow_any_dimension: bool = False) -> KummerContext:
    A2 = A if A2 is None else A2
    if n < 2:
        raise KummerError("n must be at least 2")
    if not allow_any_dimension and (A.g != 2 or A2.g != 2):
        raise KummerError("only abelian surfaces are supported (pass allow_any_dimension to override)")
    if A.g != A2.g:
        raise KummerError("tori of different dimension")
    return KummerContext(_side(A, n), _side(A2, n))


def check_kummer_invariants(side: KummerSide) -> Check:
    """Lattice-level facts the construction relies on."""
    n, A = side.n, side.A
    # Sigma o q = n o pr_A
    pr_A = RatMatrix.hstack(RatMatrix.zeros(A.rank, side.N.rank), RatMatrix.identity(A.rank))
    if side.Sigma.M @ side.q.M != pr_A.scale(n):
        return Check(False, witness="Sigma o q != n pr_A")
    expected = n ** (2 * A.g)
    if isogeny_degree(side.q) != expected:
        return Check(False, witness=f"deg q = {isogeny_degree(side.q)}")
    # ker q is generated by ((a,...,a), -a) with a in A[n]
    for a in torsion_subgroup(A, n).ambient_generators():
        x = RatMatrix.vstack(*([a] * (n - 1)), -a)
        if not (side.q.M @ x).is_integral():
            return Check(False, witness={"kernel_point": x.entries})
    if kernel_group(side.q).order != expected:
        return Check(False, witness="ker q has the wrong order")
    An_factors = torsion_subgroup(dual_torus(A), n).invariant_factors
    if side.ctx.G.invariant_factors != An_factors:
        return Check(False, witness={"G": side.ctx.G.invariant_factors, "A^[n]": An_factors})
    return Check(True)


def diag_embed(g: BlockHom, n: int) -> BlockHom:
    I = RatMatrix.identity(n)
    blocks = [RatMatrix.kron(I, b) for b in g.blocks]
    return block_from_matrices(power_torus(g.source, n), power_torus(g.target, n), *blocks)


def kummer_criterion(g: BlockHom, n: int) -> Check:
    """Does g2 send ``(1/n) H_1(A^)`` into ``n H_1(A')``?"""
    n2 = n * n
    g2 = g.g2
    for j in range(g2.cols):
        col = g2.col(j)
        if any(x.numerator % n2 for x in col):
            t = tuple(Fraction(int(k == j), n) for k in range(g2.cols))
            return Check(False, witness={"point": t, "image": tuple(x / n for x in col),
                                         "required": f"in {n}Z"})
    return Check(True)


def transport_and_restrict(kctx: KummerContext, g: BlockHom) -> Check:
    """Transported isometry of ``V_{NxA} -> V_{N'xA'}`` or a witness."""
    if not is_symplectic_hat(g):
        raise KummerError("input is not symplectic")
    s, d = kctx.src, kctx.dst
    F = orlov_iso_of_sp(g)
    gate = lift_criterion(s.n_ctx, F, d.n_ctx)
    if not gate:
        return Check(False, witness={"stage": "n-lift", **gate.witness})
    FD = orlov_iso_of_sp(diag_embed(g, kctx.n))
    step = lift_criterion(s.ctx, FD, d.ctx)
    if not step:
        return Check(False, witness={"stage": "q-transport", **step.witness})
    return Check(True, value=step.value)


def _product_permutation(N: ComplexTorus, A: ComplexTorus) -> list[int]:
    """Coordinates of ``V_{NxA}`` reordered as ``V_N + V_A``."""
    rN, rA = N.rank, A.rank
    # V_{NxA} = H1(N) H1(A) | H1(N^) H1(A^)
    h1N = range(0, rN)
    h1A = range(rN, rN + rA)
    h1Nh = range(rN + rA, 2 * rN + rA)
    h1Ah = range(2 * rN + rA, 2 * (rN + rA))
    return list(chain(h1N, h1Nh, h1A, h1Ah))


def split(F: BlockIso, N: ComplexTorus, A: ComplexTorus, N2: ComplexTorus | None = None,
          A2: ComplexTorus | None = None) -> Check:
    """Read off ``(eta1, eta2)`` when F is block diagonal across ``V_N + V_A``."""
    N2 = N if N2 is None else N2
    A2 = A if A2 is None else A2
    ps = _product_permutation(N, A)
    pt = _product_permutation(N2, A2)
    X = F.F.submatrix(pt, ps)
    rs, rt = 2 * N.rank, 2 * N2.rank
    for i in range(X.rows):
        for j in range(X.cols):
            if (i < rt) != (j < rs) and X[i, j]:
                return Check(False, witness={"entry": (pt[i], ps[j]), "value": X[i, j]})
    eta1 = BlockIso(mukai_space(N), mukai_space(N2), X.block(0, rt, 0, rs))
    eta2 = BlockIso(mukai_space(A), mukai_space(A2), X.block(rt, X.rows, rs, X.cols))
    return Check(True, value=(eta1, eta2))


def kummer_split(kctx: KummerContext, g: BlockHom) -> Check:
    t = transport_and_restrict(kctx, g)
    if not t:
        return t
    F = t.value
    for name, test in (("isometry", is_isometry), ("hodge", is_hodge)):
        if not test(F):
            return Check(False, witness={"failed": name})
    return split(F, kctx.src.N, kctx.src.A, kctx.dst.N, kctx.dst.A)


def eta2_projection_check(kctx: KummerContext, g: BlockHom) -> Check:
    """Is the ``V_A`` leg of the transport equal to ``orlov_iso_of_sp(g)``?"""
    if not kummer_criterion(g, kctx.n):
        raise KummerError("criterion fails; nothing to compare")
    res = kummer_split(kctx, g)
    if not res:
        return res
    eta2 = res.value[1]
    expected = orlov_iso_of_sp(g)
    if eta2.F != expected.F:
        diff = [(i, j) for i in range(eta2.F.rows) for j in range(eta2.F.cols)
                if eta2.F[i, j] != expected.F[i, j]]
        return Check(False, witness={"first_mismatch": diff[0], "mismatches": len(diff)}, value=eta2)
    return Check(True, value=eta2)


def rescaled(g: BlockHom, n: int) -> BlockHom:
    """``g`` with ``g2 -> g2/n`` and ``g3 -> n g3``: conjugation by ``diag(1, n)``."""
    g1, g2, g3, g4 = g.blocks
    return block_from_matrices(g.source, g.target, g1, g2.scale(Fraction(1, n)), g3.scale(n), g4)


def eta2_rescaled_check(kctx: KummerContext, g: BlockHom) -> Check:
    """The ``V_A`` leg of the transport equals the Mukai action of ``rescaled(g, n)``."""
    res = kummer_split(kctx, g)
    if not res:
        return res
    eta2 = res.value[1]
    expected = mukai_action(rescaled(g, kctx.n))
    return Check(eta2.F == expected.F, value=eta2)


def eta1_consistency(kctx: KummerContext, g: BlockHom, eta1: BlockIso) -> Check:
    """Compare the H_1 blocks of eta1 with the diagonal blocks of g along N."""
    n = kctx.n
    h = BlockHom(kctx.src.N, kctx.dst.N, eta1.F.inverse().T)
    e11, e12, e21, e22 = h.blocks
    g1, g2, g3, g4 = (RatMatrix.kron(RatMatrix.identity(n), b) for b in g.blocks)
    inc, inc2 = kctx.src.incl.M, kctx.dst.incl.M
    pr = inc @ (inc.T @ inc).inverse() @ inc.T
    checks = {
        "N -> N'": inc2 @ e11 == g1 @ inc,
        "N^ -> N^'": e22 @ inc.T == inc2.T @ g4,
        "N -> N^'": e21 == inc2.T @ g3 @ inc,
        "N^ -> N'": inc2 @ e12 @ inc.T == pr @ g2,
    }
    bad = [k for k, ok in checks.items() if not ok]
    return Check(not bad, witness=bad or None)


def permutation_action(side: KummerSide, perm) -> tuple[RatMatrix, RatMatrix]:
    """H_1 action of a permutation of factors on ``A^n x (A^n)^`` and ``(NxA) x (NxA)^``."""
    r = side.A.rank
    P = RatMatrix.kron(_perm_matrix(perm), RatMatrix.identity(r))
    on_An = RatMatrix.block_diag(P, P.inverse().T)
    Q = side.q.M
    s = Q.inverse() @ P @ Q
    if not s.is_integral():
        raise KummerError("permutation does not preserve N x A")
    on_NA = RatMatrix.block_diag(s, s.inverse().T)
    return on_An, on_NA


def symmetric_equivariance(kctx: KummerContext, g: BlockHom) -> Check:
    """Adjacent transpositions commute with the diagonal map and its transport."""
    n = kctx.n
    Dg = diag_embed(g, n).g
    t = transport_and_restrict(kctx, g)
    for i in range(n - 1):
        perm = list(range(n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        sA, sNA = permutation_action(kctx.src, perm)
        tA, tNA = permutation_action(kctx.dst, perm)
        if tA @ Dg != Dg @ sA:
            return Check(False, witness={"transposition": (i, i + 1), "map": "diagonal"})
        if t:
            # Mukai lattices transform by the inverse transpose
            gamma = t.value.F
            if tNA.inverse().T @ gamma != gamma @ sNA.inverse().T:
                return Check(False, witness={"transposition": (i, i + 1), "map": "transport"})
    return Check(True)
