"""Equivariant lifting of Mukai-lattice maps along an isogeny.

For an isogeny ``q: B -> A`` the rational isometry
``iota = diag(q^*, (q^^*)^{-1}): V_A -> V_B`` identifies ``V_A`` with the
lift lattice ``L = q^* H^1(A) + H^1(A^)`` inside ``V_B``.  A Hodge isometry F
of ``V_A`` lifts to an equivariant one exactly when ``iota F iota^{-1}`` is
integral; an integral ``gamma`` restricts exactly when it preserves L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from kumlift.linalg import Check, FiniteAbelianGroup, RatMatrix, lattice_solve
from kumlift.mukai import BlockHom, BlockIso, MukaiSpace, is_hodge, is_isometry, is_special, mukai_space
from kumlift.torus import (
    TorsionPoint,
    TorusHom,
    apply_hom,
    dual_hom,
    dual_torus,
    isogeny_degree,
    kernel_group,
    multiplication_hom,
    torsion_point,
    zero_point,
)


class LiftError(ValueError):
    pass


@dataclass(frozen=True)
class IsogenyContext:
    q: TorusHom
    q_hat: TorusHom
    G: FiniteAbelianGroup
    iota: RatMatrix

    @property
    def V_A(self) -> MukaiSpace:
        return mukai_space(self.q.target)

    @property
    def V_B(self) -> MukaiSpace:
        return mukai_space(self.q.source)

    @property
    def lift_lattice(self) -> RatMatrix:
        return self.iota

    @property
    def degree(self) -> int:
        return isogeny_degree(self.q)


def make_context(q: TorusHom) -> IsogenyContext:
    isogeny_degree(q)
    M = q.M
    iota = RatMatrix.block_diag(M.T, M.inverse())
    q_hat = dual_hom(q)
    return IsogenyContext(q, q_hat, kernel_group(q_hat), iota)


def n_context(A, n: int) -> IsogenyContext:
    return make_context(multiplication_hom(A, n))


def _witness_column(X: RatMatrix) -> dict | None:
    for j in range(X.cols):
        col = X.col(j)
        if any(x.denominator != 1 for x in col):
            return {"column": j, "vector": col, "denominator": X.column_matrix(j).denominator()}
    return None


def transport(ctx: IsogenyContext, F: BlockIso, ctx_target: IsogenyContext | None = None) -> RatMatrix:
    """``iota' F iota^{-1}`` as a rational matrix on ``V_B -> V_B'``."""
    ct = ctx_target or ctx
    if F.source != ctx.V_A or F.target != ct.V_A:
        raise LiftError("map does not act on the contexts' Mukai lattices")
    return ct.iota @ F.F @ ctx.iota.inverse()


def lift_criterion(ctx: IsogenyContext, F: BlockIso, ctx_target: IsogenyContext | None = None) -> Check:
    """Lift F to ``V_B``; ``value`` is the lifted BlockIso when it is integral."""
    ct = ctx_target or ctx
    gamma = transport(ctx, F, ct)
    bad = _witness_column(gamma)
    if bad is not None:
        return Check(False, witness=bad)
    return Check(True, value=BlockIso(ctx.V_B, ct.V_B, gamma))


def _containment(outer: RatMatrix, vectors: RatMatrix, label: str) -> dict | None:
    for j in range(vectors.cols):
        v = vectors.column_matrix(j)
        if lattice_solve(outer, v) is None:
            coords = outer.inverse() @ v
            return {"containment": label, "basis_index": j, "vector": v.entries,
                    "coordinates": coords.entries, "denominator": coords.denominator()}
    return None


def preserves_lift_lattice(ctx: IsogenyContext, gamma: BlockIso, ctx_target: IsogenyContext | None = None) -> Check:
    ct = ctx_target or ctx
    L, Lt = ctx.lift_lattice, ct.lift_lattice
    bad = _containment(Lt, gamma.F @ L, "gamma L in L'")
    if bad is None:
        bad = _containment(gamma.F @ L, Lt, "L' in gamma L")
    return Check(bad is None, witness=bad)


def in_G_SO(ctx: IsogenyContext, gamma: BlockIso, ctx_target: IsogenyContext | None = None) -> Check:
    ct = ctx_target or ctx
    if gamma.source != ctx.V_B or gamma.target != ct.V_B:
        raise LiftError("map does not act on the contexts' cover lattices")
    if not gamma.is_integral():
        raise LiftError("membership is defined for integral maps only")
    for name, test in (("isometry", is_isometry), ("hodge", is_hodge), ("special", is_special)):
        c = test(gamma)
        if not c:
            return Check(False, witness={"failed": name, **(c.witness or {})})
    return preserves_lift_lattice(ctx, gamma, ct)


def restrict_res(ctx: IsogenyContext, gamma: BlockIso, ctx_target: IsogenyContext | None = None) -> BlockIso:
    ct = ctx_target or ctx
    member = in_G_SO(ctx, gamma, ct)
    if not member:
        raise LiftError(f"map is not in the equivariant group: {member.witness}")
    F = ct.iota.inverse() @ gamma.F @ ctx.iota
    if not F.is_integral():
        raise AssertionError("restriction of a member is not integral")
    return BlockIso(ctx.V_A, ct.V_A, F)


def n_context_closed_form(n: int, gamma: BlockIso) -> Check:
    """Divisibility test for the lattice ``n H^1(B) + (1/n) H^1(B^)``.

    The upper-right block of gamma and of its inverse must vanish mod n^2.
    """
    if not gamma.is_integral():
        return Check(False, witness={"block": "gamma", "reason": "not integral"})
    n2 = n * n
    inv = gamma.inverse()
    for name, X in (("gamma", gamma), ("gamma^-1", inv)):
        if not X.is_integral():
            return Check(False, witness={"block": name, "reason": "not integral"})
        B2 = X.F2
        for i in range(B2.rows):
            for j in range(B2.cols):
                if B2[i, j].numerator % n2:
                    return Check(False, witness={"block": f"{name}.F2", "entry": (i, j), "value": B2[i, j]})
    return Check(True)


# kernel bookkeeping

@dataclass(frozen=True)
class OrlovKernelElement:
    translation: TorsionPoint
    twist: TorsionPoint
    shift: int = 0


def kernel_maps(ctx: IsogenyContext, k: OrlovKernelElement, direction: Literal["up", "down"]) -> OrlovKernelElement:
    """``up: (b, a, s) -> (b, q^(a), s)``; ``down: (b, a, s) -> (q(b), a, s)``."""
    if direction == "up":
        return OrlovKernelElement(k.translation, apply_hom(ctx.q_hat, k.twist), k.shift)
    if direction == "down":
        return OrlovKernelElement(apply_hom(ctx.q, k.translation), k.twist, k.shift)
    raise LiftError(f"unknown direction {direction!r}")


def kernel_element(ctx: IsogenyContext, translation=None, twist=None, shift: int = 0) -> OrlovKernelElement:
    B, Ah = ctx.q.source, dual_torus(ctx.q.target)
    b = zero_point(B) if translation is None else torsion_point(B, translation)
    a = zero_point(Ah) if twist is None else torsion_point(Ah, twist)
    return OrlovKernelElement(b, a, shift)


def rouquier_maps_G_into_dual(g: BlockHom, G: FiniteAbelianGroup) -> Check:
    """Every generator t of G (on A^) has ``g2 t`` in the lattice of A'."""
    g2 = g.g2
    for idx, t in enumerate(G.ambient_generators()):
        image = g2 @ t
        if not image.is_integral():
            return Check(False, witness={"generator": idx, "point": t.entries, "image": image.entries})
    return Check(True)
