import random
from fractions import Fraction

import pytest

from kumlift.lift import (
    LiftError,
    in_G_SO,
    kernel_element,
    kernel_maps,
    lift_criterion,
    make_context,
    n_context,
    n_context_closed_form,
    preserves_lift_lattice,
    restrict_res,
    rouquier_maps_G_into_dual,
)
from kumlift.linalg import RatMatrix
from kumlift.mukai import (
    BlockIso,
    block_from_matrices,
    identity_block,
    identity_iso,
    is_hodge,
    is_isometry,
    is_special,
    is_symplectic_hat,
    mukai_space,
    orlov_iso_of_sp,
    phi_P,
    unipotent_upper,
)
from kumlift.sampling import random_isogeny, random_symplectic, standard_tori
from kumlift.torus import (
    J0,
    TorusHom,
    dual_torus,
    elliptic_curve,
    hom_basis,
    identity_hom,
    product_torus,
    torsion_subgroup,
)

E = elliptic_curve()
A = product_torus([E, E], "A")
TORI = standard_tori()


def test_context_for_multiplication():
    ctx = n_context(A, 2)
    assert ctx.G.invariant_factors == (2, 2, 2, 2)
    half = RatMatrix.scalar(4, Fraction(1, 2))
    assert ctx.iota == RatMatrix.block_diag(RatMatrix.scalar(4, 2), half)
    V = mukai_space(A)
    assert ctx.iota.T @ V.gram @ ctx.iota == V.gram


def test_context_for_identity():
    ctx = make_context(identity_hom(E))
    assert ctx.G.is_trivial()
    assert ctx.iota == RatMatrix.identity(4)


@pytest.mark.parametrize("name", sorted(TORI))
def test_iota_is_rational_hodge_isometry(name):
    T = TORI[name]
    rng = random.Random(3)
    for _ in range(5):
        q = TorusHom(T, T, random_isogeny(rng, T, 2))
        ctx = make_context(q)
        iso = BlockIso(ctx.V_A, ctx.V_B, ctx.iota)
        assert is_isometry(iso) and is_hodge(iso)
        assert ctx.G.order == ctx.degree


@pytest.mark.parametrize("n", [2, 3])
def test_phi_P_does_not_lift(n):
    ctx = n_context(E, n)
    P = phi_P(E)
    lift = lift_criterion(ctx, P)
    assert not lift and lift.witness["denominator"] == n * n
    member = in_G_SO(ctx, P)
    assert not member and member.witness["denominator"] == n * n
    assert not n_context_closed_form(n, P)


@pytest.mark.parametrize("n", [2, 3])
def test_unipotent_lifts_and_restricts(n):
    ctx = n_context(E, n)
    F = orlov_iso_of_sp(unipotent_upper(E, J0.scale(n * n)))
    lift = lift_criterion(ctx, F)
    assert lift
    gamma = lift.value
    assert in_G_SO(ctx, gamma) and n_context_closed_form(n, gamma)
    assert restrict_res(ctx, gamma) == F


def test_identity_lifts():
    ctx = n_context(A, 2)
    V = mukai_space(A)
    assert lift_criterion(ctx, identity_iso(V)).value == identity_iso(V)
    assert in_G_SO(ctx, identity_iso(V))
    assert restrict_res(ctx, identity_iso(V)) == identity_iso(V)


def test_restrict_rejects_non_member():
    with pytest.raises(LiftError):
        restrict_res(n_context(E, 2), phi_P(E))


def test_in_G_SO_rejects_rational_input():
    ctx = n_context(E, 2)
    with pytest.raises(LiftError):
        in_G_SO(ctx, BlockIso(ctx.V_B, ctx.V_B, RatMatrix.scalar(4, Fraction(1, 2))))


@pytest.mark.parametrize("name, n", [("E", 2), ("E", 3), ("ExE", 2), ("T", 3)])
def test_formula_one_both_ways(name, n):
    T = TORI[name]
    rng = random.Random(n)
    ctx = n_context(T, n)
    for k in range(25):
        g = random_symplectic(rng, T, 3, upper_modulus=n * n if k % 2 else 1)
        F = orlov_iso_of_sp(g)
        lift = lift_criterion(ctx, F)
        if lift:
            gamma = lift.value
            assert in_G_SO(ctx, gamma)
            back = restrict_res(ctx, gamma)
            assert back == F
            assert is_isometry(back) and is_hodge(back) and is_special(back)
            # transported map intertwines iota on the lift lattice
            assert ctx.iota @ F.F == gamma.F @ ctx.iota
        # from the cover side (here V_B = V_A): membership <-> integral restriction
        member = in_G_SO(ctx, F)
        res = ctx.iota.inverse() @ F.F @ ctx.iota
        assert bool(member) == res.is_integral()


@pytest.mark.parametrize("n", [2, 3])
def test_closed_form_matches_generic(n):
    rng = random.Random(40 + n)
    for T in (TORI["E"], TORI["ExE"], TORI["T"]):
        ctx = n_context(T, n)
        for k in range(20):
            g = random_symplectic(rng, T, 3, upper_modulus=n * n if k % 3 == 0 else 1)
            gamma = orlov_iso_of_sp(g)
            assert bool(n_context_closed_form(n, gamma)) == bool(preserves_lift_lattice(ctx, gamma))


def test_cross_variety_lift():
    src, dst = TORI["E"], TORI["F"]
    # an isomorphism E -> F gives a symplectic map between different tori
    iso = next(M for M in hom_basis(src, dst) if abs(M.det()) == 1)
    r = 2
    Z = RatMatrix.zeros(r, r)
    g = block_from_matrices(src, dst, iso, Z, Z, iso.inverse().T)
    assert is_symplectic_hat(g)
    ctx, ct = n_context(src, 2), n_context(dst, 2)
    lift = lift_criterion(ctx, orlov_iso_of_sp(g), ct)
    assert lift
    assert restrict_res(ctx, lift.value, ct) == orlov_iso_of_sp(g)


def test_kernel_maps():
    ctx = n_context(E, 2)
    shift = kernel_element(ctx, shift=1)
    assert kernel_maps(ctx, shift, "up") == shift
    assert kernel_maps(ctx, shift, "down") == shift
    b = kernel_element(ctx, translation=[Fraction(1, 2), 0])
    down = kernel_maps(ctx, b, "down")
    assert 2 % down.translation.order == 0
    for t in ctx.G.generators:
        up = kernel_maps(ctx, kernel_element(ctx, twist=t), "up")
        assert up.twist.is_zero()
    with pytest.raises(LiftError):
        kernel_maps(ctx, shift, "sideways")


def test_kernel_square_commutes():
    # up then down equals down then up on torsion representatives
    ctx = make_context(TorusHom(A, A, RatMatrix.from_rows(
        [[1, -1, 0, 0], [1, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])))
    k = kernel_element(ctx, translation=[Fraction(1, 3), 0, Fraction(1, 2), 0],
                       twist=[0, Fraction(1, 4), 0, 0], shift=2)
    a = kernel_maps(ctx, kernel_maps(ctx, k, "up"), "down")
    b = kernel_maps(ctx, kernel_maps(ctx, k, "down"), "up")
    assert a == b


def test_rouquier_condition():
    Ah = dual_torus(A)
    G2 = torsion_subgroup(Ah, 2)
    assert rouquier_maps_G_into_dual(identity_block(A), G2)
    X = A.J.scale(2)
    assert rouquier_maps_G_into_dual(unipotent_upper(A, X), G2)
    c = rouquier_maps_G_into_dual(unipotent_upper(A, A.J), G2)
    assert not c and any(x.denominator == 2 for x in c.witness["image"])
