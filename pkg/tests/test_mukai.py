import random

import pytest

from kumlift import mukai
from kumlift.linalg import RatMatrix
from kumlift.mukai import (
    BlockIso,
    MukaiError,
    assemble,
    assembly_of_iso,
    calibrate_epsilon,
    diagonal_block,
    identity_block,
    identity_iso,
    is_complex_linear,
    is_hodge,
    is_isometry,
    is_special,
    is_symplectic_hat,
    mukai_action,
    mukai_space,
    orlov_iso_of_sp,
    phi_P,
    unipotent_lower,
    unipotent_upper,
)
from kumlift.sampling import perturb, random_symplectic, standard_tori
from kumlift.torus import J0, TorusHom, dual_torus, elliptic_curve, make_hom, product_torus

E = elliptic_curve()
A = product_torus([E, E], "A")
V_E = mukai_space(E)


def test_mukai_space_shape():
    assert V_E.rank == 4
    assert V_E.gram == RatMatrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert mukai_space(A).rank == 8
    assert V_E.gram @ V_E.gram == RatMatrix.identity(4)


@pytest.mark.parametrize("name", sorted(standard_tori()))
def test_structure_compatible_with_pairing(name):
    V = mukai_space(standard_tori()[name])
    assert V.J @ V.J == -RatMatrix.identity(V.rank)
    assert V.J.T @ V.gram @ V.J == V.gram


def test_isometry_examples():
    assert is_isometry(identity_iso(V_E))
    c = is_isometry(BlockIso(V_E, V_E, RatMatrix.scalar(4, 2)))
    assert not c and c.witness["after"] == 4 * c.witness["before"]


def test_unipotent_needs_antisymmetric_block():
    # symmetric blocks break the pairing, antisymmetric ones keep it
    N = RatMatrix.from_rows([[1, 0], [0, -1]])
    I, Z = RatMatrix.identity(2), RatMatrix.zeros(2, 2)
    sym = BlockIso(V_E, V_E, RatMatrix.blocks([[I, N], [Z, I]]))
    anti = BlockIso(V_E, V_E, RatMatrix.blocks([[I, J0], [Z, I]]))
    assert not is_isometry(sym)
    assert is_isometry(anti)


def test_hodge_examples():
    assert is_hodge(identity_iso(V_E))
    assert is_hodge(phi_P(E))
    swap = RatMatrix.from_rows([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    c = is_hodge(BlockIso(V_E, V_E, swap))
    assert not c and c.witness["FJ"] != c.witness["JF"]


def test_special_examples():
    assert is_special(identity_iso(V_E))
    assert is_special(phi_P(E)).value == 1
    refl = RatMatrix.from_rows([[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]])
    R = BlockIso(V_E, V_E, refl)
    assert is_isometry(R) and not is_special(R)


def test_calibration_is_unique_and_matches_constant():
    assert calibrate_epsilon() == mukai.EPSILON == -1
    # the other sign keeps the map symplectic but breaks the pairing
    other = phi_P(E, eps=1)
    assert is_symplectic_hat(assembly_of_iso(other), eps=1)
    assert not is_isometry(other)


def test_phi_P_is_symplectic_hodge_isometry():
    P = phi_P(E)
    assert is_symplectic_hat(assembly_of_iso(P))
    assert is_isometry(P) and is_hodge(P) and is_special(P)
    PP = phi_P(dual_torus(E)) @ P
    assert PP.F == RatMatrix.identity(4)


def test_symplectic_examples():
    f = make_hom(A, A, RatMatrix.from_rows([[1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]))
    assert is_symplectic_hat(diagonal_block(f))
    for n in (2, 3):
        assert is_symplectic_hat(unipotent_upper(E, J0.scale(n * n)))
        assert is_symplectic_hat(unipotent_lower(E, J0.scale(n)))
    assert not is_symplectic_hat(unipotent_upper(E, RatMatrix.from_rows([[1, 0], [0, -1]])))


def test_assemble_checks_types():
    Eh = dual_torus(E)
    I, Z = RatMatrix.identity(2), RatMatrix.zeros(2, 2)
    g = assemble(TorusHom(E, E, I), TorusHom(Eh, E, Z), TorusHom(E, Eh, Z), TorusHom(Eh, Eh, I))
    assert g == identity_block(E)
    with pytest.raises(MukaiError):
        assemble(TorusHom(E, E, I), TorusHom(E, A, RatMatrix.zeros(4, 2)), TorusHom(E, Eh, Z), TorusHom(Eh, Eh, I))


def test_singular_assembly_rejected():
    g = unipotent_upper(E, RatMatrix.zeros(2, 2))
    bad = type(g)(E, E, RatMatrix.zeros(4, 4))
    with pytest.raises(MukaiError):
        is_symplectic_hat(bad)


def test_orlov_identity_and_integrality():
    assert orlov_iso_of_sp(identity_block(E)) == identity_iso(V_E)
    u = unipotent_upper(E, J0.scale(4))
    F = orlov_iso_of_sp(u)
    assert F.is_integral()
    assert F.F == RatMatrix.blocks([[RatMatrix.identity(2), RatMatrix.zeros(2, 2)],
                                    [J0.scale(4), RatMatrix.identity(2)]])
    assert is_isometry(F) and is_hodge(F) and is_special(F)


def test_orlov_rejects_non_symplectic():
    with pytest.raises(MukaiError):
        orlov_iso_of_sp(unipotent_upper(E, RatMatrix.identity(2)))


def test_compose_invert():
    rng = random.Random(5)
    g, h = random_symplectic(rng, A), random_symplectic(rng, A)
    F, G = orlov_iso_of_sp(g), orlov_iso_of_sp(h)
    assert (F @ F.inverse()) == identity_iso(mukai_space(A))
    assert is_isometry(F @ G) and is_hodge(F @ G)
    assert orlov_iso_of_sp(g @ h) == F @ G


def test_compose_legend_mismatch():
    with pytest.raises(MukaiError):
        identity_iso(V_E) @ identity_iso(mukai_space(A))


@pytest.mark.parametrize("name", sorted(standard_tori()))
def test_random_symplectics_are_special_hodge_isometries(name):
    T = standard_tori()[name]
    rng = random.Random(sum(map(ord, name)))
    for _ in range(30):
        g = random_symplectic(rng, T)
        assert is_complex_linear(g)
        F = orlov_iso_of_sp(g)
        assert is_isometry(F) and is_hodge(F)
        assert is_special(F)


@pytest.mark.parametrize("name", sorted(standard_tori()))
def test_hat_and_isometry_agree(name):
    T = standard_tori()[name]
    rng = random.Random(7)
    for _ in range(40):
        g = random_symplectic(rng, T)
        h = perturb(rng, g) if rng.random() < 0.5 else g
        assert bool(is_symplectic_hat(h)) == bool(is_isometry(mukai_action(h)))
