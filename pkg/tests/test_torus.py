import random
from fractions import Fraction

import pytest

from kumlift.kummer import make_kummer_context
from kumlift.linalg import RatMatrix, finite_quotient, integer_kernel, lattice_solve
from kumlift.sampling import random_isogeny, standard_tori
from kumlift.torus import (
    J0,
    TorusError,
    TorusHom,
    apply_hom,
    diagonal_hom,
    dual_hom,
    dual_torus,
    elliptic_curve,
    hom_basis,
    identity_hom,
    isogeny_degree,
    kernel_group,
    kernel_subtorus,
    make_hom,
    make_torus,
    multiplication_hom,
    point_preimage,
    product_torus,
    summation_hom,
    torsion_point,
)

E = elliptic_curve()
A = product_torus([E, E], "A")


def test_make_torus():
    assert make_torus(2, RatMatrix.block_diag(J0, J0)).rank == 4
    with pytest.raises(TorusError):
        make_torus(1, RatMatrix.identity(2))
    with pytest.raises(TorusError):
        make_torus(2, J0)


def test_dual_structure():
    Eh = dual_torus(E)
    assert Eh.J == -J0.T == J0
    assert dual_torus(Eh).J == E.J
    assert dual_torus(A).J == RatMatrix.block_diag(-J0.T, -J0.T)
    F = standard_tori()["F"]
    assert dual_torus(F).J == -F.J.T
    assert dual_torus(F).J @ dual_torus(F).J == -RatMatrix.identity(2)


def test_make_hom_examples():
    Eh = dual_torus(E)
    n3 = make_hom(E, E, RatMatrix.scalar(2, 3))
    assert n3.integral
    # the dual of E carries -J0^T = J0, so the identity is complex-linear
    # and the anticommuting reflection is not
    assert make_hom(Eh, E, RatMatrix.identity(2)).integral
    with pytest.raises(TorusError):
        make_hom(Eh, E, RatMatrix.from_rows([[1, 0], [0, -1]]))
    with pytest.raises(TorusError):
        make_hom(E, A, RatMatrix.identity(2))


def test_rational_hom_not_integral():
    assert not make_hom(E, E, RatMatrix.scalar(2, Fraction(1, 2))).integral


def test_dual_hom():
    n = multiplication_hom(A, 3)
    assert dual_hom(n).M == RatMatrix.scalar(4, 3)
    S = summation_hom(A, 3)
    assert dual_hom(S).M == diagonal_hom(dual_torus(A), 3).M
    f = make_hom(A, A, RatMatrix.from_rows([[1, 0, 2, 0], [0, 1, 0, 2], [0, 0, 1, 0], [0, 0, 0, 1]]))
    assert dual_hom(dual_hom(f)) == f


@pytest.mark.parametrize("T, n, deg", [(E, 2, 4), (A, 2, 16), (A, 3, 81)])
def test_degrees(T, n, deg):
    assert isogeny_degree(multiplication_hom(T, n)) == deg


def test_non_isogeny_rejected():
    with pytest.raises(TorusError):
        isogeny_degree(TorusHom(E, E, RatMatrix.zeros(2, 2)))


def test_kernel_group_examples():
    G = kernel_group(multiplication_hom(E, 2))
    assert G.invariant_factors == (2, 2)
    assert set(G.generators) == {(Fraction(1, 2), Fraction(0)), (Fraction(0), Fraction(1, 2))}
    assert kernel_group(identity_hom(E)).is_trivial()
    assert kernel_group(multiplication_hom(A, 3)).invariant_factors == (3, 3, 3, 3)


def test_point_preimage():
    p = torsion_point(E, [Fraction(1, 2), 0])
    b = point_preimage(multiplication_hom(E, 2), p)
    assert b.v == (Fraction(1, 4), Fraction(0))
    assert point_preimage(identity_hom(E), p) == p


def test_point_preimage_through_kummer_isogeny():
    side = make_kummer_context(A, n=2).src
    p = torsion_point(side.An, [Fraction(1, 2)] + [0] * 7)
    b = point_preimage(side.q, p)
    assert apply_hom(side.q, b) == p


def test_torsion_point_order():
    p = torsion_point(A, [Fraction(3, 2), Fraction(-1, 3), 0, 0])
    assert p.v == (Fraction(1, 2), Fraction(2, 3), 0, 0)
    assert p.order == 6


def test_hom_basis_commutes():
    for T in standard_tori().values():
        for B in hom_basis(T, T):
            assert B @ T.J == T.J @ B
        assert len(hom_basis(T, T)) == (2 if T.g == 1 else 8)


@pytest.mark.parametrize("g", [1, 2])
def test_kernel_order_equals_degree_random(g):
    rng = random.Random(10 + g)
    tori = [T for T in standard_tori().values() if T.g == g]
    for k in range(50):
        T = tori[k % len(tori)]
        f = TorusHom(T, T, random_isogeny(rng, T, 3))
        assert kernel_group(f).order == isogeny_degree(f)
        assert kernel_group(dual_hom(f)).order == isogeny_degree(f)


def test_kernel_subtorus():
    S = summation_hom(A, 2)
    N, incl = kernel_subtorus(S, 2)
    assert N.rank == 4
    assert (S.M @ incl.M).is_zero()
    assert incl.M == RatMatrix.vstack(RatMatrix.identity(4), -RatMatrix.identity(4))
    # image is saturated: in kernel-lattice coordinates the quotient is trivial
    K = integer_kernel(S.M)
    cols = [lattice_solve(K, incl.M.column_matrix(j)) for j in range(incl.M.cols)]
    assert all(c is not None for c in cols)
    C = RatMatrix(K.cols, len(cols), [c[i] for i in range(K.cols) for c in cols])
    assert finite_quotient(RatMatrix.identity(K.cols), C).is_trivial()


def test_kernel_subtorus_rejects_small_n():
    with pytest.raises(TorusError):
        summation_hom(A, 1)
