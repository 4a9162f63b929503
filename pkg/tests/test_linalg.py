from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from kumlift.linalg import (
    Check,
    DimensionError,
    NotIntegralError,
    RatMatrix,
    covolume,
    finite_quotient,
    integer_kernel,
    is_smith_form,
    lattice_solve,
    snf,
    sublattice_index,
)


def M(rows):
    return RatMatrix.from_rows(rows)


def int_matrices(max_dim=4, bound=5):
    return st.tuples(st.integers(1, max_dim), st.integers(1, max_dim)).flatmap(
        lambda rc: st.lists(st.integers(-bound, bound), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1])
        .map(lambda e: RatMatrix(rc[0], rc[1], e)))


# RatMatrix

def test_entries_normalized_and_exact():
    A = RatMatrix(1, 2, ["2/4", "3/6"])
    assert A.entries == (Fraction(1, 2), Fraction(1, 2))
    assert A == M([["1/2", "1/2"]])


def test_floats_rejected():
    with pytest.raises(TypeError):
        RatMatrix(1, 1, [0.5])


def test_inverse_and_det(backend):
    A = M([["1/2", 1, 0], [3, 4, "-2/3"], [0, 1, 5]])
    S = sympy.Matrix([[sympy.Rational(1, 2), 1, 0], [3, 4, sympy.Rational(-2, 3)], [0, 1, 5]])
    assert A.det() == Fraction(str(S.det()))
    assert A @ A.inverse() == RatMatrix.identity(3)
    assert A.inverse() == M([[str(x) for x in S.inv().row(i)] for i in range(3)])


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        M([[1, 2], [2, 4]]).inverse()


def test_kron_and_blocks():
    A = M([[1, 2], [3, 4]])
    K = RatMatrix.kron(RatMatrix.identity(2), A)
    assert K == RatMatrix.block_diag(A, A)
    assert RatMatrix.blocks([[A, A], [A, A]]).block(2, 4, 0, 2) == A


def test_exterior_power_rational(backend):
    A = M([["1/2", 0], [0, 3]])
    assert A.exterior_power(2) == M([["3/2"]])
    assert A.exterior_power(0) == M([[1]])


# SNF

@pytest.mark.parametrize("rows, diag", [
    ([[2, 0], [0, 3]], [1, 6]),
    ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], [1, 1, 1, 1]),
    ([[0, 0], [0, 0]], [0, 0]),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
])
def test_snf_examples(rows, diag):
    d = snf(M(rows))
    assert d.diagonal == diag
    assert d.U @ d.M @ d.V == d.D


def test_snf_rejects_rationals():
    with pytest.raises(NotIntegralError):
        snf(M([["1/2"]]))


@settings(max_examples=150, deadline=None)
@given(A=int_matrices())
def test_snf_invariants(A):
    d = snf(A)
    assert d.U @ A @ d.V == d.D
    assert is_smith_form(d.D)
    assert d.U.is_integral() and abs(d.U.det()) == 1
    assert d.V.is_integral() and abs(d.V.det()) == 1
    oracle = smith_normal_form(sympy.Matrix(A.rows, A.cols, [int(x) for x in A.entries]))
    assert d.diagonal == [abs(int(oracle[i, i])) for i in range(min(A.shape))]


def test_snf_is_deterministic():
    A = M([[4, 6, 2], [2, 2, 8], [6, 0, 4]])
    assert snf(A) == snf(A)


# lattice_solve

def test_lattice_solve_examples():
    D = M([[2, 0], [0, 3]])
    assert lattice_solve(D, [4, 9]) == (2, 3)
    assert lattice_solve(D, [1, 0]) is None
    assert lattice_solve(M([[1, 1], [0, 2]]), [0, 1]) is None


def test_lattice_solve_dimension_mismatch():
    with pytest.raises(DimensionError):
        lattice_solve(M([[1, 0]]), [1, 2])


@settings(max_examples=120, deadline=None)
@given(A=int_matrices(3, 3), b=st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_lattice_solve_against_brute_force(A, b):
    b = b[: A.rows]
    x = lattice_solve(A, b)
    if x is not None:
        assert A @ RatMatrix.column(list(x)) == RatMatrix.column(b)
        return
    # search box generous for these sizes
    box = range(-12, 13)
    for cand in product(box, repeat=A.cols):
        assert A @ RatMatrix.column(list(cand)) != RatMatrix.column(b)


def test_integer_kernel_is_saturated():
    K = integer_kernel(M([[2, 4, 6]]))
    assert K.cols == 2
    assert (M([[2, 4, 6]]) @ K).is_zero()
    # (1,1,-1) is in the kernel and must be an integer combination of K
    assert lattice_solve(K, [1, 1, -1]) is not None


# indices and quotients

@pytest.mark.parametrize("Mb, idx", [
    (RatMatrix.scalar(2, 2), 4),
    (RatMatrix.identity(2), 1),
    (M([[1, 0], [1, 3]]), 3),
])
def test_sublattice_index_examples(Mb, idx):
    assert sublattice_index(RatMatrix.identity(2), Mb) == idx


def test_sublattice_index_not_contained():
    assert sublattice_index(RatMatrix.scalar(2, 2), RatMatrix.identity(2)) is None


def test_sublattice_index_rank_deficient():
    with pytest.raises(DimensionError):
        sublattice_index(RatMatrix.identity(2), M([[1, 2], [2, 4]]))


def test_finite_quotient_examples():
    assert finite_quotient(RatMatrix.identity(2), RatMatrix.scalar(2, 2)).invariant_factors == (2, 2)
    assert finite_quotient(RatMatrix.identity(2), RatMatrix.identity(2)).is_trivial()
    G = finite_quotient(RatMatrix.identity(2), M([[1, 0], [1, 3]]))
    assert G.invariant_factors == (3,)
    assert G.generators == ((Fraction(0), Fraction(1, 3)),)


def test_finite_quotient_not_contained():
    with pytest.raises(ValueError):
        finite_quotient(RatMatrix.scalar(2, 2), RatMatrix.identity(2))


def test_finite_quotient_brute_force_coset_count():
    L, S = RatMatrix.identity(2), M([[1, 0], [1, 3]])
    cosets = set()
    for v in product(range(6), repeat=2):
        c = S.inverse() @ RatMatrix.column(list(v))
        cosets.add(tuple(x - (x.numerator // x.denominator) for x in c.entries))
    assert len(cosets) == finite_quotient(L, S).order == 3


@settings(max_examples=80, deadline=None)
@given(A=int_matrices(3, 4))
def test_quotient_order_equals_index(A):
    if not A.is_square() or A.det() == 0:
        return
    L = RatMatrix.identity(A.rows)
    G = finite_quotient(L, A)
    idx = sublattice_index(L, A)
    assert G.order == idx
    assert idx * covolume(L) == covolume(A)
    for g, d in zip(G.ambient_generators(), G.invariant_factors):
        assert g.is_integral()
        assert lattice_solve(A, g.scale(d)) is not None
    # generator orders in the quotient: k*g in A only for k = d
    for gc, d in zip(G.generators, G.invariant_factors):
        for k in range(1, d):
            assert not all((k * x).denominator == 1 for x in gc)


def test_check_truthiness():
    assert Check(True) and not Check(False, witness=1)
