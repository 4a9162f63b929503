from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kumlift import _pykernels, kernels

BACKENDS = kernels.available_backends()


def square(max_n=5, bound=20):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(st.just(n), st.lists(st.integers(-bound, bound), min_size=n * n, max_size=n * n)))


def test_backend_is_reported():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
@settings(max_examples=60, deadline=None)
@given(data=square())
def test_det_matches_sympy(name, data):
    n, a = data
    assert BACKENDS[name].det(a, n) == sympy.Matrix(n, n, a).det()


@pytest.mark.parametrize("name", sorted(BACKENDS))
@settings(max_examples=60, deadline=None)
@given(data=square(), other=st.lists(st.integers(-9, 9), min_size=25, max_size=25))
def test_matmul_matches_sympy(name, data, other):
    n, a = data
    b = other[: n * n]
    got = BACKENDS[name].matmul(a, b, n, n, n)
    assert got == list(sympy.Matrix(n, n, a) * sympy.Matrix(n, n, b))


@pytest.mark.parametrize("name", sorted(BACKENDS))
@settings(max_examples=40, deadline=None)
@given(data=square(4, 6))
def test_adjugate(name, data):
    n, a = data
    M = sympy.Matrix(n, n, a)
    if M.det() == 0:
        return
    x, d = BACKENDS[name].adjugate_solve(a, n)
    assert d == M.det()
    assert list(M.adjugate()) == x


@pytest.mark.parametrize("name", sorted(BACKENDS))
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_exterior_power_is_matrix_of_minors(name, k):
    n = 4
    a = [3, -1, 0, 2, 1, 4, -2, 0, 0, 1, 1, -3, 2, 0, 5, 1]
    M = sympy.Matrix(n, n, a)
    subsets = list(combinations(range(n), k))
    expected = [M.extract(list(r), list(c)).det() if k else 1 for r in subsets for c in subsets]
    assert BACKENDS[name].exterior_power(a, n, k) == expected


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
def test_native_overflow_falls_back():
    c = BACKENDS["cython"]
    big = [10 ** 30, 1, 1, 1]
    assert c.det(big, 2) == _pykernels.det(big, 2)
    a = [2 ** 62, 0, 0, 2 ** 62]
    assert c.matmul(a, [4, 0, 0, 4], 2, 2, 2) == [2 ** 64, 0, 0, 2 ** 64]
    # entries fit in int64 but the elimination products do not
    m = [2 ** 40, 1, 3, 2 ** 40]
    assert c.adjugate_solve(m, 2) == _pykernels.adjugate_solve(m, 2)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_adjugate_rejects_singular(name):
    with pytest.raises(ZeroDivisionError):
        BACKENDS[name].adjugate_solve([1, 2, 2, 4], 2)
