"""Seeded generators of tori, homomorphisms and symplectic assemblies."""

from __future__ import annotations

import random
from functools import lru_cache

from kumlift.linalg import RatMatrix, integer_kernel
from kumlift.mukai import BlockHom, block_from_matrices, is_complex_linear, unipotent_lower, unipotent_upper
from kumlift.torus import ComplexTorus, J0, dual_torus, hom_basis, make_torus, product_torus

J1 = RatMatrix.from_rows([[1, -2], [1, -1]])


def standard_tori() -> dict[str, ComplexTorus]:
    E = make_torus(1, J0, "E")
    F = make_torus(1, J1, "F")
    P = RatMatrix.from_rows([[1, 1, 0, 0], [0, 1, 0, 0], [0, 1, 1, 0], [2, 0, 0, 1]])
    twisted = P @ RatMatrix.block_diag(J0, J1) @ P.inverse()
    return {
        "E": E,
        "F": F,
        "ExE": product_torus([E, E], "ExE"),
        "ExF": product_torus([E, F], "ExF"),
        "T": make_torus(2, twisted, "T"),
    }


@lru_cache(maxsize=None)
def _hom_basis_cached(S: ComplexTorus, T: ComplexTorus) -> tuple[RatMatrix, ...]:
    return tuple(hom_basis(S, T))


def random_combination(rng: random.Random, basis, bound: int) -> RatMatrix:
    out = None
    for B in basis:
        term = B.scale(rng.randint(-bound, bound))
        out = term if out is None else out + term
    return out


def random_hom(rng: random.Random, S: ComplexTorus, T: ComplexTorus, bound: int = 2) -> RatMatrix:
    return random_combination(rng, _hom_basis_cached(S, T), bound)


def random_isogeny(rng: random.Random, T: ComplexTorus, bound: int = 2, max_degree: int | None = None) -> RatMatrix:
    basis = _hom_basis_cached(T, T)
    while True:
        M = random_combination(rng, basis, bound)
        d = abs(M.det())
        if d and (max_degree is None or d <= max_degree):
            return M


@lru_cache(maxsize=None)
def antisymmetric_hom_basis(S: ComplexTorus, T: ComplexTorus) -> tuple[RatMatrix, ...]:
    """Basis of homs X: S -> T (same rank) with X^T = -X."""
    basis = _hom_basis_cached(S, T)
    r = T.rank
    rows = []
    for i in range(r):
        for j in range(i, r):
            rows.append([B[i, j] + B[j, i] for B in basis])
    K = integer_kernel(RatMatrix.from_rows(rows))
    out = []
    for c in range(K.cols):
        X = RatMatrix.zeros(r, r)
        for coeff, B in zip(K.col(c), basis):
            if coeff:
                X = X + B.scale(coeff)
        out.append(X)
    return tuple(out)


@lru_cache(maxsize=None)
def unit_homs(T: ComplexTorus) -> tuple[RatMatrix, ...]:
    """A few unimodular complex-linear endomorphisms of T."""
    r = T.rank
    I = RatMatrix.identity(r)
    found = [I, -I, T.J, -T.J]
    for B in _hom_basis_cached(T, T):
        for c in (1, -1):
            N = B if c == 1 else -B
            if (N @ N).is_zero():
                found.append(I + N)
    # products of nilpotent shears give more units in higher rank
    extra = []
    for X in found[4:]:
        for Y in found[4:]:
            extra.append(X @ Y)
    return tuple(dict.fromkeys(found + extra))


def symplectic_generator(rng: random.Random, A: ComplexTorus, bound: int = 2, upper_modulus: int = 1) -> BlockHom:
    kind = rng.randrange(3)
    Ah = dual_torus(A)
    if kind == 0:
        X = random_combination(rng, antisymmetric_hom_basis(Ah, A), bound).scale(upper_modulus)
        return unipotent_upper(A, X)
    if kind == 1:
        Y = random_combination(rng, antisymmetric_hom_basis(A, Ah), bound)
        return unipotent_lower(A, Y)
    f = rng.choice(unit_homs(A))
    r = A.rank
    Z = RatMatrix.zeros(r, r)
    return block_from_matrices(A, A, f, Z, Z, f.inverse().T)


def random_symplectic(rng: random.Random, A: ComplexTorus, length: int = 3, bound: int = 2,
                      upper_modulus: int = 1) -> BlockHom:
    """Product of ``length`` generators.

    With ``upper_modulus = m`` every factor has upper-right block divisible
    by m, and so does the product.
    """
    g = symplectic_generator(rng, A, bound, upper_modulus)
    for _ in range(length - 1):
        g = g @ symplectic_generator(rng, A, bound, upper_modulus)
    return g


def perturb(rng: random.Random, g: BlockHom, bound: int = 1) -> BlockHom:
    """Add a random complex-linear hom to one block; keeps invertibility."""
    A, B = g.source, g.target
    Ah, Bh = dual_torus(A), dual_torus(B)
    while True:
        which = rng.randrange(4)
        ends = [(A, B), (Ah, B), (A, Bh), (Ah, Bh)][which]
        D = random_hom(rng, *ends, bound)
        blocks = list(g.blocks)
        blocks[which] = blocks[which] + D
        h = block_from_matrices(A, B, *blocks)
        if h.g.det() != 0:
            assert is_complex_linear(h)
            return h
