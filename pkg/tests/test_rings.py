from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grcp.errors import ParseError, PreconditionError
from grcp.exactlin import GF, Vector
from grcp.graded import Window, check_grading, check_strongly_graded
from grcp.instances.rings import (
    CornerSkewReducer,
    CornerSkewSpec,
    CrossedProductSpec,
    FiniteRing,
    build_corner_skew,
    build_crossed_product,
    corner_word_element,
    diagonal_ring,
    laurent_spec,
    lift,
    permutation_map,
    scalar_ring,
)

K2 = diagonal_ring(2)
SWAP = permutation_map(K2, {"e1": "e2", "e2": "e1"})


def matrix_ring():
    names = ("e11", "e12", "e21", "e22")
    table = {}
    for a in names:
        for b in names:
            if a[2] == b[1]:
                table[(a, b)] = {f"e{a[1]}{b[2]}": 1}
    return FiniteRing(names, table, {"e11": 1, "e22": 1}, name="M2")


# examples


def test_ring_checks():
    assert K2.check_ring() is None
    assert matrix_ring().check_ring() is None
    assert K2.is_automorphism(SWAP)
    assert not K2.is_automorphism({"e1": K2.gen("e1"), "e2": K2.gen("e1")})
    assert K2.parse("2e1 - e2") == Vector({"e1": 2, "e2": -1})
    with pytest.raises(ParseError):
        K2.parse("e3")


def test_crossed_product_structure(crossed_k2):
    A, d = crossed_k2
    assert check_grading(A).ok and check_strongly_graded(A).ok
    e1, e2 = K2.gen("e1"), K2.gen("e2")
    assert A.mul(lift(e1, 1), lift(e1, -1)) == Vector()
    assert A.mul(lift(e1, 1), lift(e2, -1)) == lift(e1, 0)
    assert d.R.dim == 2 and d.I.dim == 2 and d.J.dim == 2


def test_crossed_product_rejects_non_automorphism():
    bad = {"e1": K2.gen("e1"), "e2": K2.gen("e1")}
    with pytest.raises(PreconditionError):
        build_crossed_product(CrossedProductSpec(K2, bad))


def test_crossed_product_over_finite_field():
    R = diagonal_ring(2, GF(3))
    A, _ = build_crossed_product(CrossedProductSpec(R, permutation_map(R, {"e1": "e2", "e2": "e1"}), Window(-2, 2)))
    assert check_grading(A).ok


def test_laurent_polynomials():
    A, d = build_corner_skew(laurent_spec(window=Window(-3, 3)))
    t, tinv = A.gen((1, "1")), A.gen((-1, "1"))
    assert A.mul(t, tinv) == A.unit == A.mul(tinv, t)
    assert check_strongly_graded(A).ok and d.I.dim == 1


def test_corner_skew_needs_full_corner():
    p = K2.gen("e1")
    alpha = {"e1": p, "e2": Vector()}
    with pytest.raises(PreconditionError):
        build_corner_skew(CornerSkewSpec(K2, p, alpha))
    with pytest.raises(PreconditionError):
        build_corner_skew(CornerSkewSpec(K2, K2.one + K2.gen("e1"), SWAP))


def test_corner_skew_by_swap():
    A, _ = build_corner_skew(CornerSkewSpec(K2, K2.one, SWAP, Window(-3, 3)))
    assert check_grading(A).ok
    red = CornerSkewReducer(CornerSkewSpec(K2, K2.one, SWAP))
    w = red.reduce(("t+", ("phi", K2.gen("e1")), "t-"))
    assert red.is_canonical(w)
    assert red.to_element(w) == Vector({(0, "e2"): 1})


def test_matrix_ring_crossed_product():
    M = matrix_ring()
    conj = permutation_map(M, {"e11": "e22", "e22": "e11", "e12": "e21", "e21": "e12"})
    A, _ = build_crossed_product(CrossedProductSpec(M, conj, Window(-2, 2)))
    assert check_grading(A).ok


# properties


@given(st.integers(0, 10_000))
def test_reducer_agrees_with_product(seed):
    spec = CornerSkewSpec(K2, K2.one, SWAP, Window(-9, 9, 9))
    A, _ = build_corner_skew(spec)
    red = CornerSkewReducer(spec)
    word = red.random_word(random.Random(seed))
    w = red.reduce(word)
    assert red.is_canonical(w)
    assert red.to_element(w) == corner_word_element(A, word)


@given(st.sampled_from(["e1", "e2"]), st.sampled_from(["e1", "e2"]), st.integers(-2, 2), st.integers(-2, 2))
def test_crossed_product_rule(a, b, k, l):
    A, _ = build_crossed_product(CrossedProductSpec(K2, SWAP, Window(-4, 4)))
    expect = K2.mul(K2.gen(a), K2.apply(K2.power(SWAP, k), K2.gen(b)))
    assert A.mul(lift(K2.gen(a), k), lift(K2.gen(b), l)) == lift(expect, k + l)


def test_scalar_ring():
    K = scalar_ring()
    assert K.mul(K.one, K.one) == K.one
