from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from grcp.exactlin import (
    GF,
    QQ,
    DomainMismatch,
    Echelon,
    Field,
    ModP,
    Vector,
    in_span,
    kernel,
    rank,
    same_span,
    span_basis,
    span_intersect,
    span_sum,
)

DIM = 8
coeff = st.integers(-3, 3)
vectors = st.lists(coeff, min_size=DIM, max_size=DIM).map(lambda xs: Vector({i: x for i, x in enumerate(xs)}))
vector_sets = st.lists(vectors, max_size=6)


def v(*xs):
    return Vector({i: x for i, x in enumerate(xs)})


# examples


def test_span_basis_examples():
    assert span_basis([]) == []
    assert span_basis([v(1, 0), v(2, 0)]) == [v(1, 0)]
    assert len(span_basis([v(1, 1), v(1, -1)])) == 2


def test_in_span_examples():
    assert in_span(Vector(), []) == []
    assert in_span(Vector(), [v(1, 0)]) == [0]
    assert in_span(v(3, 0), [v(1, 0)]) == [3]
    assert in_span(v(1, 1), [v(1, 0)]) is None


def test_span_intersect_examples():
    A = [v(1, 0), v(0, 1)]
    assert same_span(span_intersect(A, A), A)
    assert span_intersect([v(1, 0)], [v(0, 1)]) == []
    assert same_span(span_intersect(A, [v(1, 1)]), [v(1, 1)])


def test_vector_stores_no_zeros():
    x = Vector({0: 1, 1: 0})
    assert dict(x) == {0: 1}
    assert not (x - x)


def test_modp_arithmetic():
    F = GF(7)
    a = F(3)
    assert a * a.inverse() == F.one
    assert a + (-a) == F.zero
    assert F(Fraction(1, 2)) * 2 == F.one
    assert ModP(10, 7) == ModP(3, 7)


def test_field_parse_and_mismatch():
    assert Field.parse("QQ") == QQ
    assert Field.parse("GF(5)") == GF(5)
    assert Field.parse("11") == GF(11)
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(DomainMismatch):
        QQ(GF(5)(1))
    with pytest.raises(DomainMismatch):
        rank([Vector({0: GF(5)(1)}), Vector({0: GF(7)(1)})])


def test_kernel_relations():
    imgs = [v(1, 0), v(0, 1), v(1, 1)]
    ker = kernel(imgs)
    assert len(ker) == 1
    c = ker[0]
    total = Vector()
    for i, x in c.items():
        total = total.axpy(x, imgs[i])
    assert not total


def test_echelon_express_tracks_insertion_order():
    ech = Echelon(track=True)
    ech.add(v(1, 1))
    ech.add(v(0, 1))
    combo = ech.express(v(2, 5))
    assert combo == Vector({0: 2, 1: 3})


# properties


@given(vector_sets, vector_sets)
def test_dimension_formula(V, W):
    assert rank(span_sum(V, W)) + len(span_intersect(V, W)) == rank(V) + rank(W)


@given(vector_sets, vectors)
def test_in_span_iff_rank_unchanged(V, x):
    basis = span_basis(V)
    found = in_span(x, basis)
    assert (found is not None) == (rank(V + [x]) == rank(V))
    if found is not None:
        total = Vector()
        for c, b in zip(found, basis):
            total = total.axpy(c, b)
        assert total == x


@given(vector_sets)
def test_rank_matches_sympy(V):
    if not V:
        return
    M = sympy.Matrix([[x.get(i, 0) for i in range(DIM)] for x in V])
    assert rank(V) == M.rank()


@given(vector_sets)
def test_rank_mod_p_never_exceeds_rational_rank(V):
    F = GF(5)
    Vp = [Vector({k: F(c) for k, c in x.items()}) for x in V]
    assert rank(Vp) <= rank(V)


@given(vector_sets, vector_sets)
def test_intersection_lies_in_both(V, W):
    for x in span_intersect(V, W):
        assert in_span(x, span_basis(V)) is not None
        assert in_span(x, span_basis(W)) is not None


def test_kernel_mod_p_with_zero_image():
    F = GF(7)
    imgs = [Vector(), Vector({0: F(2)}), Vector({0: F(3)})]
    ker = kernel(imgs)
    assert len(ker) == 2
    for c in ker:
        assert all(isinstance(x, ModP) for x in c.values())
        total = Vector()
        for i, x in c.items():
            total = total.axpy(x, imgs[i])
        assert not total
