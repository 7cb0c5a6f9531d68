from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grcp.errors import ParseError, SemanticError
from grcp.exactlin import Vector
from grcp.graded import Window, check_grading
from grcp.instances.graph import Graph, estar_graph, two_sink_graph
from grcp.instances.lpa import (
    LpaRewriter,
    build_lpa,
    edge_label,
    ghost_label,
    label_from_name,
    lpa_normal_form,
    lpa_product,
    parse_lpa_element,
    parse_lpa_expr,
    vertex_label,
)

E = estar_graph()
TOKENS = ["u", "v", "w", "e", "f", "g", "e*", "f*", "g*"]


def token_label(graph, t):
    if t in graph.vertices:
        return vertex_label(t)
    if t.endswith("*"):
        return ghost_label(graph, t[:-1])
    return edge_label(graph, t)


def word_by_labels(graph, word, ck=True):
    out = Vector.unit(token_label(graph, word[0]))
    for t in word[1:]:
        nxt = Vector()
        for lab, c in out.items():
            nxt = nxt.axpy(c, lpa_product(graph, lab, token_label(graph, t), ck))
        out = nxt
    return out


# examples


def test_graph_validation():
    with pytest.raises(SemanticError):
        Graph(("u",), ("e",), {"e": "u"}, {"e": "z"})
    with pytest.raises(SemanticError):
        Graph(("u", "u"), (), {}, {})
    assert E.receivers("w") == ("f", "g") and E.special_edge("w") == "f"
    assert E.is_sink("v") and not E.is_sink("u")
    assert E.is_acyclic()


def test_graph_paths():
    assert set(E.paths_with_source("v", 3)) == {(), ("f",), ("g",), ("e", "f"), ("e", "g")}
    assert E.parse_path("ef") == (("e", "f"), "v")
    with pytest.raises(SemanticError):
        E.parse_path("fe")


def test_cuntz_krieger_relations(lpa_estar):
    A, _ = lpa_estar
    assert parse_lpa_element(A, "ee*") == parse_lpa_element(A, "u")
    assert parse_lpa_element(A, "ff* + gg*") == parse_lpa_element(A, "w")
    assert parse_lpa_element(A, "e*e") == parse_lpa_element(A, "w")
    assert not parse_lpa_element(A, "f*g")


def test_toeplitz_drops_cuntz_krieger(toeplitz_estar):
    A, _ = toeplitz_estar
    assert parse_lpa_element(A, "ee*") != parse_lpa_element(A, "u")
    assert parse_lpa_element(A, "e*e") == parse_lpa_element(A, "w")
    assert len(A.basis(0)) > 9
    assert check_grading(A).ok


def test_two_sink_dimensions(lpa_two_sink):
    A, _ = lpa_two_sink
    assert [len(A.basis(n)) for n in (-1, 0, 1)] == [2, 4, 2]


def test_small_window_truncates():
    A, _ = build_lpa(E, Window(-1, 1, 2))
    assert [len(A.basis(n)) for n in (-1, 0, 1)] == [3, 6, 3]


def test_confluence():
    for g in (E, two_sink_graph()):
        for ck in (True, False):
            ok, count, bad = LpaRewriter(g, ck).check_confluence()
            assert ok and bad is None and count > 0


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_lpa_expr(E, "e + q")
    with pytest.raises(ParseError):
        parse_lpa_expr(E, "u*")
    with pytest.raises(ParseError):
        label_from_name(E, "u + v")


def test_bare_scalar_is_unit_multiple(lpa_estar):
    A, _ = lpa_estar
    assert parse_lpa_element(A, "2") == parse_lpa_element(A, "2u + 2v + 2w")


def test_label_names_round_trip(lpa_estar):
    A, _ = lpa_estar
    for lab in A.labels():
        assert label_from_name(E, A.fmt(lab)) == lab


# properties


@given(st.lists(st.sampled_from(TOKENS), min_size=1, max_size=6), st.booleans())
def test_rewriter_matches_label_product(word, ck):
    rw = LpaRewriter(E, ck)
    assert rw.to_vector({tuple(word): 1}) == word_by_labels(E, word, ck)


def label_word(lab):
    alpha, beta, mid = lab
    return tuple(alpha) + tuple(e + "*" for e in reversed(beta)) or (mid,)


@given(st.lists(st.sampled_from(TOKENS), min_size=1, max_size=5))
def test_normal_form_is_idempotent(word):
    v = lpa_normal_form(E, {tuple(word): 1})
    again = Vector()
    for lab, c in v.items():
        again = again.axpy(c, lpa_normal_form(E, {label_word(lab): 1}))
    assert again == v
