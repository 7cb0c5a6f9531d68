from __future__ import annotations

from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

from grcp import textfmt
from grcp.errors import ParseError, SemanticError
from grcp.exactlin import QQ, GF
from grcp.graded import Window
from grcp.instances.boundary import boundary_path_groupoid
from grcp.instances.graph import estar_graph
from grcp.instances.lpa import build_lpa

CORPUS = sorted(p for p in resources.files("grcp.corpus").iterdir() if p.name.endswith(".grcp"))
W = Window(-4, 4, 8)


def read(name):
    return textfmt.parse(resources.files("grcp.corpus").joinpath(name).read_text())


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_round_trip(path):
    doc = textfmt.parse(path.read_text())
    text = textfmt.serialize(doc)
    assert textfmt.parse(text) == doc
    assert textfmt.serialize(textfmt.parse(text)) == text


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", 1, "empty document"),
        ("# only a comment\n", 1, "empty document"),
        ("[document]\nkind = graph\n[graph]\n[graph]\n", 4, "duplicate section"),
        ("[document]\nkind = graph\n[graph\n", 3, "malformed"),
        ("[document]\nkind = graph\n[graph]\nvertices u\n", 4, "key = value"),
        ("vertices = u\n", 1, "before the first section"),
        ("[graph]\nvertices = u\n", 1, "[document]"),
        ("[document]\nname = x\n", 1, "needs 'kind'"),
        ("[document]\nkind = spaceship\n", 2, "unknown kind"),
        ("[document]\nkind = graph\n[graph]\nedges = e\nedges = f\n", 5, "duplicate key"),
    ],
)
def test_parse_errors_are_positioned(text, line, fragment):
    with pytest.raises(ParseError) as exc:
        textfmt.parse(text)
    assert exc.value.line == line and fragment in str(exc.value)


def test_semantic_errors():
    doc = read("estar.grcp")
    doc.section("range").entries[0].value = "nowhere"
    with pytest.raises(SemanticError) as exc:
        textfmt.doc_graph(doc)
    assert exc.value.line > 0
    doc = textfmt.parse("[document]\nkind = graph\n")
    with pytest.raises(SemanticError):
        textfmt.doc_graph(doc)


def test_graph_document_round_trip():
    g = estar_graph()
    assert textfmt.doc_graph(textfmt.parse(textfmt.serialize(textfmt.graph_document(g)))) == g
    assert textfmt.doc_graph(read("estar.grcp")) == g


def test_groupoid_document_round_trip():
    G = boundary_path_groupoid(estar_graph())
    H = textfmt.doc_groupoid(textfmt.parse(textfmt.serialize(textfmt.groupoid_document(G))))
    assert len(H) == len(G) and H.check_axioms() is None and H.check_cocycle() is None
    assert sorted(H.cocycle.values()) == sorted(G.cocycle.values())


def test_htriple_document():
    G, H = textfmt.doc_htriple(read("estar_htriple.grcp"))
    assert len(G) == 25 and len(H.H0) == 5 and len(H.H1) == 6 and len(H.Hm1) == 4


def test_realization_job_matches_builder():
    doc = read("estar_job.grcp")
    data, _ = textfmt.doc_realization(doc, QQ, W)
    _, ref = build_lpa(estar_graph(), W)
    assert data.R == ref.R and data.I == ref.I and data.J == ref.J


def test_ring_documents():
    A, data, _ = textfmt.doc_algebra(read("crossed_k2.grcp"), QQ, W)
    assert data.R.dim == 2 and len(A.labels()) == 18
    A, _, _ = textfmt.doc_algebra(read("laurent.grcp"), GF(7), Window(-2, 2))
    assert len(A.labels()) == 5


def test_window_of():
    doc = read("crossed_k2.grcp")
    assert textfmt.window_of(doc, None, 8).max_deg == 4
    assert textfmt.window_of(doc, Window(-1, 1), 8).max_deg == 1


def test_parse_element(lpa_estar):
    A, _ = lpa_estar
    assert textfmt.parse_element(A, "ff* + gg*") == textfmt.parse_element(A, "w")


# property: generated documents round-trip

name = st.from_regex(r"[a-z][a-z0-9_.\-]{0,6}", fullmatch=True)
key = st.from_regex(r"[A-Za-z0-9(][A-Za-z0-9 ,()*+\-]{0,10}", fullmatch=True).map(lambda s: " ".join(s.split()))
value = st.from_regex(r"[A-Za-z0-9 ,()*+;.\-]{0,20}", fullmatch=True).map(str.strip)


@given(st.sampled_from(textfmt.KINDS),
       st.dictionaries(name.filter(lambda n: n != "document"), st.dictionaries(key.filter(bool), value, max_size=5),
                       max_size=4))
def test_generated_documents_round_trip(kind, body):
    doc = textfmt.document(kind, [(n, list(entries.items())) for n, entries in body.items()])
    text = textfmt.serialize(doc)
    assert textfmt.parse(text) == doc
