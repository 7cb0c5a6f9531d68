"""Plain-text input documents: INI-like sections of ``key = value`` lines.

Every document starts with a ``[document]`` section whose ``kind`` is one
of graph, groupoid, crossed-product, corner-skew, htriple or
realization-job.  Maps such as range and source get their own sections, one
entry per line; composition entries read ``g h = gh``.  Lines starting with
``#`` or ``;`` are comments.

    [document]
    kind = graph

    [graph]
    vertices = u v w
    edges = e f g

    [range]
    e = u
    ...
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from grcp.errors import ParseError, SemanticError
from grcp.exactlin import Field, Vector
from grcp.exprs import split_terms
from grcp.graded import GradedAlgebra, Subspace, SubspaceSpec, Window
from grcp.groupoid import FiniteGroupoid
from grcp.instances.graph import Graph

KINDS = ("graph", "groupoid", "crossed-product", "corner-skew", "htriple", "realization-job")
_SECTION = re.compile(r"^\[([A-Za-z0-9_.\-]+)\]$")


@dataclass
class Entry:
    key: str
    value: str
    line: int = field(default=0, compare=False)


@dataclass
class Section:
    name: str
    entries: list[Entry] = field(default_factory=list)
    line: int = field(default=0, compare=False)

    def get(self, key: str, default: str | None = None) -> str | None:
        for e in self.entries:
            if e.key == key:
                return e.value
        return default

    def entry(self, key: str) -> Entry | None:
        return next((e for e in self.entries if e.key == key), None)

    def require(self, key: str) -> Entry:
        e = self.entry(key)
        if e is None:
            raise SemanticError(f"section [{self.name}] needs '{key}'", self.line, 1)
        return e


@dataclass
class InputDocument:
    kind: str
    sections: list[Section] = field(default_factory=list)

    def section(self, name: str) -> Section | None:
        return next((s for s in self.sections if s.name == name), None)

    def require(self, name: str) -> Section:
        s = self.section(name)
        if s is None:
            raise SemanticError(f"{self.kind} document needs a [{name}] section", 1, 1)
        return s

    def has(self, name: str) -> bool:
        return self.section(name) is not None


def parse(text: str) -> InputDocument:
    """Syntax-check ``text`` into sections; errors carry 1-based positions."""
    sections: list[Section] = []
    current: Section | None = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        m = _SECTION.match(line)
        if m:
            name = m.group(1)
            if any(s.name == name for s in sections):
                raise ParseError(f"duplicate section [{name}]", n, col)
            current = Section(name, [], n)
            sections.append(current)
            continue
        if line.startswith("["):
            raise ParseError("malformed section header", n, col)
        if "=" not in line:
            raise ParseError("expected 'key = value'", n, col)
        if current is None:
            raise ParseError("entry before the first section", n, col)
        key, _, value = line.partition("=")
        key = " ".join(key.split())
        if not key:
            raise ParseError("missing key", n, col)
        if current.entry(key) is not None:
            raise ParseError(f"duplicate key '{key}' in [{current.name}]", n, col)
        current.entries.append(Entry(key, value.strip(), n))
    if not sections:
        raise ParseError("empty document", 1, 1)
    head = sections[0]
    if head.name != "document":
        raise ParseError("the first section must be [document]", head.line, 1)
    kind = head.get("kind")
    if kind is None:
        raise ParseError("[document] needs 'kind'", head.line, 1)
    if kind not in KINDS:
        e = head.entry("kind")
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", e.line, 1)
    return InputDocument(kind, sections)


def serialize(doc: InputDocument) -> str:
    blocks = []
    for s in doc.sections:
        lines = [f"[{s.name}]"] + [f"{e.key} = {e.value}" for e in s.entries]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def document(kind: str, sections: list[tuple[str, list[tuple[str, str]]]], **head: str) -> InputDocument:
    """Build a document in memory; ``head`` goes into [document] after kind."""
    first = Section("document", [Entry("kind", kind)] + [Entry(k, str(v)) for k, v in head.items()])
    rest = [Section(name, [Entry(k, v) for k, v in entries]) for name, entries in sections]
    return InputDocument(kind, [first] + rest)


# ---------------------------------------------------------------------------
# interpretation


def _words(entry: Entry) -> list[str]:
    return entry.value.split()


def _map(doc: InputDocument, name: str) -> dict[str, tuple[str, int]]:
    s = doc.require(name)
    return {e.key: (e.value, e.line) for e in s.entries}


def window_of(doc: InputDocument, override: Window | None = None, max_len: int | None = None) -> Window:
    if override is not None:
        return override
    head = doc.sections[0]
    e = head.entry("window")
    ml = max_len or 8
    if e is None:
        return Window(-4, 4, ml)
    try:
        return Window.parse(e.value, ml)
    except ValueError as exc:
        raise SemanticError(str(exc), e.line, 1) from None


def doc_graph(doc: InputDocument) -> Graph:
    g = doc.require("graph")
    vertices = _words(g.require("vertices"))
    edges_entry = g.entry("edges")
    edges = _words(edges_entry) if edges_entry else []
    rng = _map(doc, "range") if edges else {}
    src = _map(doc, "source") if edges else {}
    for m, what in ((rng, "range"), (src, "source")):
        for e, (v, line) in m.items():
            if e not in edges:
                raise SemanticError(f"{what} given on unknown edge {e!r}", line, 1)
            if v not in vertices:
                raise SemanticError(f"{what} of edge {e!r} is unknown vertex {v!r}", line, 1)
        for e in edges:
            if e not in m:
                raise SemanticError(f"{what} undefined on edge {e!r}", doc.require(what).line, 1)
    try:
        return Graph(tuple(vertices), tuple(edges), {e: v for e, (v, _) in rng.items()},
                     {e: v for e, (v, _) in src.items()})
    except SemanticError as exc:
        raise SemanticError(exc.message, g.line, 1) from None


def graph_document(graph: Graph, name: str = "") -> InputDocument:
    head = {"name": name} if name else {}
    return document("graph", [
        ("graph", [("vertices", " ".join(graph.vertices)), ("edges", " ".join(graph.edges))]),
        ("range", [(e, graph.r(e)) for e in graph.edges]),
        ("source", [(e, graph.s(e)) for e in graph.edges]),
    ], **head)


def doc_groupoid(doc: InputDocument) -> FiniteGroupoid:
    """Explicit groupoid sections, or the boundary path groupoid of a [graph]."""
    if not doc.has("groupoid"):
        from grcp.instances.boundary import boundary_path_groupoid

        return boundary_path_groupoid(doc_graph(doc))
    g = doc.require("groupoid")
    arrows = _words(g.require("arrows"))
    known = set(arrows)
    maps = {}
    for name in ("range", "source", "inverse", "cocycle"):
        m = _map(doc, name)
        for a in arrows:
            if a not in m:
                raise SemanticError(f"{name} undefined on arrow {a!r}", doc.require(name).line, 1)
        for a, (v, line) in m.items():
            if a not in known:
                raise SemanticError(f"{name} given on unknown arrow {a!r}", line, 1)
            if name != "cocycle" and v not in known:
                raise SemanticError(f"{name} of {a!r} is unknown arrow {v!r}", line, 1)
        maps[name] = m
    coc = {}
    for a, (v, line) in maps["cocycle"].items():
        try:
            coc[a] = int(v)
        except ValueError:
            raise SemanticError(f"cocycle value {v!r} is not an integer", line, 1) from None
    comp = {}
    for key, (v, line) in _map(doc, "composition").items():
        parts = key.split()
        if len(parts) != 2 or any(p not in known for p in parts) or v not in known:
            raise SemanticError(f"bad composition entry '{key} = {v}'", line, 1)
        comp[parts[0], parts[1]] = v
    G = FiniteGroupoid(
        tuple(arrows),
        {a: v for a, (v, _) in maps["range"].items()},
        {a: v for a, (v, _) in maps["source"].items()},
        {a: v for a, (v, _) in maps["inverse"].items()},
        comp, coc, name=g.get("name", "G"),
    )
    err = G.check_axioms() or G.check_cocycle()
    if err:
        raise SemanticError(f"not a graded groupoid: {err}", g.line, 1)
    return G


def groupoid_document(G: FiniteGroupoid) -> InputDocument:
    name = {a: G.fmt(a) for a in G.arrows}
    comp = []
    for g in G.arrows:
        for h in G.arrows:
            k = G.compose(g, h)
            if k is not None:
                comp.append((f"{name[g]} {name[h]}", name[k]))
    return document("groupoid", [
        ("groupoid", [("name", G.name), ("arrows", " ".join(name[a] for a in G.arrows))]),
        ("range", [(name[a], name[G.r[a]]) for a in G.arrows]),
        ("source", [(name[a], name[G.s[a]]) for a in G.arrows]),
        ("inverse", [(name[a], name[G.inv[a]]) for a in G.arrows]),
        ("cocycle", [(name[a], str(G.cocycle[a])) for a in G.arrows]),
        ("composition", comp),
    ])


def resolve_arrows(G: FiniteGroupoid, entry: Entry) -> frozenset:
    by_name = {G.fmt(a): a for a in G.arrows}
    out = set()
    for tok in entry.value.split():
        if tok not in by_name:
            raise SemanticError(f"unknown arrow {tok!r}", entry.line, 1)
        out.add(by_name[tok])
    return frozenset(out)


def doc_htriple(doc: InputDocument):
    from grcp.steinberg import HTriple

    G = doc_groupoid(doc)
    h = doc.require("htriple")
    sets = [resolve_arrows(G, h.require(k)) for k in ("H0", "H1", "H-1")]
    return G, HTriple.of(*sets)


def doc_ring(doc: InputDocument, fld: Field):
    from grcp.instances.rings import FiniteRing

    r = doc.require("ring")
    basis = _words(r.require("basis"))
    table = {}
    prods = doc.section("products")
    ring = FiniteRing(tuple(basis), {}, {}, fld, name=r.get("name", "R"))
    if prods is not None:
        for e in prods.entries:
            parts = e.key.split()
            if len(parts) != 2 or any(p not in basis for p in parts):
                raise SemanticError(f"bad product entry '{e.key}'", e.line, 1)
            table[parts[0], parts[1]] = _ring_expr(ring, e)
    one = r.require("one")
    ring = FiniteRing(tuple(basis), table, {}, fld, name=ring.name)
    ring.one = _ring_expr(ring, one, allow_scalar=False)
    return ring


def _ring_expr(ring, entry: Entry, allow_scalar: bool = True) -> Vector:
    out = Vector()
    for coef, body, col in split_terms(entry.value, entry.line):
        if not body and str(abs(coef)) in ring.basis:
            # a basis element named like a number, e.g. the "1" of K
            sign = 1 if coef > 0 else -1
            out = out.axpy(ring.field(sign), ring.gen(str(abs(coef))))
            continue
        if not body:
            if not allow_scalar or not ring.one:
                raise SemanticError("bare scalar without a unit", entry.line, col)
            out = out.axpy(ring.field(coef), ring.one)
            continue
        if body not in ring.basis:
            raise SemanticError(f"unknown basis element {body!r}", entry.line, col)
        out = out.axpy(ring.field(coef), ring.gen(body))
    return out


def _linear_map(doc: InputDocument, ring, name: str) -> dict:
    s = doc.require(name)
    out = {}
    for e in s.entries:
        if e.key not in ring.basis:
            raise SemanticError(f"unknown basis element {e.key!r}", e.line, 1)
        out[e.key] = _ring_expr(ring, e)
    for b in ring.basis:
        if b not in out:
            raise SemanticError(f"[{name}] undefined on {b!r}", s.line, 1)
    return out


def doc_crossed(doc: InputDocument, fld: Field, window: Window):
    from grcp.instances.rings import CrossedProductSpec

    ring = doc_ring(doc, fld)
    return CrossedProductSpec(ring, _linear_map(doc, ring, "automorphism"), window)


def doc_corner(doc: InputDocument, fld: Field, window: Window):
    from grcp.instances.rings import CornerSkewSpec

    ring = doc_ring(doc, fld)
    c = doc.require("corner")
    return CornerSkewSpec(ring, _ring_expr(ring, c.require("p")), _linear_map(doc, ring, "alpha"), window)


def ring_document(kind: str, ring, maps: dict[str, dict], extra: list | None = None) -> InputDocument:
    products = [(f"{a} {b}", ring.fmt(v)) for (a, b), v in sorted(ring.table.items()) if v]
    sections = [
        ("ring", [("name", ring.name), ("basis", " ".join(ring.basis)), ("one", ring.fmt(ring.one))]),
        ("products", products),
    ]
    sections += extra or []
    for name, m in maps.items():
        sections.append((name, [(b, ring.fmt(m[b])) for b in ring.basis]))
    return document(kind, sections)


def parse_element(A: GradedAlgebra, text: str, line: int = 0) -> Vector:
    """A linear combination of basis labels written as A formats them.

    Leavitt path algebras accept arbitrary words and reduce them.
    """
    if getattr(A, "graph", None) is not None:
        from grcp.instances.lpa import parse_lpa_element

        return parse_lpa_element(A, text, line)
    names = {A.fmt(lab): lab for lab in A.labels()}
    out = Vector()
    for coef, body, col in split_terms(text, line):
        if not body:
            if A.unit is None:
                raise SemanticError("bare scalar but the algebra has no unit", line, col)
            out = out.axpy(A.field(coef), A.unit)
            continue
        if body not in names:
            raise SemanticError(f"unknown basis element {body!r}", line, col)
        out = out.axpy(A.field(coef), A.gen(names[body]))
    return out


def _subspace(A: GradedAlgebra, entry: Entry, closure: str | None) -> Subspace | SubspaceSpec:
    gens = [parse_element(A, part, entry.line) for part in entry.value.split(";") if part.strip()]
    if closure:
        return SubspaceSpec(gens, closure, name=entry.key)
    return Subspace(gens, entry.key)


def doc_algebra(doc: InputDocument, fld: Field, window: Window):
    """(A, RealizationData, groupoid or None) for any document describing an algebra."""
    from grcp.instances.lpa import build_lpa
    from grcp.instances.rings import build_corner_skew, build_crossed_product

    kind = doc.kind
    algebra = None
    if kind == "realization-job":
        algebra = doc.require("job").require("algebra").value
    if kind == "graph" or algebra in ("lpa", "toeplitz"):
        A, data = build_lpa(doc_graph(doc), window, fld, cuntz_krieger=algebra != "toeplitz")
        return A, data, None
    if kind == "crossed-product" or algebra == "crossed-product":
        A, data = build_crossed_product(doc_crossed(doc, fld, window))
        return A, data, None
    if kind == "corner-skew" or algebra == "corner-skew":
        A, data = build_corner_skew(doc_corner(doc, fld, window))
        return A, data, None
    if kind == "htriple" or algebra == "steinberg":
        from grcp.steinberg import steinberg_realization_data

        G, H = doc_htriple(doc)
        sr = steinberg_realization_data(G, H, fld, require=False)
        return sr.data.A, sr.data, (G, H)
    if kind == "groupoid":
        from grcp.steinberg import steinberg_algebra

        G = doc_groupoid(doc)
        A = steinberg_algebra(G, fld)
        from grcp.realization import RealizationData

        return A, RealizationData(A, A.span_of_degree(0), A.span_of_degree(1), A.span_of_degree(-1)), None
    raise SemanticError(f"unknown algebra {algebra!r}", doc.require("job").line, 1)


def doc_realization(doc: InputDocument, fld: Field, window: Window):
    """RealizationData, with optional [realization] overrides of R, I and J."""
    from grcp.realization import RealizationData

    A, data, extra = doc_algebra(doc, fld, window)
    over = doc.section("realization")
    if over is None:
        return data, extra
    parts = {}
    for key in ("R", "I", "J"):
        e = over.entry(key)
        closure = over.get(f"{key}-closure")
        parts[key] = _subspace(A, e, closure) if e is not None else getattr(data, key)
    return RealizationData(A, parts["R"], parts["I"], parts["J"], name=data.name), extra

