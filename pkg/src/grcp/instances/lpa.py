"""Leavitt path algebras and their Toeplitz relatives.

Basis labels are triples ``(alpha, beta, mid)`` standing for the monomial
alpha beta^* with s(alpha) = s(beta) = mid; a vertex v is ``((), (), v)``.
The Cuntz-Krieger relation at a vertex v with receivers is oriented at its
special edge e_v (the least receiver): e_v e_v^* -> v - sum of the others.
Monomials whose alpha and beta end in the same special edge are therefore
not basis elements.

Two independent routes compute products: :func:`lpa_product` works on
labels directly, while :class:`LpaRewriter` rewrites generator words with
length-two rules and can check its own critical pairs.
"""

from __future__ import annotations

from collections.abc import Hashable
from dataclasses import dataclass, field
from fractions import Fraction

from grcp.errors import ParseError
from grcp.exactlin import QQ, Field, Vector
from grcp.exprs import split_terms, tokenize_word
from grcp.graded import GradedAlgebra, Subspace, Window
from grcp.instances.graph import Graph
from grcp.realization import RealizationData

Label = tuple  # (alpha, beta, mid)


def vertex_label(v: str) -> Label:
    return ((), (), v)


def edge_label(graph: Graph, e: str) -> Label:
    return ((e,), (), graph.s(e))


def ghost_label(graph: Graph, e: str) -> Label:
    return ((), (e,), graph.s(e))


def is_forbidden(graph: Graph, label: Label) -> bool:
    alpha, beta, _ = label
    if not alpha or not beta or alpha[-1] != beta[-1]:
        return False
    e = alpha[-1]
    return graph.special_edge(graph.r(e)) == e


def lpa_normalize(graph: Graph, label: Label, cuntz_krieger: bool = True) -> Vector:
    """Expand a monomial alpha beta^* into the normal-form basis."""
    if not cuntz_krieger or not is_forbidden(graph, label):
        return Vector.unit(label)
    alpha, beta, _ = label
    e = alpha[-1]
    v = graph.r(e)
    out = lpa_normalize(graph, (alpha[:-1], beta[:-1], v), cuntz_krieger)
    for other in graph.receivers(v):
        if other != e:
            out = out - Vector.unit((alpha[:-1] + (other,), beta[:-1] + (other,), graph.s(other)))
    return out


def lpa_product(graph: Graph, a: Label, b: Label, cuntz_krieger: bool = True) -> Vector:
    """(alpha1 beta1^*)(alpha2 beta2^*) by cancelling beta1^* against alpha2."""
    a1, b1, m1 = a
    a2, b2, m2 = b
    if graph.path_range(b1, m1) != graph.path_range(a2, m2):
        return Vector()
    k = min(len(b1), len(a2))
    if b1[:k] != a2[:k]:
        return Vector()
    if len(b1) <= len(a2):
        rest = a2[len(b1):]
        label = (a1 + rest, b2, m2)
    else:
        rest = b1[len(a2):]
        label = (a1, b2 + rest, m1)
    return lpa_normalize(graph, label, cuntz_krieger)


def lpa_labels(graph: Graph, degree: int, max_len: int, cuntz_krieger: bool = True) -> list[Label]:
    out = []
    for v in graph.vertices:
        paths = graph.paths_with_source(v, max_len)
        for alpha in paths:
            for beta in paths:
                if len(alpha) - len(beta) != degree or len(alpha) + len(beta) > max_len:
                    continue
                lab = (alpha, beta, v)
                if cuntz_krieger and is_forbidden(graph, lab):
                    continue
                out.append(lab)
    return out


def format_label(graph: Graph, label: Label) -> str:
    alpha, beta, mid = label
    if not alpha and not beta:
        return mid
    sep = "" if all(len(e) == 1 for e in graph.edges) else "."
    left = sep.join(alpha)
    right = sep.join(e + "*" for e in reversed(beta))
    if left and right:
        return left + sep + right
    return left or right


def build_lpa(
    graph: Graph,
    window: Window = Window(),
    field: Field = QQ,
    cuntz_krieger: bool = True,
) -> tuple[GradedAlgebra, RealizationData]:
    """L_K(E) (or its Toeplitz algebra when ``cuntz_krieger`` is False).

    Returns the algebra together with R = span E^0, I = span E^1 and
    J = span (E^1)^*.
    """
    name = ("L" if cuntz_krieger else "T") + "(" + ",".join(graph.vertices) + ")"

    def product(a, b):
        return Vector({k: field(c) for k, c in lpa_product(graph, a, b, cuntz_krieger).items()})

    A = GradedAlgebra(
        labels_of=lambda n, max_len: lpa_labels(graph, n, max_len, cuntz_krieger),
        degree=lambda lab: len(lab[0]) - len(lab[1]),
        length=lambda lab: len(lab[0]) + len(lab[1]),
        product=product,
        field=field,
        window=window,
        unit=Vector({vertex_label(v): field.one for v in graph.vertices}),
        name=name,
        fmt=lambda lab: format_label(graph, lab),
    )
    R = Subspace([A.gen(vertex_label(v)) for v in graph.vertices], "R")
    I = Subspace([A.gen(edge_label(graph, e)) for e in graph.edges], "I")
    J = Subspace([A.gen(ghost_label(graph, e)) for e in graph.edges], "J")
    A.graph = graph
    A.cuntz_krieger = cuntz_krieger
    return A, RealizationData(A, R, I, J, name=name)


# ---------------------------------------------------------------------------
# generator-word rewriting

Word = tuple  # of tokens: vertex name, edge name, or edge name + "*"


@dataclass
class LpaRewriter:
    """Length-two rewrite rules on generator words.

    The rules are the defining relations read left to right, plus the
    vanishing of non-composable products that they imply.
    """

    graph: Graph
    cuntz_krieger: bool = True
    steps: int = field(default=0, init=False)

    def _kind(self, tok: str) -> tuple[str, str]:
        if tok.endswith("*"):
            return "ghost", tok[:-1]
        if tok in self.graph.vertices:
            return "vertex", tok
        return "edge", tok

    def _left(self, tok):
        """Vertex that must sit immediately to the left of ``tok``."""
        kind, x = self._kind(tok)
        if kind == "vertex":
            return x
        return self.graph.r(x) if kind == "edge" else self.graph.s(x)

    def _right(self, tok):
        """Vertex that must sit immediately to the right of ``tok``."""
        kind, x = self._kind(tok)
        if kind == "vertex":
            return x
        return self.graph.s(x) if kind == "edge" else self.graph.r(x)

    def rule(self, x: str, y: str) -> dict[Word, Fraction] | None:
        """Rewrite of the pair ``x y``, or None when it is irreducible."""
        g = self.graph
        kx, ex = self._kind(x)
        ky, ey = self._kind(y)
        if self._right(x) != self._left(y):
            return {}
        if kx == "vertex":
            return {(y,): Fraction(1)}
        if ky == "vertex":
            return {(x,): Fraction(1)}
        if kx == "ghost" and ky == "edge":
            return {(g.s(ex),): Fraction(1)} if ex == ey else {}
        if self.cuntz_krieger and kx == "edge" and ky == "ghost" and ex == ey:
            v = g.r(ex)
            if g.special_edge(v) == ex:
                out = {(v,): Fraction(1)}
                for other in g.receivers(v):
                    if other != ex:
                        out[(other, other + "*")] = Fraction(-1)
                return out
        return None

    def _step(self, word: Word):
        for i in range(len(word) - 1):
            rep = self.rule(word[i], word[i + 1])
            if rep is not None:
                return i, rep
        return None

    def reduce(self, terms: dict[Word, Fraction]) -> dict[Word, Fraction]:
        """Leftmost rewriting until no rule applies."""
        todo = dict(terms)
        done: dict[Word, Fraction] = {}
        while todo:
            word, c = todo.popitem()
            if not c:
                continue
            hit = self._step(word)
            if hit is None:
                done[word] = done.get(word, 0) + c
                continue
            self.steps += 1
            i, rep = hit
            for w, d in rep.items():
                new = word[:i] + w + word[i + 2:]
                todo[new] = todo.get(new, 0) + c * d
        return {w: c for w, c in done.items() if c}

    def word_label(self, word: Word) -> Label:
        """Label of an irreducible nonempty word."""
        g = self.graph
        if len(word) == 1 and word[0] in g.vertices:
            return vertex_label(word[0])
        alpha = tuple(t for t in word if not t.endswith("*"))
        ghosts = [t[:-1] for t in word if t.endswith("*")]
        beta = tuple(reversed(ghosts))
        mid = g.s(alpha[-1]) if alpha else g.s(beta[-1])
        return (alpha, beta, mid)

    def to_vector(self, terms: dict[Word, Fraction], field: Field = QQ) -> Vector:
        out = Vector()
        for w, c in self.reduce(terms).items():
            out = out.axpy(field(c), Vector.unit(self.word_label(w)))
        return out

    def critical_pairs(self) -> list[Word]:
        """Every triple x y z in which both x y and y z are redexes."""
        g = self.graph
        toks = list(g.vertices) + list(g.edges) + [e + "*" for e in g.edges]
        out = []
        for y in toks:
            lefts = [x for x in toks if self.rule(x, y) is not None]
            if not lefts:
                continue
            rights = [z for z in toks if self.rule(y, z) is not None]
            out.extend((x, y, z) for x in lefts for z in rights)
        return out

    def check_confluence(self) -> tuple[bool, int, Word | None]:
        """Resolve every critical pair both ways; (ok, count, first failure)."""
        pairs = self.critical_pairs()
        for x, y, z in pairs:
            left = {w + (z,): c for w, c in self.rule(x, y).items()}
            right = {(x,) + w: c for w, c in self.rule(y, z).items()}
            if self.reduce(left) != self.reduce(right):
                return False, len(pairs), (x, y, z)
        return True, len(pairs), None


def parse_lpa_expr(graph: Graph, text: str, line: int = 0) -> dict[Word, Fraction]:
    """Parse ``ee* + ff* - 2*u`` into a formal sum of generator words.

    A bare scalar stands for that multiple of the unit (the sum of vertices).
    """
    symbols = set(graph.vertices) | set(graph.edges)
    out: dict[Word, Fraction] = {}
    for coef, body, col in split_terms(text, line):
        if not body:
            words = [(v,) for v in graph.vertices]
        else:
            toks = tokenize_word(body, symbols, line, col)
            for t in toks:
                if t.endswith("*") and t[:-1] in graph.vertices:
                    raise ParseError(f"vertex {t[:-1]} has no adjoint symbol", line, col)
            words = [tuple(toks)]
        for w in words:
            out[w] = out.get(w, 0) + coef
    return {w: c for w, c in out.items() if c}


def lpa_normal_form(
    graph: Graph, expr: str | dict[Word, Fraction], cuntz_krieger: bool = True, field: Field = QQ
) -> Vector:
    """Normal form of a formal expression in the generators, as basis labels."""
    terms = parse_lpa_expr(graph, expr) if isinstance(expr, str) else expr
    return LpaRewriter(graph, cuntz_krieger).to_vector(terms, field)


def parse_lpa_element(A: GradedAlgebra, text: str, line: int = 0) -> Vector:
    """Parse an expression straight into an element of an LPA built here."""
    graph = A.graph
    return lpa_normal_form(graph, parse_lpa_expr(graph, text, line), A.cuntz_krieger, A.field)


def label_from_name(graph: Graph, name: str) -> Hashable:
    """Label of a single monomial written like ``ef*`` or ``u``."""
    vec = lpa_normal_form(graph, name)
    if len(vec) != 1:
        raise ParseError(f"{name!r} is not a basis monomial")
    return next(iter(vec))
