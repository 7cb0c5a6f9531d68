"""Z-graded algebras given by a homogeneous basis and a product rule.

Everything here is windowed: a :class:`Window` bounds the degrees and the
word length of the basis labels that get enumerated, and every "for all"
check is exhaustive over that window only.  Products are always computed
exactly, even when they land outside the window.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from grcp.errors import PreconditionError, WindowExceeded
from grcp.exactlin import QQ, Echelon, Field, Vector, label_key, span_basis, span_intersect

Element = Vector

__all__ = [
    "Element",
    "Window",
    "WindowExceeded",
    "PreconditionError",
    "GradedAlgebra",
    "Subspace",
    "SubspaceSpec",
    "algebra_from_table",
    "degree_component",
    "check_grading",
    "check_strongly_graded",
    "check_graded_local_units",
    "left_annihilator",
    "perp_ideal",
    "ideal_witness",
    "ann_perp_intersection",
    "span_products",
    "product_containment",
    "subring_generated",
]


@dataclass(frozen=True)
class Window:
    min_deg: int = -4
    max_deg: int = 4
    max_len: int = 8

    def degrees(self) -> range:
        return range(self.min_deg, self.max_deg + 1)

    def __contains__(self, n: int) -> bool:
        return self.min_deg <= n <= self.max_deg

    @classmethod
    def parse(cls, text: str, max_len: int = 8) -> Window:
        """``"-4:4"`` or ``"-4..4"``."""
        sep = ".." if ".." in text else ":"
        lo, hi = text.split(sep)
        return cls(int(lo), int(hi), max_len)


class GradedAlgebra:
    """A Z-graded algebra with a (possibly infinite) homogeneous basis.

    ``labels_of(n, max_len)`` enumerates the basis labels of degree ``n``
    with word length at most ``max_len``; ``product(a, b)`` returns the
    normal-formed product of two basis labels as a :class:`Vector`.
    """

    def __init__(
        self,
        *,
        labels_of: Callable[[int, int], Iterable[Hashable]],
        degree: Callable[[Hashable], int],
        product: Callable[[Hashable, Hashable], Vector],
        field: Field = QQ,
        window: Window = Window(),
        length: Callable[[Hashable], int] | None = None,
        unit: Vector | None = None,
        name: str = "A",
        fmt: Callable[[Hashable], str] | None = None,
    ):
        self._labels_of = labels_of
        self._degree = degree
        self._product = product
        self._length = length or (lambda _: 0)
        self.field = field
        self.window = window
        self.unit = unit
        self.name = name
        self._fmt = fmt or str
        self._basis_cache: dict[int, list] = {}
        self._mul_cache: dict[tuple, Vector] = {}

    def with_window(self, window: Window) -> GradedAlgebra:
        other = GradedAlgebra(
            labels_of=self._labels_of,
            degree=self._degree,
            product=self._product,
            field=self.field,
            window=window,
            length=self._length,
            unit=self.unit,
            name=self.name,
            fmt=self._fmt,
        )
        other._mul_cache = self._mul_cache
        return other

    def with_product(self, product: Callable[[Hashable, Hashable], Vector], name: str | None = None) -> GradedAlgebra:
        """Same basis and grading, different multiplication (fault injection)."""
        return GradedAlgebra(
            labels_of=self._labels_of,
            degree=self._degree,
            product=product,
            field=self.field,
            window=self.window,
            length=self._length,
            unit=self.unit,
            name=name or self.name,
            fmt=self._fmt,
        )

    def trivially_graded(self) -> GradedAlgebra:
        """The same algebra with every windowed label placed in degree 0."""
        labels = self.labels()

        def labels_of(n, max_len):
            return labels if n == 0 else []

        other = GradedAlgebra(
            labels_of=labels_of,
            degree=lambda _: 0,
            product=self._product,
            field=self.field,
            window=Window(0, 0, self.window.max_len),
            length=self._length,
            unit=self.unit,
            name=self.name + "[trivial grading]",
            fmt=self._fmt,
        )
        other._mul_cache = self._mul_cache
        return other

    # basis -----------------------------------------------------------------

    def degree(self, label: Hashable) -> int:
        return self._degree(label)

    def length(self, label: Hashable) -> int:
        return self._length(label)

    def basis(self, n: int) -> list:
        if n not in self.window:
            raise WindowExceeded(f"degree {n} outside window {self.window.min_deg}..{self.window.max_deg}")
        if n not in self._basis_cache:
            labels = list(self._labels_of(n, self.window.max_len))
            self._basis_cache[n] = sorted(set(labels), key=label_key)
        return self._basis_cache[n]

    def labels(self) -> list:
        return [lab for n in self.window.degrees() for lab in self.basis(n)]

    def in_window(self, x: Vector | Hashable) -> bool:
        keys = x.keys() if isinstance(x, Vector) else [x]
        return all(
            self.degree(k) in self.window and self.length(k) <= self.window.max_len for k in keys
        )

    def gen(self, label: Hashable, coeff: Any = 1) -> Vector:
        return Vector.unit(label, self.field(coeff))

    def span_of_degree(self, n: int) -> Subspace:
        return Subspace([self.gen(lab) for lab in self.basis(n)], name=f"{self.name}_{n}")

    def fmt(self, x: Vector | Hashable) -> str:
        if not isinstance(x, Vector):
            return self._fmt(x)
        if not x:
            return "0"
        parts = []
        for k, c in x.sorted_items():
            s = self._fmt(k)
            if c == 1:
                parts.append(f"+ {s}")
            elif c == -1:
                parts.append(f"- {s}")
            else:
                cs = str(c)
                if cs.startswith("-"):
                    parts.append(f"- {cs[1:]}*{s}")
                else:
                    parts.append(f"+ {cs}*{s}")
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    # arithmetic -------------------------------------------------------------

    def mul_labels(self, a: Hashable, b: Hashable) -> Vector:
        key = (a, b)
        r = self._mul_cache.get(key)
        if r is None:
            r = self._product(a, b)
            self._mul_cache[key] = r
        return r

    def mul(self, x: Vector, y: Vector) -> Vector:
        out = Vector()
        if not x or not y:
            return out
        for a, ca in x.items():
            for b, cb in y.items():
                out = out.axpy(ca * cb, self.mul_labels(a, b))
        return out

    def prod(self, *xs: Vector) -> Vector:
        out = xs[0]
        for x in xs[1:]:
            out = self.mul(out, x)
        return out

    def components(self, x: Vector) -> dict[int, Vector]:
        comps: dict[int, dict] = {}
        for k, c in x.items():
            comps.setdefault(self.degree(k), {})[k] = c
        return {n: Vector(d) for n, d in sorted(comps.items())}

    def degree_of(self, x: Vector) -> int | None:
        """Degree of a nonzero homogeneous element, else None."""
        degs = {self.degree(k) for k in x}
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self):
        w = self.window
        return f"<GradedAlgebra {self.name} over {self.field} window {w.min_deg}..{w.max_deg}/len {w.max_len}>"


def algebra_from_table(
    degrees: dict[Hashable, int],
    table: dict[tuple[Hashable, Hashable], Vector | dict],
    *,
    field: Field = QQ,
    unit: Vector | dict | None = None,
    name: str = "A",
    window: Window = Window(),
) -> GradedAlgebra:
    """Finite-dimensional graded algebra from structure constants.

    Missing table entries are zero products.
    """
    tab = {k: Vector({lab: field(c) for lab, c in dict(v).items()}) for k, v in table.items()}

    def labels_of(n, max_len):
        return [lab for lab, d in degrees.items() if d == n]

    return GradedAlgebra(
        labels_of=labels_of,
        degree=degrees.__getitem__,
        product=lambda a, b: tab.get((a, b), Vector()),
        field=field,
        window=window,
        unit=None if unit is None else Vector({k: field(c) for k, c in dict(unit).items()}),
        name=name,
    )


def degree_component(A: GradedAlgebra, n: int) -> list:
    """Basis labels of degree ``n`` inside the window."""
    return A.basis(n)


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A materialized span, kept as a reduced echelon basis."""

    def __init__(self, vectors: Iterable[Vector] = (), name: str = ""):
        self._ech = Echelon(vectors)
        self.basis: list[Vector] = self._ech.basis
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, x: Vector) -> bool:
        return x in self._ech

    def reduce(self, x: Vector) -> Vector:
        return self._ech.reduce(x)

    def contains_all(self, xs: Iterable[Vector]) -> bool:
        return all(x in self for x in xs)

    def __le__(self, other: Subspace) -> bool:
        return other.contains_all(self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self):
        return hash(tuple(self.basis))

    def __and__(self, other: Subspace) -> Subspace:
        return Subspace(span_intersect(self.basis, other.basis))

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace(self.basis + other.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def labels(self) -> set:
        return {k for v in self.basis for k in v}

    def __repr__(self):
        return f"<Subspace {self.name or ''} dim {self.dim}>"


@dataclass
class SubspaceSpec:
    """Generators plus a closure rule, materialized against an algebra.

    ``closure`` is one of ``none``, ``left-ideal``, ``right-ideal``,
    ``two-sided`` or ``subring``.  Ideal closures multiply by the windowed
    basis of ``ring`` (the whole windowed algebra when ``ring`` is None).
    """

    generators: list[Vector]
    closure: str = "none"
    ring: Subspace | None = None
    name: str = ""

    def materialize(self, A: GradedAlgebra) -> Subspace:
        if self.closure not in ("none", "left-ideal", "right-ideal", "two-sided", "subring"):
            raise ValueError(f"unknown closure {self.closure!r}")
        ech = Echelon()
        frontier = [g for g in self.generators if ech.add(g)]
        if self.closure == "none":
            return Subspace(ech.basis, self.name)
        acting = self.ring.basis if self.ring is not None else [A.gen(lab) for lab in A.labels()]
        while frontier:
            new = []
            for x in frontier:
                if self.closure == "subring":
                    pairs = [(x, y) for y in ech.basis] + [(y, x) for y in ech.basis]
                else:
                    pairs = []
                    if self.closure in ("left-ideal", "two-sided"):
                        pairs += [(a, x) for a in acting]
                    if self.closure in ("right-ideal", "two-sided"):
                        pairs += [(x, a) for a in acting]
                for a, b in pairs:
                    p = A.mul(a, b)
                    if p and A.in_window(p) and ech.add(p):
                        new.append(p)
            frontier = new
        return Subspace(ech.basis, self.name)


def _kernel_in(basis: Sequence[Vector], image: Callable[[Vector], Vector]) -> list[Vector]:
    """Basis of {sum c_i b_i : sum c_i image(b_i) = 0}."""
    ech = Echelon(track=True)
    for b in basis:
        ech.add(image(b))
    out = []
    for rel in ech.relations:
        v = Vector()
        for i, c in rel.items():
            v = v.axpy(c, basis[i])
        out.append(v)
    return span_basis(out)


def _tagged(parts: Iterable[tuple[Hashable, Vector]]) -> Vector:
    d = {}
    for tag, v in parts:
        for k, c in v.items():
            d[(tag, k)] = c
    return Vector(d)


def span_products(A: GradedAlgebra, X: Subspace, Y: Subspace, name: str = "") -> Subspace:
    """span{x y : x in basis X, y in basis Y}."""
    return Subspace((A.mul(x, y) for x in X.basis for y in Y.basis), name=name)


def product_containment(A: GradedAlgebra, X: Subspace, Y: Subspace, Z: Subspace):
    """First basis pair (x, y) with xy not in Z, or None."""
    for x in X.basis:
        for y in Y.basis:
            p = A.mul(x, y)
            if p not in Z:
                return (x, y, p)
    return None


def ideal_witness(A: GradedAlgebra, R: Subspace, J: Subspace):
    """None if J is a two-sided ideal of R, else a violating product."""
    if not J <= R:
        for y in J.basis:
            if y not in R:
                return ("not-in-R", y, y, y)
    for r in R.basis:
        for y in J.basis:
            for side, p in (("left", A.mul(r, y)), ("right", A.mul(y, r))):
                if p not in J:
                    return (side, r, y, p)
    return None


def left_annihilator(A: GradedAlgebra, R: Subspace, I: Subspace) -> Subspace:
    """ann_R(I) = {r in R : r x = 0 for every x in I}."""
    basis = _kernel_in(R.basis, lambda r: _tagged((i, A.mul(r, x)) for i, x in enumerate(I.basis)))
    return Subspace(basis, name="ann")


def perp_ideal(A: GradedAlgebra, R: Subspace, J: Subspace, check: bool = True) -> Subspace:
    """J^perp = {r in R : r y = y r = 0 for every y in J}.

    With ``check`` the two-sided-ideal precondition on J is enforced.
    """
    if check:
        w = ideal_witness(A, R, J)
        if w is not None:
            raise PreconditionError(f"not a two-sided ideal of R: {w[0]} product {A.fmt(w[3])}")
    basis = _kernel_in(R.basis, lambda r: _tagged(_perp_parts(A, r, J)))
    return Subspace(basis, name="perp")


def _perp_parts(A, r, J):
    for i, y in enumerate(J.basis):
        yield ("l", i), A.mul(r, y)
        yield ("r", i), A.mul(y, r)


def ann_perp_intersection(A: GradedAlgebra, R: Subspace, I: Subspace) -> Subspace:
    """ann_R(I) ∩ ann_R(I)^perp; zero exactly when the annihilator condition holds."""
    ann = left_annihilator(A, R, I)
    return ann & perp_ideal(A, R, ann, check=False)


# ---------------------------------------------------------------------------
# whole-algebra checks


@dataclass
class GradingReport:
    ok: bool
    checked_pairs: int = 0
    checked_triples: int = 0
    violation: str | None = None
    witness: tuple = ()


def check_grading(A: GradedAlgebra, associativity: bool = True) -> GradingReport:
    """Graded multiplicativity on all windowed pairs, associativity on triples."""
    labels = A.labels()
    rep = GradingReport(ok=True)
    for a in labels:
        for b in labels:
            rep.checked_pairs += 1
            p = A.mul_labels(a, b)
            target = A.degree(a) + A.degree(b)
            for k in p:
                if A.degree(k) != target:
                    return GradingReport(False, rep.checked_pairs, 0, "grading", (a, b, k))
    if associativity:
        gens = {a: A.gen(a) for a in labels}
        left = {}
        for a in labels:
            for b in labels:
                left[a, b] = A.mul_labels(a, b)
        for a in labels:
            for b in labels:
                ab = left[a, b]
                for c in labels:
                    rep.checked_triples += 1
                    lhs = A.mul(ab, gens[c])
                    rhs = A.mul(gens[a], left[b, c])
                    if lhs != rhs:
                        rep.ok = False
                        rep.violation = "associativity"
                        rep.witness = (a, b, c)
                        return rep
    return rep


@dataclass
class StrongGradingReport:
    ok: bool
    witness: tuple | None = None
    checked: list = field(default_factory=list)


def check_strongly_graded(A: GradedAlgebra) -> StrongGradingReport:
    """span(A_m A_n) = A_{m+n} for all m, n, m+n in the window."""
    rep = StrongGradingReport(ok=True)
    degs = list(A.window.degrees())
    for m in degs:
        for n in degs:
            if m + n not in A.window:
                continue
            rep.checked.append((m, n))
            target = A.basis(m + n)
            if not target:
                continue
            prods = Subspace(A.mul_labels(a, b) for a in A.basis(m) for b in A.basis(n))
            for lab in target:
                if A.gen(lab) not in prods:
                    rep.ok = False
                    rep.witness = (m, n, lab)
                    return rep
    return rep


def check_graded_local_units(
    A: GradedAlgebra, xs: Sequence[Vector], max_idempotent_labels: int = 14
) -> Vector | None:
    """A degree-0 idempotent e with e x e = x for every x in ``xs``, or None.

    For an idempotent e, exe = x iff ex = x = xe, so candidates are filtered
    by those linear conditions.  Search order: sums of idempotent basis
    labels by increasing size, then the unit, then the canonical particular
    solution of the linear system.
    """
    for x in xs:
        if x and A.degree_of(x) is None:
            raise PreconditionError(f"{A.fmt(x)} is not homogeneous")

    def works(e: Vector) -> bool:
        return A.mul(e, e) == e and all(A.mul(A.mul(e, x), e) == x for x in xs)

    zero_labels = A.basis(0)
    idem = [lab for lab in zero_labels if A.mul_labels(lab, lab) == A.gen(lab)]
    if len(idem) <= max_idempotent_labels:
        for size in range(len(idem) + 1):
            for combo in itertools.combinations(idem, size):
                e = Vector({lab: A.field.one for lab in combo})
                if works(e):
                    return e
    if A.unit is not None and works(A.unit):
        return A.unit
    # linear conditions e x = x and x e = x over the windowed degree-0 basis
    cols = [A.gen(lab) for lab in zero_labels]
    ech = Echelon(track=True)
    for e in cols:
        ech.add(_tagged(itertools.chain(((("l", i), A.mul(e, x)) for i, x in enumerate(xs)),
                                         ((("r", i), A.mul(x, e)) for i, x in enumerate(xs)))))
    target = _tagged(itertools.chain(((("l", i), x) for i, x in enumerate(xs)),
                                     ((("r", i), x) for i, x in enumerate(xs))))
    combo = ech.express(target)
    if combo is not None:
        e = Vector()
        for i, c in combo.items():
            e = e.axpy(c, cols[i])
        if works(e):
            return e
    return None


@dataclass
class GeneratedSubring:
    span: Subspace
    saturated: bool
    steps: int
    truncated_products: int

    @property
    def dim(self) -> int:
        return self.span.dim


def subring_generated(
    A: GradedAlgebra, gens: Sequence[Subspace], max_len: int | None = None
) -> GeneratedSubring:
    """Span of all words of length <= max_len in the generator bases.

    Products leaving the window are dropped and counted; ``saturated`` means
    the last length step added nothing new.
    """
    max_len = A.window.max_len if max_len is None else max_len
    letters = [g for s in gens for g in s.basis]
    ech = Echelon()
    frontier = [g for g in letters if ech.add(g)]
    truncated = 0
    steps = 1
    saturated = not frontier
    while frontier and steps < max_len:
        steps += 1
        new = []
        for w in frontier:
            for g in letters:
                p = A.mul(w, g)
                if not p:
                    continue
                if not A.in_window(p):
                    truncated += 1
                    continue
                if ech.add(p):
                    new.append(p)
        frontier = new
        if not new:
            saturated = True
    return GeneratedSubring(Subspace(ech.basis, "generated"), saturated, steps, truncated)
