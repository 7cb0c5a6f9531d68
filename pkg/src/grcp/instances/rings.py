"""Finite-dimensional base rings, crossed products by automorphisms, and
corner skew Laurent polynomial rings."""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from grcp.errors import ParseError, PreconditionError
from grcp.exactlin import QQ, Echelon, Field, Vector
from grcp.exprs import split_terms, tokenize_word
from grcp.graded import GradedAlgebra, Subspace, Window, algebra_from_table
from grcp.realization import RealizationData

LinearMap = dict  # basis label -> Vector


@dataclass
class FiniteRing:
    """A finite-dimensional unital algebra given by structure constants."""

    basis: tuple[str, ...]
    table: Mapping[tuple[str, str], Vector]
    one: Vector
    field: Field = QQ
    name: str = "R"

    def __post_init__(self):
        self.basis = tuple(self.basis)
        f = self.field
        self.table = {k: Vector({lab: f(c) for lab, c in dict(v).items()}) for k, v in self.table.items()}
        self.one = Vector({lab: f(c) for lab, c in dict(self.one).items()})

    def gen(self, b: str, c=1) -> Vector:
        return Vector.unit(b, self.field(c))

    def mul(self, x: Vector, y: Vector) -> Vector:
        out = Vector()
        for a, ca in x.items():
            for b, cb in y.items():
                out = out.axpy(ca * cb, self.table.get((a, b), Vector()))
        return out

    def apply(self, m: LinearMap, x: Vector) -> Vector:
        out = Vector()
        for b, c in x.items():
            out = out.axpy(c, m.get(b, Vector()))
        return out

    def identity_map(self) -> LinearMap:
        return {b: self.gen(b) for b in self.basis}

    def compose(self, f: LinearMap, g: LinearMap) -> LinearMap:
        """f after g."""
        return {b: self.apply(f, g[b]) for b in self.basis}

    def inverse_map(self, m: LinearMap) -> LinearMap | None:
        ech = Echelon(track=True)
        for b in self.basis:
            ech.add(m[b])
        if ech.dim != len(self.basis):
            return None
        out = {}
        for b in self.basis:
            combo = ech.express(self.gen(b))
            out[b] = Vector({self.basis[i]: c for i, c in combo.items()})
        return out

    def power(self, m: LinearMap, k: int) -> LinearMap:
        if k < 0:
            inv = self.inverse_map(m)
            if inv is None:
                raise PreconditionError("map is not invertible")
            return self.power(inv, -k)
        out = self.identity_map()
        for _ in range(k):
            out = self.compose(m, out)
        return out

    def check_ring(self) -> str | None:
        """None, or a description of the first failed ring axiom."""
        gens = [self.gen(b) for b in self.basis]
        for x in gens:
            if self.mul(self.one, x) != x or self.mul(x, self.one) != x:
                return f"{x} is not fixed by the unit"
            for y in gens:
                xy = self.mul(x, y)
                for z in gens:
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)):
                        return f"associativity fails on {x}, {y}, {z}"
        return None

    def homomorphism_witness(self, m: LinearMap) -> tuple | None:
        """First basis pair (a, b) with m(ab) != m(a)m(b), or None."""
        for a in self.basis:
            for b in self.basis:
                lhs = self.apply(m, self.table.get((a, b), Vector()))
                rhs = self.mul(m[a], m[b])
                if lhs != rhs:
                    return (a, b)
        return None

    def is_automorphism(self, m: LinearMap) -> bool:
        return (
            self.homomorphism_witness(m) is None
            and self.apply(m, self.one) == self.one
            and self.inverse_map(m) is not None
        )

    def corner(self, p: Vector) -> list[Vector]:
        ech = Echelon(self.mul(self.mul(p, self.gen(b)), p) for b in self.basis)
        return ech.basis

    def parse(self, text: str, line: int = 0) -> Vector:
        """``e1 + 2*e2``; a bare scalar is a multiple of the unit."""
        out = Vector()
        for coef, body, col in split_terms(text, line):
            if not body:
                out = out.axpy(self.field(coef), self.one)
                continue
            toks = tokenize_word(body, set(self.basis), line, col)
            term = self.one * self.field(coef)
            for t in toks:
                if t.endswith("*"):
                    raise ParseError(f"unexpected '*' after {t[:-1]}", line, col)
                term = self.mul(term, self.gen(t))
            out = out + term
        return out

    def fmt(self, x: Vector) -> str:
        if not x:
            return "0"
        parts = []
        for b, c in x.sorted_items():
            parts.append(b if c == 1 else f"{c}*{b}")
        return " + ".join(parts).replace("+ -", "- ")


def scalar_ring(field: Field = QQ) -> FiniteRing:
    return FiniteRing(("1",), {("1", "1"): {"1": 1}}, {"1": 1}, field, name="K")


def diagonal_ring(n: int, field: Field = QQ) -> FiniteRing:
    """K^n with orthogonal idempotents e1..en."""
    names = tuple(f"e{i + 1}" for i in range(n))
    table = {(b, b): {b: 1} for b in names}
    return FiniteRing(names, table, {b: 1 for b in names}, field, name=f"K^{n}")


def permutation_map(ring: FiniteRing, perm: Mapping[str, str]) -> LinearMap:
    return {b: ring.gen(perm.get(b, b)) for b in ring.basis}


# ---------------------------------------------------------------------------
# crossed products


@dataclass
class CrossedProductSpec:
    ring: FiniteRing
    phi: LinearMap
    window: Window = field(default_factory=Window)

    def validate(self) -> None:
        err = self.ring.check_ring()
        if err:
            raise PreconditionError(err)
        if set(self.phi) != set(self.ring.basis):
            raise PreconditionError("phi must be given on every basis element")
        if not self.ring.is_automorphism(self.phi):
            raise PreconditionError("phi is not a ring automorphism")


def build_crossed_product(spec: CrossedProductSpec) -> tuple[GradedAlgebra, RealizationData]:
    """R x_phi Z on labels (b, k) = [b, k], with R = A_0, I = A_1, J = A_-1."""
    spec.validate()
    ring = spec.ring
    powers: dict[int, LinearMap] = {}

    def phi_pow(k):
        if k not in powers:
            powers[k] = ring.power(spec.phi, k)
        return powers[k]

    def product(a, b):
        (b1, k1), (b2, k2) = a, b
        r = ring.mul(ring.gen(b1), phi_pow(k1)[b2])
        return Vector({(lab, k1 + k2): c for lab, c in r.items()})

    A = GradedAlgebra(
        labels_of=lambda n, max_len: [(b, n) for b in ring.basis] if abs(n) <= max_len else [],
        degree=lambda lab: lab[1],
        length=lambda lab: abs(lab[1]),
        product=product,
        field=ring.field,
        window=spec.window,
        unit=Vector({(b, 0): c for b, c in ring.one.items()}),
        name=f"{ring.name} x Z",
        fmt=lambda lab: f"[{lab[0]},{lab[1]}]",
    )
    A.ring = ring
    R = A.span_of_degree(0)
    I = A.span_of_degree(1) if 1 in A.window else Subspace()
    J = A.span_of_degree(-1) if -1 in A.window else Subspace()
    return A, RealizationData(A, R, I, J, name=A.name)


def lift(ring_elem: Vector, k: int) -> Vector:
    """[r, k] as an element of the crossed product."""
    return Vector({(b, k): c for b, c in ring_elem.items()})


# ---------------------------------------------------------------------------
# corner skew Laurent polynomial rings


@dataclass
class CornerSkewSpec:
    """Unital R, an idempotent p and an isomorphism alpha: R -> pRp."""

    ring: FiniteRing
    p: Vector
    alpha: LinearMap
    window: Window = field(default_factory=Window)

    def validate(self) -> None:
        ring = self.ring
        err = ring.check_ring()
        if err:
            raise PreconditionError(err)
        if ring.mul(self.p, self.p) != self.p:
            raise PreconditionError("p is not idempotent")
        if set(self.alpha) != set(ring.basis):
            raise PreconditionError("alpha must be given on every basis element")
        if ring.homomorphism_witness(self.alpha) is not None:
            raise PreconditionError("alpha is not multiplicative")
        images = Echelon(self.alpha[b] for b in ring.basis)
        if images.dim != len(ring.basis):
            raise PreconditionError("alpha is not injective")
        corner = Echelon(ring.corner(self.p))
        if corner.dim != images.dim or any(v not in corner for v in images.basis):
            raise PreconditionError("the image of alpha is not pRp")
        if ring.apply(self.alpha, ring.one) != self.p:
            raise PreconditionError("alpha does not send 1 to p")

    def alpha_inv(self, x: Vector) -> Vector:
        """alpha^-1 on pRp."""
        ech = Echelon(track=True)
        for b in self.ring.basis:
            ech.add(self.alpha[b])
        combo = ech.express(x)
        if combo is None:
            raise PreconditionError(f"{self.ring.fmt(x)} is not in pRp")
        return Vector({self.ring.basis[i]: c for i, c in combo.items()})


def build_corner_skew(spec: CornerSkewSpec) -> tuple[GradedAlgebra, RealizationData]:
    """R[t+, t-, alpha] on labels (d, b).

    ``(d, b)`` with d >= 0 is t-^d phi(b) (degree d); with d < 0 it is
    phi(b) t+^-d.  A finite-dimensional R admits an isomorphism onto pRp
    only when p = 1, so alpha is an automorphism and t+ = t-^-1; the
    product is then t-^d1 phi(x) t-^d2 phi(y) = t-^(d1+d2) phi(alpha^d2(x) y)
    after moving everything into the t-^d phi(.) form.
    """
    spec.validate()
    ring = spec.ring
    powers: dict[int, LinearMap] = {}

    def alpha_pow(k):
        if k not in powers:
            powers[k] = ring.power(spec.alpha, k)
        return powers[k]

    def to_left(d, b):
        # phi(b) t+^k = t-^-k phi(alpha^-k b)
        return ring.gen(b) if d >= 0 else alpha_pow(d)[b]

    def from_left(d, z):
        return z if d >= 0 else ring.apply(alpha_pow(-d), z)

    def product(a, b):
        (d1, x), (d2, y) = a, b
        left = ring.apply(alpha_pow(d2), to_left(d1, x))
        z = ring.mul(left, to_left(d2, y))
        d = d1 + d2
        return Vector({(d, lab): c for lab, c in from_left(d, z).items()})

    def fmt(lab):
        d, b = lab
        if d == 0:
            return f"phi({b})"
        if d > 0:
            return ("t-" if d == 1 else f"t-^{d}") + f"phi({b})"
        return f"phi({b})" + ("t+" if d == -1 else f"t+^{-d}")

    A = GradedAlgebra(
        labels_of=lambda n, max_len: [(n, b) for b in ring.basis] if abs(n) <= max_len else [],
        degree=lambda lab: lab[0],
        length=lambda lab: abs(lab[0]),
        product=product,
        field=ring.field,
        window=spec.window,
        unit=Vector({(0, b): c for b, c in ring.one.items()}),
        name=f"{ring.name}[t+,t-]",
        fmt=fmt,
    )
    A.ring = ring
    R = A.span_of_degree(0)
    I = A.span_of_degree(1) if 1 in A.window else Subspace()
    J = A.span_of_degree(-1) if -1 in A.window else Subspace()
    return A, RealizationData(A, R, I, J, name=A.name)


def laurent_spec(field: Field = QQ, window: Window | None = None) -> CornerSkewSpec:
    """R = K, p = 1, alpha = id: the Laurent polynomials K[t, t^-1]."""
    ring = scalar_ring(field)
    return CornerSkewSpec(ring, ring.one, ring.identity_map(), window or Window())


TPLUS = "t+"
TMINUS = "t-"


@dataclass
class SkewStep:
    rule: str
    position: int
    before: tuple
    after: tuple


class CornerSkewReducer:
    """Rewrites words over t+, t- and phi(r) into t-^a phi(r) or phi(r) t+^b.

    A word is a tuple of tokens ``"t+"``, ``"t-"`` or ``("phi", r)`` with r a
    ring element.  Because phi is additive every word reduces to a single
    canonical word (or zero), so no linear combinations arise.
    """

    def __init__(self, spec: CornerSkewSpec):
        self.spec = spec
        self.ring = spec.ring
        self.log: list[SkewStep] = []

    def phi(self, r: Vector) -> tuple:
        return ("phi", r)

    def _rewrite(self, w: tuple) -> tuple[str, int, tuple] | None:
        ring, spec = self.ring, self.spec
        for i in range(len(w) - 1):
            x, y = w[i], w[i + 1]
            if x == TMINUS and y == TPLUS:
                return "t-t+ -> 1", i, (self.phi(ring.one),)
            if x == TPLUS and y == TMINUS:
                return "t+t- -> phi(p)", i, (self.phi(spec.p),)
            if isinstance(x, tuple) and isinstance(y, tuple):
                return "phi phi -> phi", i, (self.phi(ring.mul(x[1], y[1])),)
            if isinstance(x, tuple) and y == TMINUS:
                return "phi(r)t- -> t-phi(alpha r)", i, (TMINUS, self.phi(ring.apply(spec.alpha, x[1])))
            if x == TPLUS and isinstance(y, tuple):
                return "t+phi(r) -> phi(alpha r)t+", i, (self.phi(ring.apply(spec.alpha, y[1])), TPLUS)
            if x == TMINUS and isinstance(y, tuple) and i + 2 < len(w) and w[i + 2] == TPLUS:
                r = y[1]
                prp = ring.mul(ring.mul(spec.p, r), spec.p)
                return "t-phi(r)t+ -> phi(alpha^-1(prp))", i, (self.phi(spec.alpha_inv(prp)),)
        return None

    def reduce(self, word: tuple) -> tuple | None:
        """Canonical word, or None for zero."""
        w = tuple(word) + (self.phi(self.ring.one),)
        while True:
            if any(isinstance(t, tuple) and not t[1] for t in w):
                return None
            hit = self._rewrite(w)
            if hit is None:
                return w
            rule, i, rep = hit
            width = 3 if rule.startswith("t-phi(r)t+") else 2
            new = w[:i] + rep + w[i + width:]
            self.log.append(SkewStep(rule, i, w, new))
            w = new

    @staticmethod
    def is_canonical(w: tuple | None) -> bool:
        if w is None:
            return True
        phis = [i for i, t in enumerate(w) if isinstance(t, tuple)]
        if len(phis) != 1:
            return False
        i = phis[0]
        left, right = w[:i], w[i + 1:]
        if left and right:
            return False
        return all(t == TMINUS for t in left) and all(t == TPLUS for t in right)

    def to_element(self, w: tuple | None) -> Vector:
        """The canonical word as an element on the labels of build_corner_skew."""
        if w is None:
            return Vector()
        i = next(i for i, t in enumerate(w) if isinstance(t, tuple))
        r = w[i][1]
        d = i if i > 0 else -(len(w) - 1 - i)
        return Vector({(d, b): c for b, c in r.items()})

    def random_word(self, rng: random.Random, max_len: int = 8) -> tuple:
        out = []
        for _ in range(rng.randint(1, max_len)):
            k = rng.random()
            if k < 0.35:
                out.append(TPLUS)
            elif k < 0.7:
                out.append(TMINUS)
            else:
                r = Vector({b: self.ring.field(Fraction(rng.randint(-3, 3))) for b in self.ring.basis})
                out.append(self.phi(r if r else self.ring.one))
        return tuple(out)


def corner_word_element(A: GradedAlgebra, word: tuple) -> Vector:
    """Evaluate a word by multiplying the images of its letters in A.

    t- is t- phi(1) and t+ is phi(1) t+ on the labels of build_corner_skew.
    """
    one = A.ring.one
    out = A.unit
    for t in word:
        if t in (TPLUS, TMINUS):
            d = -1 if t == TPLUS else 1
            x = Vector({(d, b): c for b, c in one.items()})
        else:
            x = Vector({(0, b): c for b, c in t[1].items()})
        out = A.mul(out, x)
    return out


def condition4_counterexample(field: Field = QQ, window: Window | None = None) -> RealizationData:
    """K[t, t^-1] x Kx with x^2 = 0, x in degree 0, orthogonal to the Laurent part.

    R = span{1, x}, I = span{t}, J = span{t^-1}.  Conditions (1)-(3) hold
    with a = b = 1 = t t^-1, but x t = 0 and x x = 0 put x in both
    ann_R(I) and ann_R(I)^perp.
    """
    window = window or Window(-4, 4, 8)

    def labels_of(n, max_len):
        return [("t", n)] + (["x"] if n == 0 else [])

    def degree(lab):
        return 0 if lab == "x" else lab[1]

    def product(a, b):
        if a == "x" or b == "x":
            return Vector()
        return Vector({("t", a[1] + b[1]): field.one})

    def fmt(lab):
        return "x" if lab == "x" else ("1" if lab[1] == 0 else f"t^{lab[1]}")

    A = GradedAlgebra(labels_of=labels_of, degree=degree, product=product, field=field, window=window,
                      length=lambda lab: 0 if lab == "x" else abs(lab[1]), name="K[t,t^-1]+Kx", fmt=fmt)
    R = Subspace([A.gen(("t", 0)), A.gen("x")], "R")
    return RealizationData(A, R, Subspace([A.gen(("t", 1))], "I"), Subspace([A.gen(("t", -1))], "J"), name=A.name)
