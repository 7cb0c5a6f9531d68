"""Steinberg algebras of finite discrete groupoids graded by a cocycle.

For a finite discrete groupoid every subset is clopen and every function is
a combination of point indicators, so the algebra has the arrows as a basis
and 1_{g} 1_{h} = 1_{gh} (or 0 when g, h are not composable).
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from grcp.errors import NotGenerated, PreconditionError
from grcp.exactlin import QQ, Field, Vector, label_key
from grcp.graded import GradedAlgebra, Subspace, Window, left_annihilator
from grcp.groupoid import Arrow, FiniteGroupoid
from grcp.realization import RealizationData
from grcp.report import FAIL, PASS, Verdict, failed, passed


def steinberg_algebra(G: FiniteGroupoid, field: Field = QQ, max_len: int = 8) -> GradedAlgebra:
    lo, hi = G.cocycle_range()
    one = field.one

    def product(a, b):
        c = G.compose(a, b)
        return Vector() if c is None else Vector.unit(c, one)

    by_degree: dict[int, list] = {}
    for g in G.arrows:
        by_degree.setdefault(G.cocycle[g], []).append(g)
    A = GradedAlgebra(
        labels_of=lambda n, _len: by_degree.get(n, []),
        degree=G.cocycle.__getitem__,
        product=product,
        field=field,
        window=Window(min(lo, -1), max(hi, 1), max_len),
        unit=Vector({u: one for u in G.units}),
        name=f"A_K({G.name})",
        fmt=G.fmt,
    )
    A.groupoid = G
    return A


def indicator(B: Iterable[Arrow], field: Field = QQ) -> Vector:
    return Vector({b: field.one for b in B})


def convolve(G: FiniteGroupoid, f: Vector, g: Vector) -> Vector:
    """(f * g)(x) = sum over yz = x of f(y) g(z)."""
    out: dict = {}
    for a, ca in f.items():
        for b, cb in g.items():
            c = G.compose(a, b)
            if c is not None:
                out[c] = out.get(c, 0) + ca * cb
    return Vector(out)


def check_bisection(G: FiniteGroupoid, B: Iterable[Arrow]) -> bool:
    return G.is_bisection(B)


def cocycle_component(G: FiniteGroupoid, f: Vector, n: int) -> Vector:
    return Vector({g: c for g, c in f.items() if G.cocycle[g] == n})


# ---------------------------------------------------------------------------
# H-triples


@dataclass(frozen=True)
class HTriple:
    H0: frozenset
    H1: frozenset
    Hm1: frozenset

    @classmethod
    def of(cls, H0, H1, Hm1) -> HTriple:
        return cls(frozenset(H0), frozenset(H1), frozenset(Hm1))

    @classmethod
    def full(cls, G: FiniteGroupoid) -> HTriple:
        return cls.of(G.degree(0), G.degree(1), G.degree(-1))


def _fmt_set(G: FiniteGroupoid, X) -> str:
    return "{" + ", ".join(G.fmt(x) for x in sorted(X, key=label_key)) + "}"


def _degree_witness(G: FiniteGroupoid, H: HTriple):
    for n, X in ((0, H.H0), (1, H.H1), (-1, H.Hm1)):
        for x in sorted(X, key=label_key):
            if x not in G.cocycle:
                return x, n, "not an arrow"
            if G.cocycle[x] != n:
                return x, n, f"has degree {G.cocycle[x]}"
    return None


def _containment(G: FiniteGroupoid, X, Y, Z):
    for x in sorted(X, key=label_key):
        for y in sorted(Y, key=label_key):
            z = G.compose(x, y)
            if z is not None and z not in Z:
                return x, y, z
    return None


def check_htriple_products(G: FiniteGroupoid, H: HTriple) -> Verdict:
    """The product conditions on H_0, H_1, H_-1 (set products of arrows)."""
    name = "htriple-products"
    bad = _degree_witness(G, H)
    if bad is not None:
        x, n, why = bad
        return failed(name, f"H_{n} member {G.fmt(x)} {why}", arrow=G.fmt(x))
    checks = [
        ("H0 H0 in H0", H.H0, H.H0, H.H0),
        ("H0 H1 in H1", H.H0, H.H1, H.H1),
        ("H1 H0 in H1", H.H1, H.H0, H.H1),
        ("H0 H-1 in H-1", H.H0, H.Hm1, H.Hm1),
        ("H-1 H0 in H-1", H.Hm1, H.H0, H.Hm1),
        ("H-1 H1 in H0", H.Hm1, H.H1, H.H0),
    ]
    for label, X, Y, Z in checks:
        w = _containment(G, X, Y, Z)
        if w is not None:
            x, y, z = w
            v = failed(name, f"{label} fails", left=G.fmt(x), right=G.fmt(y), product=G.fmt(z))
            v.data = {"left": x, "right": y, "product": z, "target": Z, "rule": label}
            return v
    H1Hm1 = G.set_product(H.H1, H.Hm1)
    for label, units in (("r(H1) in H1 H-1", G.ranges(H.H1)), ("s(H-1) in H1 H-1", G.sources(H.Hm1))):
        for u in sorted(units, key=label_key):
            if u not in H1Hm1:
                v = failed(name, f"{label} fails", unit=G.fmt(u))
                v.data = {"unit": u, "rule": label}
                return v
    return passed(name, "all product containments hold")


def check_htriple_hypothesis(G: FiniteGroupoid, H: HTriple) -> Verdict:
    """For bisections B in H_0: s(B) disjoint from r(H_1) forces s(B) in H_0.

    A bisection satisfies the premise iff each of its points does, and s(B)
    is the union of the point sources, so testing singletons is exact.
    """
    name = "htriple-hypothesis"
    rH1 = G.ranges(H.H1)
    notes = []
    if set(G.units) <= H.H0:
        notes.append("unit space inside H0")
    if G.inverse_set(H.H0) <= H.H0 and G.set_product(H.H0, H.H0) <= H.H0:
        notes.append("H0 is a subgroupoid")
    if G.sources(H.H0) <= H.H0:
        notes.append("s(H0) inside H0")
    for b in sorted(H.H0, key=label_key):
        u = G.s[b]
        if u not in rH1 and u not in H.H0:
            v = failed(name, "a bisection with source outside r(H1) has source outside H0",
                       bisection="{" + G.fmt(b) + "}", source=G.fmt(u))
            v.data = {"bisection": frozenset([b]), "source": u}
            return v
    return passed(name, "; ".join(notes) or "checked on every singleton bisection")


@dataclass
class Closure:
    reached: dict  # arrow -> factorization (tuple of generators)
    missing: list


def product_closure(G: FiniteGroupoid, gens: Iterable[Arrow]) -> Closure:
    """Breadth-first closure of ``gens`` under composition, with factorizations."""
    gens = sorted(set(gens), key=label_key)
    reached = {g: (g,) for g in gens}
    queue = deque(gens)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.compose(x, g)
            if y is not None and y not in reached:
                reached[y] = reached[x] + (g,)
                queue.append(y)
    missing = [g for g in G.arrows if g not in reached]
    return Closure(reached, missing)


def check_htriple_generation(G: FiniteGroupoid, H: HTriple) -> Verdict:
    name = "htriple-generation"
    cl = product_closure(G, H.H0 | H.H1 | H.Hm1)
    if cl.missing:
        v = failed(name, f"{len(cl.missing)} arrows are not products of H0, H1, H-1",
                   arrow=G.fmt(cl.missing[0]))
        v.data = {"missing": cl.missing}
        return v
    v = passed(name, f"all {len(G)} arrows reached")
    v.data = {"factorizations": cl.reached}
    return v


# ---------------------------------------------------------------------------
# indicator decomposition


@dataclass
class Decomposition:
    """1_C as a sum of products of indicators, one product per cover piece."""

    C: frozenset
    terms: list[list[frozenset]]
    chains: list[tuple]  # the factorization used for each term
    origins: list[list[int]] = field(default_factory=list)  # which D each factor lies in

    def evaluate(self, G: FiniteGroupoid, fld: Field = QQ) -> Vector:
        out = Vector()
        for term in self.terms:
            out = out + self.term_value(G, term, fld)
        return out

    @staticmethod
    def term_value(G: FiniteGroupoid, term: list[frozenset], fld: Field = QQ) -> Vector:
        v = indicator(term[0], fld)
        for B in term[1:]:
            v = convolve(G, v, indicator(B, fld))
        return v

    def supports(self, G: FiniteGroupoid) -> list[frozenset]:
        out = []
        for term in self.terms:
            S = set(term[0])
            for B in term[1:]:
                S = G.set_product(S, B)
            out.append(frozenset(S))
        return out

    def fmt(self, G: FiniteGroupoid) -> str:
        return " + ".join(" * ".join("1_" + _fmt_set(G, B) for B in term) for term in self.terms) or "0"


def factorize(G: FiniteGroupoid, gamma: Arrow, Ds: Sequence[frozenset], fixed_order: bool = False):
    """A shortest chain (mu_1, d_1), ..., (mu_n, d_n) with mu_i in D_{d_i}
    and mu_1 ... mu_n = gamma, or None.

    With ``fixed_order`` the chain takes exactly one factor from each D_i in
    the given order.
    """
    if fixed_order:
        # layered search over the prefix product
        layer = {G.r[gamma]: ()}
        for i, D in enumerate(Ds):
            nxt = {}
            for rho, chain in layer.items():
                for mu in sorted(D, key=label_key):
                    p = G.compose(rho, mu)
                    if p is not None and p not in nxt:
                        nxt[p] = chain + ((mu, i),)
            layer = nxt
        return layer.get(gamma)
    ordered = [(mu, i) for i, D in enumerate(Ds) for mu in sorted(D, key=label_key)]
    seen: set = set()
    queue = deque([(G.r[gamma], ())])
    while queue:
        rho, chain = queue.popleft()
        for mu, i in ordered:
            p = G.compose(rho, mu)
            if p is None:
                continue
            if p == gamma:
                return chain + ((mu, i),)
            if p not in seen:
                seen.add(p)
                queue.append((p, chain + ((mu, i),)))
    return None


def _maximal_bisection(G: FiniteGroupoid, seed: Arrow, pool: Iterable[Arrow]) -> frozenset:
    B = [seed]
    rs, ss = {G.r[seed]}, {G.s[seed]}
    for x in sorted(pool, key=label_key):
        if x != seed and G.r[x] not in rs and G.s[x] not in ss:
            B.append(x)
            rs.add(G.r[x])
            ss.add(G.s[x])
    return frozenset(B)


def _product(G: FiniteGroupoid, sets: Sequence[Iterable[Arrow]]) -> set:
    S = set(sets[0])
    for B in sets[1:]:
        S = G.set_product(S, B)
    return S


def decompose_indicator(
    G: FiniteGroupoid,
    C: Iterable[Arrow],
    Ds: Sequence[Iterable[Arrow]],
    fixed_order: bool = False,
    strategy: str = "singleton",
) -> Decomposition:
    """Write 1_C as a sum of products of indicators of bisections, each
    contained in one of the D_i.

    Steps: factor each gamma in C through the D's; choose bisections
    B_1..B_n around the factors (the last one inside
    B_{n-1}^-1 ... B_1^-1 C, so the product stays in C); pick a cover of C
    by these products; then make the cover disjoint by trimming the last
    factor of each piece against the later pieces.  ``strategy`` is
    ``singleton`` (every B_i a point) or ``maximal`` (greedy maximal
    bisections, which exercises the trimming step).
    """
    C = frozenset(C)
    Ds = [frozenset(D) for D in Ds]
    if not G.is_bisection(C):
        raise PreconditionError(f"{_fmt_set(G, C)} is not a bisection")
    if strategy not in ("singleton", "maximal"):
        raise ValueError(f"unknown strategy {strategy!r}")
    pieces = {}
    for gamma in sorted(C, key=label_key):
        if not fixed_order and any(gamma in D for D in Ds):
            i = next(i for i, D in enumerate(Ds) if gamma in D)
            chain = ((gamma, i),)
        else:
            chain = factorize(G, gamma, Ds, fixed_order)
        if chain is None:
            raise NotGenerated(gamma, f"{G.fmt(gamma)} is not a product of elements of the given sets")
        mus = [m for m, _ in chain]
        idx = [i for _, i in chain]
        n = len(mus)
        if strategy == "singleton":
            Bs = [frozenset([m]) for m in mus]
        else:
            Bs = [_maximal_bisection(G, mus[k], Ds[idx[k]]) for k in range(n - 1)]
            # room for the last factor: B_{n-1}^-1 ... B_1^-1 C, intersected with D
            room = set(C)
            for B in Bs:
                room = G.set_product(G.inverse_set(B), room)
            Bs.append(_maximal_bisection(G, mus[-1], room & Ds[idx[-1]]))
        pieces[gamma] = (Bs, idx, tuple(mus))
    # cover extraction: take gammas in order, skipping those already covered
    chosen = []
    covered: set = set()
    for gamma in sorted(C, key=label_key):
        if gamma in covered:
            continue
        Bs = pieces[gamma][0]
        covered |= _product(G, Bs)
        chosen.append(gamma)
    terms, chains, origins = [], [], []
    for j, gamma in enumerate(chosen):
        Bs, idx, mus = pieces[gamma]
        later: set = set()
        for other in chosen[j + 1:]:
            later |= _product(G, pieces[other][0])
        if len(Bs) > 1:
            prefix = _product(G, Bs[:-1])
            last = Bs[-1] - G.set_product(G.inverse_set(prefix), later)
        else:
            last = Bs[0] - later
        if not last:
            continue
        terms.append(list(Bs[:-1]) + [frozenset(last)])
        chains.append(mus)
        origins.append(list(idx))
    return Decomposition(C, terms, chains, origins)


def check_decomposition(G: FiniteGroupoid, dec: Decomposition, Ds: Sequence[Iterable[Arrow]],
                        fld: Field = QQ) -> str | None:
    """None if the decomposition is valid, else what went wrong."""
    Ds = [frozenset(D) for D in Ds]
    for term, idx in zip(dec.terms, dec.origins):
        for B, i in zip(term, idx):
            if not G.is_bisection(B):
                return f"factor {_fmt_set(G, B)} is not a bisection"
            if not B <= Ds[i]:
                return f"factor {_fmt_set(G, B)} is not inside its set"
    sups = dec.supports(G)
    seen: set = set()
    for S in sups:
        if S & seen:
            return "term supports overlap"
        seen |= S
    if seen != set(dec.C):
        return "term supports do not partition C"
    if dec.evaluate(G, fld) != indicator(dec.C, fld):
        return "the terms do not convolve back to 1_C"
    return None


def random_bisection(G: FiniteGroupoid, rng: random.Random) -> frozenset:
    arrows = list(G.arrows)
    rng.shuffle(arrows)
    target = rng.randint(1, max(1, len(G.units)))
    B: list = []
    rs, ss = set(), set()
    for g in arrows:
        if len(B) >= target:
            break
        if G.r[g] not in rs and G.s[g] not in ss:
            B.append(g)
            rs.add(G.r[g])
            ss.add(G.s[g])
    return frozenset(B)


# ---------------------------------------------------------------------------
# annihilator and unperforation


@dataclass
class AnnihilatorResult:
    formula: Subspace
    brute: Subspace
    equal: bool


def steinberg_annihilator(G: FiniteGroupoid, H0: Iterable[Arrow], H1: Iterable[Arrow],
                          fld: Field = QQ) -> AnnihilatorResult:
    """ann_{A_K(H0)}(A_K(H1)) two ways.

    Formula: span of 1_B over bisections B in H0 with s(B) disjoint from
    r(H1); since such B are unions of such points, the points span it.
    Brute force: the kernel of r -> (r x)_x over the basis of A_K(H1).
    """
    H0 = sorted(set(H0), key=label_key)
    H1 = sorted(set(H1), key=label_key)
    rH1 = G.ranges(H1)
    formula = Subspace([Vector.unit(b, fld.one) for b in H0 if G.s[b] not in rH1], "formula")
    A = steinberg_algebra(G, fld)
    R = Subspace([Vector.unit(b, fld.one) for b in H0])
    I = Subspace([Vector.unit(b, fld.one) for b in H1])
    brute = left_annihilator(A, R, I)
    return AnnihilatorResult(formula, brute, formula == brute)


def check_unperforated(G: FiniteGroupoid, max_n: int | None = None) -> Verdict:
    """Every g with c(g) = n > 0 is a product of n arrows of degree 1."""
    name = "unperforated"
    top = G.cocycle_range()[1]
    max_n = top if max_n is None else max_n
    if max_n < top:
        raise PreconditionError(f"max_n={max_n} is below the largest degree {top}")
    G1 = G.degree(1)
    chains: dict = {g: (g,) for g in G1}
    layer = dict(chains)
    for n in range(1, max_n + 1):
        if n > 1:
            nxt = {}
            for x, ch in layer.items():
                for g in G1:
                    y = G.compose(x, g)
                    if y is not None and y not in nxt:
                        nxt[y] = ch + (g,)
            layer = nxt
        for g in G.degree(n):
            if g not in layer:
                v = failed(name, f"no factorization into {n} degree-1 arrows", arrow=G.fmt(g), degree=n)
                v.data = {"arrow": g, "degree": n}
                return v
    return passed(name, f"checked degrees 1..{max_n}")


# ---------------------------------------------------------------------------
# hand-off to the realization verifier


@dataclass
class SteinbergRealization:
    data: RealizationData
    checks: list[Verdict]
    remark: Verdict
    inverse_gap: list  # arrows of H1^-1 missing from H-1


def steinberg_realization_data(G: FiniteGroupoid, H: HTriple, fld: Field = QQ,
                               require: bool = True) -> SteinbergRealization:
    """R = A_K(H0), I = A_K(H1), J = A_K(H-1) inside A_K(G).

    Also checks the inverse-closed case: when H0 is a subgroupoid and the
    product conditions hold, H-1 must equal H1^-1.
    """
    checks = [check_htriple_products(G, H), check_htriple_hypothesis(G, H), check_htriple_generation(G, H)]
    if require:
        for v in checks:
            if v.status == FAIL:
                raise PreconditionError(f"{v.name}: {v.message}")
    A = steinberg_algebra(G, fld)

    def span(X):
        return Subspace([A.gen(x) for x in sorted(X, key=label_key)])

    data = RealizationData(A, span(H.H0), span(H.H1), span(H.Hm1), name=A.name)
    inv1 = G.inverse_set(H.H1)
    gap = sorted(inv1 - H.Hm1, key=label_key)
    subgroupoid = G.inverse_set(H.H0) <= H.H0 and G.set_product(H.H0, H.H0) <= H.H0
    if subgroupoid and checks[0].status == PASS:
        if inv1 == H.Hm1:
            remark = passed("inverse-closed", "H0 is a subgroupoid and H-1 = H1^-1")
        else:
            remark = failed("inverse-closed", "H0 is a subgroupoid but H-1 != H1^-1",
                            arrow=G.fmt((gap or sorted(H.Hm1 - inv1, key=label_key))[0]))
    else:
        msg = "H0 is not a subgroupoid; no constraint"
        if gap:
            msg += f"; H1^-1 not inside H-1, e.g. {G.fmt(gap[0])}"
        remark = Verdict("inverse-closed", "not-applicable", msg)
    return SteinbergRealization(data, checks, remark, gap)
