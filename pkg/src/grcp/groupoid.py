"""Finite discrete groupoids with an integer cocycle."""

from __future__ import annotations

import random
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass, field

from grcp.exactlin import label_key

Arrow = Hashable


@dataclass
class FiniteGroupoid:
    """Arrows with range, source, inverse, composition and a cocycle.

    Units are arrows too: ``r[g]`` and ``s[g]`` are unit arrows, and
    ``compose(g, h)`` is defined exactly when ``s[g] == r[h]``.
    """

    arrows: tuple
    r: dict
    s: dict
    inv: dict
    comp: dict
    cocycle: dict
    name: str = "G"
    fmt: Callable[[Arrow], str] = field(default=str, repr=False)

    def __post_init__(self):
        self.arrows = tuple(sorted(self.arrows, key=label_key))
        self.units = tuple(g for g in self.arrows if self.r[g] == g)
        self._by_range: dict = {}
        for g in self.arrows:
            self._by_range.setdefault(self.r[g], []).append(g)

    def compose(self, g: Arrow, h: Arrow) -> Arrow | None:
        if self.s[g] != self.r[h]:
            return None
        return self.comp[g, h]

    def with_range(self, u: Arrow) -> list:
        return self._by_range.get(u, [])

    def degree(self, n: int) -> list:
        """The arrows of c^-1(n)."""
        return [g for g in self.arrows if self.cocycle[g] == n]

    def cocycle_range(self) -> tuple[int, int]:
        vals = [self.cocycle[g] for g in self.arrows] or [0]
        return min(vals), max(vals)

    def set_product(self, X: Iterable[Arrow], Y: Iterable[Arrow]) -> set:
        Y = list(Y)
        out = set()
        for x in X:
            for y in Y:
                z = self.compose(x, y)
                if z is not None:
                    out.add(z)
        return out

    def inverse_set(self, X: Iterable[Arrow]) -> set:
        return {self.inv[x] for x in X}

    def ranges(self, X: Iterable[Arrow]) -> set:
        return {self.r[x] for x in X}

    def sources(self, X: Iterable[Arrow]) -> set:
        return {self.s[x] for x in X}

    def is_bisection(self, B: Iterable[Arrow]) -> bool:
        B = list(B)
        return len({self.r[b] for b in B}) == len(set(B)) == len({self.s[b] for b in B})

    def check_axioms(self) -> str | None:
        """None, or a description of the first violated axiom."""
        arrows = set(self.arrows)
        for g in self.arrows:
            for m, what in ((self.r, "range"), (self.s, "source"), (self.inv, "inverse")):
                if m.get(g) not in arrows:
                    return f"{what} of {self.fmt(g)} is not an arrow"
            u = self.r[g]
            if self.r[u] != u or self.s[u] != u:
                return f"range of {self.fmt(g)} is not a unit"
            if self.compose(self.r[g], g) != g or self.compose(g, self.s[g]) != g:
                return f"units do not act trivially on {self.fmt(g)}"
            if self.compose(g, self.inv[g]) != self.r[g] or self.compose(self.inv[g], g) != self.s[g]:
                return f"inverse law fails at {self.fmt(g)}"
        for (g, h), k in self.comp.items():
            if self.s[g] != self.r[h]:
                return f"composition given for non-composable {self.fmt(g)}, {self.fmt(h)}"
            if self.r[k] != self.r[g] or self.s[k] != self.s[h]:
                return f"composite {self.fmt(k)} has wrong endpoints"
        for g in self.arrows:
            for h in self.with_range(self.s[g]):
                if (g, h) not in self.comp:
                    return f"composition missing for {self.fmt(g)}, {self.fmt(h)}"
                gh = self.comp[g, h]
                for k in self.with_range(self.s[h]):
                    if self.comp[gh, k] != self.comp[g, self.comp[h, k]]:
                        return f"associativity fails at {self.fmt(g)}, {self.fmt(h)}, {self.fmt(k)}"
        return None

    def check_cocycle(self) -> str | None:
        for u in self.units:
            if self.cocycle[u] != 0:
                return f"cocycle is nonzero on unit {self.fmt(u)}"
        for (g, h), k in self.comp.items():
            if self.cocycle[k] != self.cocycle[g] + self.cocycle[h]:
                return f"c({self.fmt(k)}) != c({self.fmt(g)}) + c({self.fmt(h)})"
        return None

    def orbits(self) -> list[set]:
        seen: set = set()
        out = []
        for u in self.units:
            if u in seen:
                continue
            orb = {self.s[g] for g in self.with_range(u)}
            seen |= orb
            out.append(orb)
        return out

    def __len__(self):
        return len(self.arrows)


def groupoid_from_relation(
    blocks: Iterable[Iterable[Hashable]],
    weights: dict | None = None,
    isotropy: int = 1,
    name: str = "G",
) -> FiniteGroupoid:
    """The equivalence relation on ``blocks`` times Z/isotropy.

    Arrows are ``(x, y, t)`` with x, y in one block and t mod ``isotropy``;
    (x, y, t)(y, z, t') = (x, z, t + t').  The cocycle is w(x) - w(y), which
    satisfies the cocycle law by construction (Z has no torsion, so the
    isotropy part must map to 0).
    """
    weights = weights or {}
    arrows, r, s, inv, comp, coc = [], {}, {}, {}, {}, {}
    blocks = [list(b) for b in blocks]
    for blk in blocks:
        for x in blk:
            for y in blk:
                for t in range(isotropy):
                    g = (x, y, t)
                    arrows.append(g)
                    r[g] = (x, x, 0)
                    s[g] = (y, y, 0)
                    inv[g] = (y, x, (-t) % isotropy)
                    coc[g] = weights.get(x, 0) - weights.get(y, 0)
        for x in blk:
            for y in blk:
                for z in blk:
                    for t in range(isotropy):
                        for t2 in range(isotropy):
                            comp[(x, y, t), (y, z, t2)] = (x, z, (t + t2) % isotropy)
    return FiniteGroupoid(tuple(arrows), r, s, inv, comp, coc, name=name,
                          fmt=lambda g: f"({g[0]}->{g[1]}|{g[2]})" if isotropy > 1 else f"({g[0]}->{g[1]})")


def random_groupoid(rng: random.Random, max_arrows: int = 30, max_points: int = 6) -> FiniteGroupoid:
    """A random equivalence-relation groupoid with optional cyclic isotropy."""
    while True:
        k = rng.randint(1, max_points)
        m = rng.choice([1, 1, 2, 3])
        points = list(range(k))
        rng.shuffle(points)
        cuts = sorted(rng.sample(range(1, k), rng.randint(0, k - 1))) if k > 1 else []
        blocks = [points[a:b] for a, b in zip([0] + cuts, cuts + [k])]
        if sum(len(b) ** 2 for b in blocks) * m <= max_arrows:
            break
    weights = {x: rng.randint(-2, 2) for x in range(k)}
    return groupoid_from_relation(blocks, weights, m, name=f"random(k={k},m={m})")
