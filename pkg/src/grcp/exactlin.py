"""Exact scalars and sparse linear algebra.

Scalars are either :class:`fractions.Fraction` (the rational field, the
default) or :class:`ModP` residues.  Vectors are sparse maps from hashable
labels to scalars; all spans are kept in reduced row echelon form with
respect to a deterministic label order, so two spans are equal exactly when
their echelon bases are equal.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Any

__all__ = [
    "DomainMismatch",
    "Field",
    "QQ",
    "GF",
    "ModP",
    "Vector",
    "Echelon",
    "label_key",
    "span_basis",
    "in_span",
    "span_intersect",
    "span_sum",
    "same_span",
    "span_contains",
    "kernel",
    "rank",
]


class DomainMismatch(ValueError):
    """Scalars from different fields were mixed."""


class ModP:
    """Residue class modulo a prime, stored as the least nonnegative residue."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = p
        self.value = int(value) % p

    def _other(self, other: Any) -> int:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise DomainMismatch(f"GF({self.p}) mixed with GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise DomainMismatch(f"GF({self.p}) mixed with rational {other}")
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ModP(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.value, self.p)

    def inverse(self) -> ModP:
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.p)
        return ModP(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return ModP(o, self.p) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """A coefficient field: either the rationals or GF(p)."""

    def __init__(self, p: int = 0):
        if p:
            if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
                raise ValueError(f"{p} is not prime")
        self.p = p

    def __call__(self, x: Any) -> Fraction | ModP:
        if self.p:
            if isinstance(x, ModP):
                if x.p != self.p:
                    raise DomainMismatch(f"GF({x.p}) value in GF({self.p})")
                return x
            x = Fraction(x)
            return ModP(x.numerator, self.p) / x.denominator
        if isinstance(x, ModP):
            raise DomainMismatch(f"GF({x.p}) value in QQ")
        return Fraction(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.p else "QQ"

    @classmethod
    def parse(cls, text: str) -> Field:
        """Accept ``Q``, ``QQ``, ``rational``, ``p``, ``GF(p)`` or ``F_p``."""
        t = text.strip()
        if t.upper() in ("Q", "QQ", "RATIONAL", "RATIONALS"):
            return QQ
        for prefix in ("GF(", "F_", "GF"):
            if t.upper().startswith(prefix):
                t = t[len(prefix):].rstrip(")")
                break
        return cls(int(t))


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def _field_of(values: Iterable[Any]) -> int | None:
    """Return the characteristic shared by ``values`` or raise on a mix.

    ``None`` means only plain integers were seen (compatible with any field).
    """
    char = None
    for x in values:
        if isinstance(x, ModP):
            c = x.p
        elif isinstance(x, Fraction):
            c = 0
        else:
            continue
        if char is None:
            char = c
        elif char != c:
            raise DomainMismatch(f"scalars from characteristic {char} and {c}")
    return char


def _inv(x):
    if isinstance(x, ModP):
        return x.inverse()
    return Fraction(1) / x


def label_key(k: Hashable) -> tuple:
    """Total order on heterogeneous labels (ints < strings < tuples < other)."""
    if isinstance(k, bool):
        return (0, int(k))
    if isinstance(k, int):
        return (0, k)
    if isinstance(k, str):
        return (1, k)
    if isinstance(k, tuple):
        return (2, len(k), tuple(label_key(x) for x in k))
    if isinstance(k, frozenset):
        return (3, tuple(sorted(label_key(x) for x in k)))
    return (4, repr(k))


class Vector(Mapping):
    """Sparse vector: label -> nonzero scalar.  Treated as immutable."""

    __slots__ = ("_d", "_hash")

    def __init__(self, data: Mapping | Iterable | None = None):
        d = {}
        if data:
            items = data.items() if isinstance(data, Mapping) else data
            for k, v in items:
                if v:
                    d[k] = v
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, d: dict) -> Vector:
        v = cls.__new__(cls)
        v._d = d
        v._hash = None
        return v

    @classmethod
    def unit(cls, label: Hashable, coeff: Any = 1) -> Vector:
        return cls({label: coeff})

    def __getitem__(self, k):
        return self._d[k]

    def get(self, k, default=0):
        return self._d.get(k, default)

    def __iter__(self) -> Iterator:
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def __add__(self, other: Vector) -> Vector:
        if not other:
            return self
        d = dict(self._d)
        for k, v in other._d.items():
            s = d.get(k, 0) + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return Vector._raw(d)

    def __sub__(self, other: Vector) -> Vector:
        return self + (-other)

    def __neg__(self) -> Vector:
        return Vector._raw({k: -v for k, v in self._d.items()})

    def __mul__(self, c) -> Vector:
        if isinstance(c, Vector):
            return NotImplemented
        if not c:
            return Vector()
        return Vector._raw({k: v * c for k, v in self._d.items() if v * c})

    __rmul__ = __mul__

    def axpy(self, c, other: Vector) -> Vector:
        """Return ``self + c * other``."""
        if not c or not other:
            return self
        d = dict(self._d)
        for k, v in other._d.items():
            s = d.get(k, 0) + c * v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return Vector._raw(d)

    def __eq__(self, other):
        if isinstance(other, Vector):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == {k: v for k, v in other.items() if v}
        if other == 0:
            return not self._d
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def sorted_items(self) -> list[tuple]:
        return sorted(self._d.items(), key=lambda kv: label_key(kv[0]))

    def leading(self) -> Hashable:
        return min(self._d, key=label_key)

    def map_labels(self, f) -> Vector:
        out = Vector()
        for k, v in self._d.items():
            out = out.axpy(v, Vector.unit(f(k)))
        return out

    def restrict(self, labels) -> Vector:
        return Vector._raw({k: v for k, v in self._d.items() if k in labels})

    def __repr__(self):
        if not self._d:
            return "Vector(0)"
        return "Vector(" + ", ".join(f"{k!r}: {v}" for k, v in self.sorted_items()) + ")"


class Echelon:
    """Incrementally maintained reduced row echelon basis.

    With ``track=True`` each row also records the combination of inserted
    vectors (by insertion index) that produces it, which gives coefficient
    extraction and kernels for free.
    """

    def __init__(self, vectors: Iterable[Vector] = (), track: bool = False):
        self.rows: dict[Hashable, Vector] = {}
        self.combos: dict[Hashable, Vector] = {}
        self.track = track
        self.count = 0
        self.relations: list[Vector] = []
        self.char: int | None = None
        for v in vectors:
            self.add(v)

    def _reduce(self, v: Vector, combo: Vector | None):
        for k in [k for k in v if k in self.rows]:
            c = v.get(k)
            if c:
                v = v.axpy(-c, self.rows[k])
                if combo is not None:
                    combo = combo.axpy(-c, self.combos[k])
        return v, combo

    def reduce(self, v: Vector) -> Vector:
        return self._reduce(v, None)[0]

    def __contains__(self, v: Vector) -> bool:
        return not self.reduce(v)

    def add(self, v: Vector) -> bool:
        """Insert ``v``; return True if the rank grew."""
        c = _field_of(v.values())
        if c is not None:
            if self.char is not None and c != self.char:
                raise DomainMismatch(f"scalars from characteristic {self.char} and {c}")
            self.char = c
        combo = Vector.unit(self.count) if self.track else None
        self.count += 1
        v, combo = self._reduce(v, combo)
        if not v:
            if self.track:
                self.relations.append(combo)
            return False
        piv = v.leading()
        inv = _inv(v[piv])
        v = v * inv
        if combo is not None:
            combo = combo * inv
        for k, row in self.rows.items():
            c = row.get(piv)
            if c:
                self.rows[k] = row.axpy(-c, v)
                if combo is not None:
                    self.combos[k] = self.combos[k].axpy(-c, combo)
        self.rows[piv] = v
        if combo is not None:
            self.combos[piv] = combo
        return True

    def express(self, v: Vector) -> Vector | None:
        """Coefficients (by insertion index) writing ``v`` in the span, or None."""
        if not self.track:
            raise ValueError("express() needs track=True")
        combo = Vector()
        for k in [k for k in v if k in self.rows]:
            c = v.get(k)
            if c:
                v = v.axpy(-c, self.rows[k])
                combo = combo.axpy(c, self.combos[k])
        return None if v else combo

    @property
    def basis(self) -> list[Vector]:
        return [self.rows[k] for k in sorted(self.rows, key=label_key)]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)


def span_basis(vectors: Iterable[Vector]) -> list[Vector]:
    """Reduced echelon basis of the span (empty for the zero span)."""
    return Echelon(vectors).basis


def rank(vectors: Iterable[Vector]) -> int:
    return Echelon(vectors).dim


def in_span(v: Vector, basis: list[Vector]) -> list | None:
    """Coefficients ``c`` with ``sum(c[i] * basis[i]) == v``, or None.

    Coefficients of redundant basis vectors are zero; for ``v == 0`` the
    result is all zeros (the empty list for an empty basis).
    """
    ech = Echelon(basis, track=True)
    combo = ech.express(v)
    if combo is None:
        return None
    return [combo.get(i, 0) for i in range(len(basis))]


def span_contains(basis: Iterable[Vector], vectors: Iterable[Vector]) -> bool:
    ech = Echelon(basis)
    return all(v in ech for v in vectors)


def same_span(a: Iterable[Vector], b: Iterable[Vector]) -> bool:
    return span_basis(a) == span_basis(b)


def span_sum(*spans: Iterable[Vector]) -> list[Vector]:
    return span_basis(v for s in spans for v in s)


def span_intersect(a: list[Vector], b: list[Vector]) -> list[Vector]:
    """Basis of span(a) ∩ span(b) (Zassenhaus)."""
    ech = Echelon()
    for v in a:
        ech.add(Vector({(0, k): c for k, c in v.items()}).axpy(1, Vector({(1, k): c for k, c in v.items()})))
    for v in b:
        ech.add(Vector({(0, k): c for k, c in v.items()}))
    out = [
        Vector({k[1]: c for k, c in row.items()})
        for piv, row in ech.rows.items()
        if piv[0] == 1
    ]
    return span_basis(out)


def kernel(images: list[Vector]) -> list[Vector]:
    """Basis (as index-coefficient vectors) of {c : sum c[i] images[i] = 0}."""
    ech = Echelon(images, track=True)
    rels = ech.relations
    if ech.char:
        # relations of zero images carry plain integers; keep them in GF(p)
        rels = [Vector({k: ModP(c, ech.char) if not isinstance(c, ModP) else c for k, c in r.items()}) for r in rels]
    return span_basis(rels)
