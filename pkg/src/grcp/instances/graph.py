"""Finite directed graphs, using the convention that a path e1...en has
s(e_i) = r(e_{i+1})."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from grcp.errors import SemanticError


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    range: Mapping[str, str] = field(hash=False)
    source: Mapping[str, str] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "range", dict(self.range))
        object.__setattr__(self, "source", dict(self.source))
        self.validate()

    def validate(self) -> None:
        names = list(self.vertices) + list(self.edges)
        if len(set(names)) != len(names):
            raise SemanticError("vertex and edge names must be distinct")
        for name in names:
            if not name or "*" in name or any(c.isspace() for c in name):
                raise SemanticError(f"bad generator name {name!r}")
        vs = set(self.vertices)
        for e in self.edges:
            for what, m in (("range", self.range), ("source", self.source)):
                if e not in m:
                    raise SemanticError(f"{what} undefined on edge {e}")
                if m[e] not in vs:
                    raise SemanticError(f"{what} of edge {e} is unknown vertex {m[e]}")
        for m in (self.range, self.source):
            for e in m:
                if e not in self.edges:
                    raise SemanticError(f"map given on unknown edge {e}")

    def r(self, e: str) -> str:
        return self.range[e]

    def s(self, e: str) -> str:
        return self.source[e]

    @cached_property
    def _receivers(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[self.range[e]].append(e)
        return {v: tuple(sorted(es)) for v, es in out.items()}

    def receivers(self, v: str) -> tuple[str, ...]:
        """vE^1 = {e : r(e) = v}."""
        return self._receivers[v]

    def is_sink(self, v: str) -> bool:
        """True when no edge has range v, so no path extends past v."""
        return not self._receivers[v]

    def special_edge(self, v: str) -> str | None:
        rec = self._receivers[v]
        return rec[0] if rec else None

    def path_range(self, path: tuple[str, ...], v: str) -> str:
        return self.range[path[0]] if path else v

    def path_source(self, path: tuple[str, ...], v: str) -> str:
        return self.source[path[-1]] if path else v

    def paths_with_source(self, v: str, max_len: int) -> list[tuple[str, ...]]:
        """All paths p with s(p) = v and |p| <= max_len (the empty path is v)."""
        out = [()]
        frontier = [()]
        for _ in range(max_len):
            nxt = []
            for p in frontier:
                head = self.path_range(p, v)
                for e in self.edges:
                    if self.source[e] == head:
                        nxt.append((e,) + p)
            out.extend(nxt)
            frontier = nxt
            if not nxt:
                break
        return out

    def is_acyclic(self) -> bool:
        state: dict[str, int] = {}

        def visit(v: str) -> bool:
            state[v] = 1
            for e in self.edges:
                if self.range[e] == v:
                    w = self.source[e]
                    if state.get(w) == 1:
                        return False
                    if w not in state and not visit(w):
                        return False
            state[v] = 2
            return True

        return all(visit(v) for v in self.vertices if v not in state)

    def path_name(self, path: tuple[str, ...], v: str) -> str:
        if not path:
            return v
        if all(len(e) == 1 for e in self.edges):
            return "".join(path)
        return ".".join(path)

    def parse_path(self, name: str) -> tuple[tuple[str, ...], str]:
        """Inverse of :meth:`path_name`; returns (edges, vertex-if-empty)."""
        if name in self.vertices:
            return (), name
        if "." in name or not all(len(e) == 1 for e in self.edges):
            path = tuple(name.split("."))
        else:
            path = tuple(name)
        for e in path:
            if e not in self.edges:
                raise SemanticError(f"unknown edge {e!r} in path {name!r}")
        for a, b in zip(path, path[1:]):
            if self.source[a] != self.range[b]:
                raise SemanticError(f"{name!r} is not a path")
        return path, self.source[path[-1]]


def estar_graph() -> Graph:
    """Three vertices u, v, w; r(e)=u, s(e)=r(f)=r(g)=w, s(f)=s(g)=v."""
    return Graph(
        vertices=("u", "v", "w"),
        edges=("e", "f", "g"),
        range={"e": "u", "f": "w", "g": "w"},
        source={"e": "w", "f": "v", "g": "v"},
    )


def two_sink_graph() -> Graph:
    """a receives x and y, whose sources b and c receive nothing."""
    return Graph(
        vertices=("a", "b", "c"),
        edges=("x", "y"),
        range={"x": "a", "y": "a"},
        source={"x": "b", "y": "c"},
    )
