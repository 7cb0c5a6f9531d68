"""Boundary path groupoids of finite acyclic graphs."""

from __future__ import annotations

from grcp.errors import UnsupportedInstance
from grcp.groupoid import FiniteGroupoid
from grcp.instances.graph import Graph


def boundary_paths(graph: Graph) -> list[tuple[tuple[str, ...], str]]:
    """Finite paths that cannot be extended, as (edges, source vertex).

    A path x extends on the right by e when r(e) = s(x), so x is maximal
    exactly when no edge has range s(x).
    """
    out = []
    for v in graph.vertices:
        if not graph.is_sink(v):
            continue
        for p in graph.paths_with_source(v, len(graph.edges)):
            out.append((p, v))
    return out


def boundary_path_groupoid(graph: Graph) -> FiniteGroupoid:
    """Arrows (x, |x| - |y|, y) for boundary paths x, y with s(x) = s(y).

    Path names are strings (vertex names for length zero); the cocycle is
    the middle entry.
    """
    if not graph.is_acyclic():
        raise UnsupportedInstance("boundary path groupoid needs an acyclic graph")
    paths = boundary_paths(graph)
    name = {p: graph.path_name(p[0], p[1]) for p in paths}
    by_source: dict[str, list] = {}
    for p in paths:
        by_source.setdefault(p[1], []).append(p)
    arrows, r, s, inv, comp, coc = [], {}, {}, {}, {}, {}
    for group in by_source.values():
        for x in group:
            for y in group:
                m = len(x[0]) - len(y[0])
                g = (name[x], m, name[y])
                arrows.append(g)
                r[g] = (name[x], 0, name[x])
                s[g] = (name[y], 0, name[y])
                inv[g] = (name[y], -m, name[x])
                coc[g] = m
        for x in group:
            for y in group:
                for z in group:
                    m1 = len(x[0]) - len(y[0])
                    m2 = len(y[0]) - len(z[0])
                    comp[(name[x], m1, name[y]), (name[y], m2, name[z])] = (name[x], m1 + m2, name[z])
    return FiniteGroupoid(
        tuple(arrows), r, s, inv, comp, coc,
        name="G_E", fmt=lambda g: f"({g[0]},{g[1]},{g[2]})",
    )


def parse_arrow(text: str) -> tuple:
    """``(ef,1,f)`` -> ``("ef", 1, "f")``."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"arrow {text!r} must look like (x,m,y)")
    parts = [t.strip() for t in body[1:-1].split(",")]
    if len(parts) != 3:
        raise ValueError(f"arrow {text!r} must have three entries")
    return (parts[0], int(parts[1]), parts[2])


ESTAR_H0 = ["(g,0,g)", "(eg,0,eg)", "(v,0,v)", "(f,0,f)", "(f,0,g)"]
ESTAR_H1 = ["(ef,1,f)", "(ef,1,g)", "(eg,1,g)", "(eg,1,f)", "(f,1,v)", "(g,1,v)"]
ESTAR_HM1 = ["(f,-1,ef)", "(f,-1,eg)", "(v,-1,f)", "(v,-1,g)"]
