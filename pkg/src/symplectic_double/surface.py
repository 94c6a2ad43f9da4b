"""Ideal triangulations, flips, exchange matrices and polygon flip graphs.

A triangulation is a list of triangles, each a counterclockwise triple of
edge labels.  A label occurring in two slots is an internal (glued) edge; a
label occurring once is a boundary edge.  Polygon triangulations also carry
vertex triples ``(v0, v1, v2)`` with edge ``i`` joining ``v_i`` and
``v_{i+1}``.

Sign convention: inside a triangle, going counterclockwise around a common
vertex from ``E`` to ``F`` contributes ``+1`` to ``eps[E][F]``; in terms of
the edge traversal ``(e0, e1, e2)`` this means ``eps[e_i][e_{i-1}] += 1``.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .quiver import Quiver, mutate_quiver
from .verdict import Verdict


class FlipError(ValueError):
    """The requested edge cannot be flipped."""


def polygon_label(a: int, b: int, m: int | None = None) -> str:
    a, b = min(a, b), max(a, b)
    if m is not None and m >= 10:
        return f"{a}-{b}"
    return f"{a}{b}"


@dataclass(frozen=True)
class Triangulation:
    triangles: tuple[tuple[str, str, str], ...]
    vertices: tuple[tuple[int, int, int], ...] | None = None
    polygon: int | None = None
    _count: Counter = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        tris = tuple(tuple(str(e) for e in t) for t in self.triangles)
        object.__setattr__(self, "triangles", tris)
        if any(len(t) != 3 for t in tris):
            raise ValueError("every triangle needs exactly three edge slots")
        if not tris:
            raise ValueError("a triangulation needs at least one triangle")
        count = Counter(e for t in tris for e in t)
        bad = [e for e, c in count.items() if c > 2]
        if bad:
            raise ValueError(f"edge {bad[0]!r} occurs in more than two slots")
        object.__setattr__(self, "_count", count)
        if self.vertices is not None:
            verts = tuple(tuple(int(v) for v in t) for t in self.vertices)
            object.__setattr__(self, "vertices", verts)
            if len(verts) != len(tris):
                raise ValueError("vertex triples must match triangles")
            sides: dict[str, list[tuple[int, int]]] = {}
            for t, vt in zip(tris, verts):
                for i in range(3):
                    sides.setdefault(t[i], []).append((vt[i], vt[(i + 1) % 3]))
            for e, occ in sides.items():
                if len(occ) == 2 and occ[0] != occ[1][::-1]:
                    raise ValueError(f"edge {e!r} is not traversed oppositely by its two triangles")
        if self.polygon is not None:
            m = self.polygon
            if len(tris) != m - 2 or len(self.internal_edges) != m - 3:
                raise ValueError(f"not a triangulation of the {m}-gon")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_polygon(cls, m: int, diagonals: Iterable[Sequence[int]]) -> "Triangulation":
        """Vertices ``1..m`` counterclockwise; diagonals as vertex pairs."""
        if m < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        diags = set()
        for d in diagonals:
            a, b = sorted(int(x) for x in d)
            if not (1 <= a < b <= m) or b - a in (1, m - 1):
                raise ValueError(f"({a}, {b}) is not a diagonal of the {m}-gon")
            diags.add((a, b))
        if len(diags) != m - 3:
            raise ValueError(f"a triangulation of the {m}-gon has {m - 3} diagonals, got {len(diags)}")
        for (a, b), (c, d) in combinations(sorted(diags), 2):
            if a < c < b < d or c < a < d < b:
                raise ValueError(f"diagonals ({a}, {b}) and ({c}, {d}) cross")
        edges = diags | {(i, i + 1) for i in range(1, m)} | {(1, m)}
        tris, verts = [], []
        for a, b, c in combinations(range(1, m + 1), 3):
            if (a, b) in edges and (b, c) in edges and (a, c) in edges:
                verts.append((a, b, c))
                tris.append((polygon_label(a, b, m), polygon_label(b, c, m), polygon_label(a, c, m)))
        return cls(tuple(tris), tuple(verts), m)

    @classmethod
    def fan(cls, m: int, apex: int = 1) -> "Triangulation":
        others = [v for v in range(1, m + 1) if v != apex and abs(v - apex) not in (1, m - 1)]
        return cls.from_polygon(m, [(apex, v) for v in others])

    # -- queries -----------------------------------------------------------

    @property
    def internal_edges(self) -> list[str]:
        return sorted((e for e, c in self._count.items() if c == 2), key=_label_key)

    @property
    def boundary_edges(self) -> list[str]:
        return sorted((e for e, c in self._count.items() if c == 1), key=_label_key)

    def diagonals(self) -> tuple[tuple[int, int], ...]:
        if self.vertices is None:
            raise ValueError("triangulation has no vertex data")
        pairs = set()
        internal = set(self.internal_edges)
        for t, vt in zip(self.triangles, self.vertices):
            for i in range(3):
                if t[i] in internal:
                    pairs.add(tuple(sorted((vt[i], vt[(i + 1) % 3]))))
        return tuple(sorted(pairs))

    def edge_vertices(self, e: str) -> tuple[int, int]:
        for t, vt in zip(self.triangles, self.vertices or ()):
            for i in range(3):
                if t[i] == e:
                    return vt[i], vt[(i + 1) % 3]
        raise KeyError(e)

    def canonical(self):
        """Sorted diagonal set for polygons; sorted triangle list otherwise."""
        if self.vertices is not None and self.polygon is not None:
            return self.diagonals()
        return tuple(sorted(_rotate_min(t) for t in self.triangles))

    def quadrilateral(self, e: str) -> tuple[int, int, int, int]:
        """Vertices ``(a, b, c, d)`` counterclockwise with ``e = (a, c)``."""
        (i1, s1), (i2, s2) = self._slots(e)
        v1, v2 = self.vertices[i1], self.vertices[i2]
        x, y = v1[s1], v1[(s1 + 1) % 3]
        far1 = v1[(s1 + 2) % 3]
        far2 = v2[(s2 + 2) % 3]
        # triangle 1 is (x, y, far1) ccw; triangle 2 is (y, x, far2)
        return x, far2, y, far1

    def _slots(self, e: str) -> list[tuple[int, int]]:
        return [(ti, si) for ti, t in enumerate(self.triangles) for si, x in enumerate(t) if x == e]

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        if self.polygon is not None and self.vertices is not None:
            return {"polygon": self.polygon, "diagonals": [list(d) for d in self.diagonals()]}
        out = {"triangles": [list(t) for t in self.triangles]}
        if self.vertices is not None:
            out["vertices"] = [list(v) for v in self.vertices]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Triangulation":
        if "polygon" in data:
            return cls.from_polygon(int(data["polygon"]), data.get("diagonals", []))
        if "triangles" not in data:
            raise ValueError("triangulation JSON needs 'polygon' or 'triangles'")
        tris = [tuple(t) for t in data["triangles"]]
        for pair in data.get("gluing", []):
            (t1, s1), (t2, s2) = pair
            if tris[t1][s1] != tris[t2][s2]:
                raise ValueError(f"gluing {pair} joins slots with different labels")
        verts = data.get("vertices")
        return cls(tuple(tris), tuple(tuple(v) for v in verts) if verts else None)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _label_key(e: str):
    parts = e.replace("-", " ").split()
    if len(parts) == 2 and all(p.isdigit() for p in parts):
        return (0, int(parts[0]), int(parts[1]), e)
    if e.isdigit() and len(e) == 2:
        return (0, int(e[0]), int(e[1]), e)
    return (1, 0, 0, e)


def _rotate_min(t):
    i = min(range(3), key=lambda j: t[j])
    return t[i:] + t[:i]


def flip(t: Triangulation, e: str, new_label: str | None = None) -> Triangulation:
    """Replace the two triangles at ``e`` by those on the other diagonal.

    The new edge is named after its endpoints for polygons and keeps the
    label ``e`` otherwise, unless ``new_label`` is given.
    """
    count = t._count.get(e, 0)
    if count == 0:
        raise FlipError(f"no edge {e!r}")
    if count == 1:
        raise FlipError(f"edge {e!r} is a boundary edge")
    slots = t._slots(e)
    (i1, s1), (i2, s2) = slots
    if i1 == i2:
        raise FlipError(f"edge {e!r} is the interior edge of a self-folded triangle")
    t1 = t.triangles[i1][s1:] + t.triangles[i1][:s1]
    t2 = t.triangles[i2][s2:] + t.triangles[i2][:s2]
    _, a, b = t1
    _, c, d = t2
    verts = None
    if t.vertices is not None:
        x, y, p = t.vertices[i1][s1:] + t.vertices[i1][:s1]
        _, _, r = t.vertices[i2][s2:] + t.vertices[i2][:s2]
        # new diagonal joins p and r
        new_verts = ((r, p, x), (p, r, y))
        if new_label is None:
            new_label = polygon_label(p, r, t.polygon)
    if new_label is None:
        new_label = e
    if new_label != e and new_label in t._count:
        raise ValueError(f"label {new_label!r} already in use")
    n1 = (new_label, b, c)
    n2 = (new_label, d, a)
    tris = [tri for k, tri in enumerate(t.triangles) if k not in (i1, i2)] + [n1, n2]
    if t.vertices is not None:
        verts = [v for k, v in enumerate(t.vertices) if k not in (i1, i2)] + list(new_verts)
        verts = tuple(verts)
    return Triangulation(tuple(tris), verts, t.polygon)


def epsilon_of(t: Triangulation, include_boundary: bool = False) -> Quiver:
    """Exchange matrix on the internal edges (optionally all edges)."""
    labels = t.internal_edges + (t.boundary_edges if include_boundary else [])
    idx = {e: i for i, e in enumerate(labels)}
    n = len(labels)
    if n == 0:
        raise ValueError("triangulation has no edges to index")
    eps = [[0] * n for _ in range(n)]
    for tri in t.triangles:
        for i in range(3):
            e, f = tri[i], tri[i - 1]
            if e in idx and f in idx and e != f:
                eps[idx[e]][idx[f]] += 1
                eps[idx[f]][idx[e]] -= 1
    return Quiver(tuple(labels), tuple(tuple(r) for r in eps))


def mirror(t: Triangulation) -> Quiver:
    return epsilon_of(t).negated()


def reordered(q: Quiver, labels: Sequence[str]) -> Quiver:
    idx = [q.index(lab) for lab in labels]
    return Quiver(tuple(labels), tuple(tuple(q.epsilon[i][j] for j in idx) for i in idx))


def flip_consistency_check(t: Triangulation, e: str, corrupt: bool = False) -> Verdict:
    """``epsilon_of(flip(T, E))`` against ``mutate_quiver(epsilon_of(T), E)``.

    The new diagonal inherits the label of ``e``.  ``corrupt`` flips the sign
    of one entry of the flipped side (a negative control).
    """
    before = epsilon_of(t)
    after = epsilon_of(flip(t, e, new_label=e))
    mutated = mutate_quiver(before, e)
    after = reordered(after, mutated.labels)
    eps = [list(r) for r in after.epsilon]
    if corrupt:
        k = mutated.index(e)
        j = next((j for j in range(len(eps)) if eps[k][j]), None)
        if len(eps) == 1:  # no skew corruption exists; break skewness instead
            eps[k][k] = 1
        elif j is None:
            eps[k][(k + 1) % len(eps)] += 1
            eps[(k + 1) % len(eps)][k] -= 1
        else:
            eps[k][j], eps[j][k] = -eps[k][j], -eps[j][k]
    for i, a in enumerate(mutated.labels):
        for j, b in enumerate(mutated.labels):
            if eps[i][j] != mutated.epsilon[i][j]:
                return Verdict(f"flip-consistency[{e}]", False,
                               f"eps[{a}][{b}]: flip gives {eps[i][j]}, mutation gives {mutated.epsilon[i][j]}")
    return Verdict(f"flip-consistency[{e}]", True)


@dataclass
class FlipGraph:
    m: int
    nodes: list[tuple]
    edges: list[tuple[int, int, str]]

    def degree(self, i: int) -> int:
        return sum(1 for a, b, _ in self.edges if i in (a, b))

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        for i, node in enumerate(self.nodes):
            g.add_node(i, diagonals=" ".join(f"{a}-{b}" for a, b in node))
        for a, b, lab in self.edges:
            g.add_edge(a, b, flipped=lab)
        return g

    def graphml(self) -> str:
        import networkx as nx

        return "\n".join(nx.generate_graphml(self.to_networkx()))


def polygon_flip_graph(m: int) -> FlipGraph:
    """All triangulations of the convex ``m``-gon, connected by flips (BFS)."""
    if m < 3:
        raise ValueError("a polygon needs at least 3 vertices")
    start = Triangulation.fan(m)
    index = {start.canonical(): 0}
    nodes = [start.canonical()]
    edges = []
    queue = deque([start])
    while queue:
        t = queue.popleft()
        i = index[t.canonical()]
        for e in t.internal_edges:
            u = flip(t, e)
            key = u.canonical()
            if key not in index:
                index[key] = len(nodes)
                nodes.append(key)
                queue.append(u)
            j = index[key]
            if i < j:
                edges.append((i, j, e))
    return FlipGraph(m, nodes, edges)


def all_polygon_triangulations(m: int) -> list[Triangulation]:
    return [Triangulation.from_polygon(m, node) for node in polygon_flip_graph(m).nodes]
