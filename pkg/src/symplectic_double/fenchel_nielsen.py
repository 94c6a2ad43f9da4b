"""SL2 coordinates ``(M_E, B_E)`` attached to a pair-of-pants decomposition.

Conventions for a glued representation:

* each vertex ``v`` carries matrices ``A_h`` for its three half-edges, with
  ``A_h1 A_h2 A_h3 = twist * Id`` in the cyclic order at ``v``;
* the gluing ``G_E`` maps the frame at ``v_E^+`` to the frame at ``v_E^-`` and
  satisfies ``G_E A_{h+} G_E^-1 = A_{h-}^-1``;
* the framing of ``E`` is an eigenvector ``f`` of ``A_{h+}`` with eigenvalue
  ``M_E``, stored in the frame at ``v_E^+``;
* the half-loops are ``T^+ = A_{next(h+)}`` and
  ``T^- = G^-1 A_{next(h-)} G``, and ``B_E = Δ(T^+ f, f) / Δ(T^- f, f)``.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import smith_normal_form
from .sl2 import DegenerateError, apply, delta, to_fraction
from .verdict import Verdict

Mat = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
HalfEdge = tuple[int, int]  # (edge index, +1 at v+ / -1 at v-)

IDENTITY: Mat = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


def mat(rows) -> Mat:
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError(f"expected a 2x2 matrix, got {rows!r}")
    return tuple(tuple(to_fraction(x) for x in r) for r in rows)


def mul(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def det(a: Mat) -> Fraction:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


def inv(a: Mat) -> Mat:
    d = det(a)
    if d == 0:
        raise ZeroDivisionError("singular matrix")
    return ((a[1][1] / d, -a[0][1] / d), (-a[1][0] / d, a[0][0] / d))


def scal(c, a: Mat) -> Mat:
    c = Fraction(c)
    return tuple(tuple(c * x for x in r) for r in a)


def trace(a: Mat) -> Fraction:
    return a[0][0] + a[1][1]


def conj(g: Mat, a: Mat) -> Mat:
    return mul(mul(g, a), inv(g))


def columns(u, v) -> Mat:
    return ((Fraction(u[0]), Fraction(v[0])), (Fraction(u[1]), Fraction(v[1])))


def eigenvector(a: Mat, mu: Fraction) -> tuple[Fraction, Fraction]:
    """A nonzero rational vector in ``ker(a - mu)``."""
    b, c = a[0][1], a[1][0]
    p, s = a[0][0] - mu, a[1][1] - mu
    if b != 0 or p != 0:
        v = (-b, p)
    else:
        v = (s, -c)
    if v == (0, 0):
        v = (Fraction(1), Fraction(0))
    if apply(a, v) != (mu * v[0], mu * v[1]):
        raise ValueError(f"{mu} is not an eigenvalue")
    return v


def _fmt_mat(a: Mat) -> list:
    return [[str(x) for x in r] for r in a]


# --------------------------------------------------------------------------
# trivalent graphs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TrivalentGraph:
    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    cyclic: tuple[tuple[HalfEdge, HalfEdge, HalfEdge], ...] = ()
    genus: int | None = None

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        incident: list[list[HalfEdge]] = [[] for _ in range(self.n_vertices)]
        for e, (a, b) in enumerate(edges):
            for v in (a, b):
                if not 0 <= v < self.n_vertices:
                    raise ValueError(f"edge {e} has endpoint {v} outside the vertex range")
            incident[a].append((e, 1))
            incident[b].append((e, -1))
        for v, hs in enumerate(incident):
            if len(hs) != 3:
                raise ValueError(f"vertex {v} has degree {len(hs)}, expected 3")
        if self.cyclic:
            cyc = tuple(tuple((int(e), int(s)) for e, s in c) for c in self.cyclic)
            for v, c in enumerate(cyc):
                if sorted(c) != sorted(incident[v]):
                    raise ValueError(f"cyclic order at vertex {v} does not list its half-edges")
        else:
            cyc = tuple(tuple(hs) for hs in incident)
        object.__setattr__(self, "cyclic", cyc)
        if not self._connected():
            raise ValueError("graph is not connected")
        g = len(edges) - self.n_vertices + 1
        if self.genus is not None and self.genus != g:
            raise ValueError(f"declared genus {self.genus} but the graph has genus {g}")
        if g < 2:
            raise ValueError("genus must be at least 2")
        object.__setattr__(self, "genus", g)

    def _connected(self) -> bool:
        adj = [[] for _ in range(self.n_vertices)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def vertex_of(self, h: HalfEdge) -> int:
        a, b = self.edges[h[0]]
        return a if h[1] == 1 else b

    def next_half_edge(self, h: HalfEdge) -> HalfEdge:
        c = self.cyclic[self.vertex_of(h)]
        return c[(c.index(h) + 1) % 3]

    def to_json(self) -> dict:
        return {"genus": self.genus, "vertices": self.n_vertices,
                "edges": [list(e) for e in self.edges],
                "cyclic": {str(v): [[e, "+" if s == 1 else "-"] for e, s in c] for v, c in enumerate(self.cyclic)}}

    @classmethod
    def from_json(cls, data: dict) -> "TrivalentGraph":
        if "edges" not in data:
            raise ValueError("graph JSON needs an 'edges' field")
        edges = [tuple(e) for e in data["edges"]]
        n = data.get("vertices")
        if n is None:
            n = 1 + max(max(e) for e in edges)
        cyclic = ()
        if data.get("cyclic"):
            cyc = data["cyclic"]
            cyclic = tuple(tuple((int(e), 1 if s in ("+", 1) else -1) for e, s in cyc[str(v)]) for v in range(n))
        return cls(n, tuple(edges), cyclic, data.get("genus"))


def theta_graph() -> TrivalentGraph:
    return TrivalentGraph(2, ((0, 1), (0, 1), (0, 1)))


def dumbbell_graph() -> TrivalentGraph:
    return TrivalentGraph(2, ((0, 0), (1, 1), (0, 1)))


def random_trivalent_graph(genus: int, rng: random.Random) -> TrivalentGraph:
    """Random connected cubic multigraph with ``2g - 2`` vertices."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    n = 2 * genus - 2
    while True:
        stubs = [v for v in range(n) for _ in range(3)]
        rng.shuffle(stubs)
        edges = tuple((stubs[2 * i], stubs[2 * i + 1]) for i in range(len(stubs) // 2))
        try:
            return TrivalentGraph(n, edges)
        except ValueError:
            continue


def incidence_matrix(g: TrivalentGraph) -> list[list[int]]:
    """``Z[V] -> Z[E]``: ``v`` maps to ``sum_E (+1 if v = v_E^+) (-1 if v = v_E^-)``."""
    m = [[0] * g.n_vertices for _ in g.edges]
    for e, (a, b) in enumerate(g.edges):
        m[e][a] += 1
        m[e][b] -= 1
    return m


def lagrangian_lattice(g: TrivalentGraph) -> tuple[int, list[int]]:
    """Rank of the cokernel of the incidence map and its invariant factors."""
    a = incidence_matrix(g)
    _, d, _ = smith_normal_form(a)
    diag = [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i] != 0]
    return len(g.edges) - len(diag), [abs(x) for x in diag]


# --------------------------------------------------------------------------
# glued representations
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GluedRep:
    graph: TrivalentGraph
    twist: int
    matrices: Mapping[HalfEdge, Mat]
    gluings: tuple[Mat, ...]
    framings: tuple[tuple[Fraction, Fraction], ...]
    eigenvalues: tuple[Fraction, ...]

    def validate(self) -> None:
        g = self.graph
        if self.twist not in (1, -1):
            raise ValueError("twist must be +1 or -1")
        for v, (h1, h2, h3) in enumerate(g.cyclic):
            p = mul(mul(self.matrices[h1], self.matrices[h2]), self.matrices[h3])
            if p != scal(self.twist, IDENTITY):
                raise ValueError(f"vertex {v}: product of boundary matrices is not {self.twist}*Id")
        for h, a in self.matrices.items():
            if det(a) != 1:
                raise ValueError(f"matrix at half-edge {h} is not in SL2")
        for e in range(len(g.edges)):
            gl = self.gluings[e]
            if det(gl) != 1:
                raise ValueError(f"gluing {e} is not in SL2")
            if conj(gl, self.matrices[(e, 1)]) != inv(self.matrices[(e, -1)]):
                raise ValueError(f"gluing {e} does not intertwine the boundary monodromies")
            self.check_framing(e)

    def check_framing(self, e: int) -> None:
        f, mu = self.framings[e], self.eigenvalues[e]
        if f == (0, 0):
            raise ValueError(f"framing of edge {e} is zero")
        if apply(self.matrices[(e, 1)], f) != (mu * f[0], mu * f[1]):
            raise ValueError(f"framing of edge {e} is not an eigenvector")

    def transports(self, e: int) -> tuple[Mat, Mat]:
        g = self.graph
        tp = self.matrices[g.next_half_edge((e, 1))]
        gl = self.gluings[e]
        tm = mul(mul(inv(gl), self.matrices[g.next_half_edge((e, -1))]), gl)
        return tp, tm

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "twist": self.twist,
                "matrices": {f"{e}{'+' if s == 1 else '-'}": _fmt_mat(a) for (e, s), a in sorted(self.matrices.items())},
                "gluings": [_fmt_mat(a) for a in self.gluings],
                "framings": [[str(x) for x in f] for f in self.framings],
                "eigenvalues": [str(x) for x in self.eigenvalues]}

    @classmethod
    def from_json(cls, data: dict) -> "GluedRep":
        try:
            graph = TrivalentGraph.from_json(data["graph"])
            mats = {}
            for key, a in data["matrices"].items():
                mats[(int(key[:-1]), 1 if key[-1] == "+" else -1)] = mat(a)
            r = cls(graph, int(data.get("twist", 1)), mats,
                    tuple(mat(a) for a in data["gluings"]),
                    tuple((to_fraction(p), to_fraction(q)) for p, q in data["framings"]),
                    tuple(to_fraction(x) for x in data["eigenvalues"]))
        except KeyError as e:
            raise ValueError(f"representation JSON is missing field {e.args[0]!r}") from None
        r.validate()
        return r

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if x:
            return x


def random_sl2(rng: random.Random) -> Mat:
    u = ((Fraction(1), _random_rational(rng)), (Fraction(0), Fraction(1)))
    low = ((Fraction(1), Fraction(0)), (_random_rational(rng), Fraction(1)))
    z = _random_rational(rng)
    return mul(mul(u, low), ((z, Fraction(0)), (Fraction(0), 1 / z)))


def _random_eigenvalue(rng: random.Random) -> Fraction:
    while True:
        mu = Fraction(rng.randint(-7, 7), rng.randint(1, 5))
        if mu not in (0, 1, -1):
            return mu


def _pants(mus: Sequence[Fraction], twist: int, rng: random.Random) -> tuple[Mat, Mat, Mat]:
    """``A1 A2 A3 = twist * Id`` with eigenvalues ``mu_i^{+-1}``."""
    m1, m2, m3 = mus
    t2 = m2 + 1 / m2
    t3 = m3 + 1 / m3
    a1 = ((m1, Fraction(0)), (Fraction(0), 1 / m1))
    a = (twist * t3 - t2 / m1) / (m1 - 1 / m1)
    d = t2 - a
    b = _random_rational(rng)
    a2 = ((a, b), ((a * d - 1) / b, d))
    a3 = scal(twist, inv(mul(a1, a2)))
    return a1, a2, a3


def random_glued_rep(graph: TrivalentGraph, rng: random.Random, twist: int | None = None) -> GluedRep:
    """Random rational representation with rational boundary eigenvalues."""
    if twist is None:
        twist = rng.choice((1, -1))
    while True:
        mus = tuple(_random_eigenvalue(rng) for _ in graph.edges)
        mats: dict[HalfEdge, Mat] = {}
        for v, hs in enumerate(graph.cyclic):
            vals = [mus[e] if s == 1 else 1 / mus[e] for e, s in hs]
            gv = random_sl2(rng)
            for h, a in zip(hs, _pants(vals, twist, rng)):
                mats[h] = conj(gv, a)
        gluings, framings = [], []
        for e, mu in enumerate(mus):
            ap, am = mats[(e, 1)], mats[(e, -1)]
            fp = eigenvector(ap, mu)
            pp = columns(fp, eigenvector(ap, 1 / mu))
            # (A^-)^-1 has eigenvalue mu where A^- has 1/mu
            pm = columns(eigenvector(am, 1 / mu), eigenvector(am, mu))
            d1 = _random_rational(rng)
            d2 = det(pp) / (det(pm) * d1)
            gl = mul(mul(pm, ((d1, Fraction(0)), (Fraction(0), d2))), inv(pp))
            gluings.append(gl)
            framings.append(fp)
        r = GluedRep(graph, twist, mats, tuple(gluings), tuple(framings), mus)
        try:
            coordinates(r)
        except DegenerateError:
            continue
        r.validate()
        return r


# --------------------------------------------------------------------------
# coordinates and group actions
# --------------------------------------------------------------------------

def eigenvalue_on(a: Mat, f) -> Fraction:
    """Eigenvalue of ``a`` on the line of ``f``; raises if ``f`` is not an eigenvector."""
    w = apply(a, f)
    if delta(w, f) != 0 or tuple(f) == (0, 0):
        raise ValueError("framing vector is not an eigenvector")
    i = 0 if f[0] != 0 else 1
    return w[i] / f[i]


def monodromy_eigenvalue(r: GluedRep, e: int) -> Fraction:
    mu = eigenvalue_on(r.matrices[(e, 1)], r.framings[e])
    if mu != r.eigenvalues[e]:
        raise ValueError(f"stored eigenvalue of edge {e} does not match its framing")
    return mu


def b_coordinate(r: GluedRep, e: int) -> Fraction:
    f = r.framings[e]
    tp, tm = r.transports(e)
    num = delta(apply(tp, f), f)
    den = delta(apply(tm, f), f)
    if num == 0 or den == 0:
        raise DegenerateError(f"framing line of edge {e} is fixed by a half-loop transport")
    return num / den


def coordinates(r: GluedRep) -> list[tuple[Fraction, Fraction]]:
    return [(monodromy_eigenvalue(r, e), b_coordinate(r, e)) for e in range(len(r.graph.edges))]


def rescale_framing(r: GluedRep, e: int, c) -> GluedRep:
    c = to_fraction(c)
    fr = list(r.framings)
    fr[e] = (fr[e][0] * c, fr[e][1] * c)
    return replace(r, framings=tuple(fr))


def rescale_gluing(r: GluedRep, e: int, lam) -> GluedRep:
    """``G_E -> G_E h`` with ``h`` acting by ``lam^-1`` on the framing line
    and by ``lam`` on the other eigenline of ``A_{h+}``."""
    lam = to_fraction(lam)
    if lam == 0:
        raise ValueError("rescaling factor must be nonzero")
    mu = r.eigenvalues[e]
    p = columns(r.framings[e], eigenvector(r.matrices[(e, 1)], 1 / mu))
    h = mul(mul(p, ((1 / lam, Fraction(0)), (Fraction(0), lam))), inv(p))
    gl = list(r.gluings)
    gl[e] = mul(gl[e], h)
    return replace(r, gluings=tuple(gl))


def center_act(r: GluedRep, c: Sequence[int]) -> GluedRep:
    if len(c) != len(r.graph.edges) or any(x not in (1, -1) for x in c):
        raise ValueError("a center cochain assigns +1 or -1 to every edge")
    return replace(r, gluings=tuple(scal(x, g) for x, g in zip(c, r.gluings)))


def vertex_gauge(r: GluedRep, v: int, g: Mat) -> GluedRep:
    """Change the frame at vertex ``v`` by ``g``."""
    graph = r.graph
    mats = dict(r.matrices)
    for h in graph.cyclic[v]:
        mats[h] = conj(g, mats[h])
    gl, fr = list(r.gluings), list(r.framings)
    ginv = inv(g)
    for e, (a, b) in enumerate(graph.edges):
        if a == v:
            gl[e] = mul(gl[e], ginv)
            fr[e] = apply(g, fr[e])
        if b == v:
            gl[e] = mul(g, gl[e])
    return replace(r, matrices=mats, gluings=tuple(gl), framings=tuple(fr))


def reverse_edge(r: GluedRep, e: int) -> GluedRep:
    """Swap the ends of ``e``, carrying the framing across the gluing."""
    graph = r.graph
    edges = list(graph.edges)
    a, b = edges[e]
    edges[e] = (b, a)
    flip_h = {(e, 1): (e, -1), (e, -1): (e, 1)}
    cyclic = tuple(tuple(flip_h.get(h, h) for h in c) for c in graph.cyclic)
    new_graph = TrivalentGraph(graph.n_vertices, tuple(edges), cyclic, graph.genus)
    mats = {flip_h.get(h, h): m for h, m in r.matrices.items()}
    gl, fr, mus = list(r.gluings), list(r.framings), list(r.eigenvalues)
    fr[e] = apply(gl[e], fr[e])
    gl[e] = inv(gl[e])
    mus[e] = 1 / mus[e]
    return GluedRep(new_graph, r.twist, mats, tuple(gl), tuple(fr), tuple(mus))


def coboundary(graph: TrivalentGraph, s: Sequence[int]) -> tuple[int, ...]:
    return tuple(s[a] * s[b] for a, b in graph.edges)


def _spanning_paths(r: GluedRep) -> dict[int, Mat]:
    """Transport from the frame at vertex 0 to each vertex along a BFS tree."""
    graph = r.graph
    paths = {0: IDENTITY}
    tree = set()
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for e, (a, b) in enumerate(graph.edges):
            if a == v and b not in paths:
                paths[b] = mul(r.gluings[e], paths[v])
            elif b == v and a not in paths:
                paths[a] = mul(inv(r.gluings[e]), paths[v])
            else:
                continue
            tree.add(e)
            queue.append(a if b == v else b)
    return paths, tree


def cycle_traces(r: GluedRep) -> list[Fraction]:
    """Traces of the gluing holonomies around a basis of graph cycles."""
    paths, tree = _spanning_paths(r)
    out = []
    for e, (a, b) in enumerate(r.graph.edges):
        if e in tree:
            continue
        hol = mul(inv(paths[b]), mul(r.gluings[e], paths[a]))
        out.append(trace(hol))
    return out


def is_coboundary(graph: TrivalentGraph, c: Sequence[int]) -> bool:
    """Product of ``c`` around every basis cycle is ``+1``."""
    signs = {0: 1}
    queue = deque([0])
    tree = set()
    while queue:
        v = queue.popleft()
        for e, (a, b) in enumerate(graph.edges):
            w = b if a == v else a if b == v else None
            if w is None or w in signs:
                continue
            signs[w] = signs[v] * c[e]
            tree.add(e)
            queue.append(w)
    return all(signs[a] * signs[b] == c[e] for e, (a, b) in enumerate(graph.edges) if e not in tree)


def same_up_to_framing_scale(r1: GluedRep, r2: GluedRep) -> bool:
    if r1.matrices != r2.matrices or r1.gluings != r2.gluings or r1.eigenvalues != r2.eigenvalues:
        return False
    return all(delta(f1, f2) == 0 for f1, f2 in zip(r1.framings, r2.framings))


def invariance_checks(r: GluedRep, rng: random.Random) -> list[Verdict]:
    """Framing rescaling, vertex conjugation, center action, gluing rescaling and reversal."""
    base = coordinates(r)
    n_edges = len(r.graph.edges)
    out = []

    def check(name, other, expect=None):
        got = coordinates(other)
        want = base if expect is None else expect
        ok = got == want
        out.append(Verdict(name, ok, None if ok else f"{got} != {want}"))

    e = rng.randrange(n_edges)
    check("fn-framing-rescale", rescale_framing(r, e, _random_rational(rng)))
    v = rng.randrange(r.graph.n_vertices)
    check("fn-vertex-conjugation", vertex_gauge(r, v, random_sl2(rng)))
    c = tuple(rng.choice((1, -1)) for _ in range(n_edges))
    check("fn-center-action", center_act(r, c))
    lam = _random_rational(rng)
    expect = list(base)
    expect[e] = (base[e][0], base[e][1] * lam * lam)
    check("fn-gluing-rescale", rescale_gluing(r, e, lam), expect)
    rev = coordinates(reverse_edge(r, e))
    want = list(base)
    want[e] = (1 / base[e][0], 1 / base[e][1])
    out.append(Verdict("fn-reversal", rev == want, None if rev == want else f"{rev[e]} vs {want[e]}"))
    return out
