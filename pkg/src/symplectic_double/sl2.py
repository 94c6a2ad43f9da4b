"""Exact SL2 oracle: plane vector configurations and their coordinates.

A point of the double of a polygon is modeled by a pair of configurations of
vectors ``l_i`` (front) and ``l°_i`` (back) in the rational plane.  Every
function here is a direct determinant computation, independent of the
mutation formulas it is used to check.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .double import DoubleSeed, corrupt as corrupt_map, mutate_double, x_mirror
from .linalg import solve_affine
from .surface import Triangulation, epsilon_of, flip
from .verdict import Verdict

Vec = tuple[Fraction, Fraction]


class DegenerateError(ValueError):
    """A determinant needed by a coordinate vanishes."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except ValueError:
            raise ValueError(f"not a rational number: {x!r}") from None
    raise ValueError(f"not a rational number: {x!r}")


def vec(p) -> Vec:
    if len(p) != 2:
        raise ValueError(f"expected a 2-vector, got {p!r}")
    return to_fraction(p[0]), to_fraction(p[1])


def delta(v: Sequence, w: Sequence) -> Fraction:
    return Fraction(v[0]) * Fraction(w[1]) - Fraction(v[1]) * Fraction(w[0])


def apply(mat: Sequence[Sequence], v: Sequence) -> Vec:
    return (Fraction(mat[0][0]) * v[0] + Fraction(mat[0][1]) * v[1],
            Fraction(mat[1][0]) * v[0] + Fraction(mat[1][1]) * v[1])


def _fmt(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class VectorConfig:
    vectors: tuple[Vec, ...]

    def __post_init__(self):
        vs = tuple(vec(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        for i, v in enumerate(vs):
            if v == (0, 0):
                raise ValueError(f"vector {i + 1} is zero")

    def __len__(self) -> int:
        return len(self.vectors)

    def l(self, i: int) -> Vec:  # noqa: E743
        """Vector at (1-based) vertex ``i``."""
        return self.vectors[i - 1]

    def d(self, i: int, j: int) -> Fraction:
        return delta(self.l(i), self.l(j))

    def rescaled(self, factors: Mapping[int, Fraction]) -> "VectorConfig":
        return VectorConfig(tuple((v[0] * factors.get(i + 1, 1), v[1] * factors.get(i + 1, 1))
                                  for i, v in enumerate(self.vectors)))

    def to_json(self) -> list:
        return [[_fmt(a), _fmt(b)] for a, b in self.vectors]


@dataclass(frozen=True)
class DoubleConfig:
    front: VectorConfig
    back: VectorConfig

    def __post_init__(self):
        if len(self.front) != len(self.back):
            raise ValueError("front and back configurations differ in length")

    @property
    def m(self) -> int:
        return len(self.front)

    def B(self, i: int, j: int) -> Fraction:
        """Side or diagonal ratio ``Δ(l°_i, l°_j) / Δ(l_i, l_j)``."""
        den = self.front.d(i, j)
        if den == 0:
            raise DegenerateError(f"Δ(l{i}, l{j}) = 0")
        return self.back.d(i, j) / den

    def rescaled(self, factors: Mapping[int, Fraction]) -> "DoubleConfig":
        return DoubleConfig(self.front.rescaled(factors), self.back.rescaled(factors))

    def to_json(self) -> dict:
        return {"front": self.front.to_json(), "back": self.back.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "DoubleConfig":
        try:
            return cls(VectorConfig(tuple(data["front"])), VectorConfig(tuple(data["back"])))
        except KeyError as e:
            raise ValueError(f"configuration JSON is missing field {e.args[0]!r}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def random_vector_config(m: int, rng: random.Random, bound: int = 9) -> VectorConfig:
    """Random rational vectors with all pairwise determinants nonzero."""
    while True:
        vs = []
        for _ in range(m):
            den = rng.randint(1, 4)
            vs.append((Fraction(rng.randint(-bound, bound), den), Fraction(rng.randint(-bound, bound), den)))
        if all(delta(vs[i], vs[j]) != 0 for i in range(m) for j in range(i + 1, m)):
            return VectorConfig(tuple(vs))


def random_double_config(m: int, rng: random.Random) -> DoubleConfig:
    return DoubleConfig(random_vector_config(m, rng), random_vector_config(m, rng))


def cross_ratio(c: VectorConfig, a: int, b: int, cc: int, d: int) -> Fraction:
    """``Δ(a,d) Δ(b,c) / (Δ(a,b) Δ(c,d))``."""
    den = c.d(a, b) * c.d(cc, d)
    if den == 0:
        raise DegenerateError(f"vanishing Δ in the quadrilateral ({a}, {b}, {cc}, {d})")
    return c.d(a, d) * c.d(b, cc) / den


def double_coords(dc: DoubleConfig, t: Triangulation, include_boundary: bool = False
                  ) -> dict[str, tuple[Fraction, Fraction | None]]:
    """``edge -> (B_E, X_E)``; boundary edges (if requested) get ``X = None``."""
    if t.vertices is None or t.polygon != dc.m:
        raise ValueError(f"triangulation does not triangulate the {dc.m}-gon")
    out = {}
    for e in t.internal_edges:
        a, b, c, d = t.quadrilateral(e)
        out[e] = (dc.B(a, c), cross_ratio(dc.front, a, b, c, d))
    if include_boundary:
        for e in t.boundary_edges:
            i, j = t.edge_vertices(e)
            out[e] = (dc.B(i, j), None)
    return out


def plucker_check(c: VectorConfig | None, quad: Sequence[int],
                  table: Mapping[tuple[int, int], Fraction] | None = None) -> Verdict:
    """``Δ13 Δ24 = Δ12 Δ34 + Δ14 Δ23`` from vectors, or from a given table."""
    i1, i2, i3, i4 = quad

    def d(i, j):
        if table is not None:
            return Fraction(table[(i, j)])
        return c.d(i, j)

    lhs = d(i1, i3) * d(i2, i4)
    rhs = d(i1, i2) * d(i3, i4) + d(i1, i4) * d(i2, i3)
    return Verdict(f"plucker{tuple(quad)}", lhs == rhs, None if lhs == rhs else f"{lhs} != {rhs}")


def delta_table(c: VectorConfig) -> dict[tuple[int, int], Fraction]:
    m = len(c)
    return {(i, j): c.d(i, j) for i in range(1, m + 1) for j in range(1, m + 1)}


def flip_oracle_check(dc: DoubleConfig, t: Triangulation, e: str, corrupt: str | None = None) -> Verdict:
    """Coordinates of the flipped triangulation against the mutation formulas.

    Side ratios enter as frozen B-variables; frozen X-variables are set to 1
    and never compared.  ``corrupt`` names a deliberately wrong variant of the
    mutation map (see ``double.corrupt``).
    """
    name = f"flip-oracle[m={dc.m},{e}]"
    before = double_coords(dc, t, include_boundary=True)
    seed = DoubleSeed(epsilon_of(t, include_boundary=True))
    mut = mutate_double(seed, e)
    if corrupt:
        mut = corrupt_map(mut, corrupt)
    values = {}
    for lab, (bv, xv) in before.items():
        values[seed.b(lab)] = bv
        values[seed.x(lab)] = Fraction(1) if xv is None else xv
    t2 = flip(t, e)
    after = double_coords(dc, t2, include_boundary=True)
    new_label = next(lab for lab in t2.internal_edges if lab not in before)
    internal = set(t2.internal_edges)
    for lab in seed.quiver.labels:
        here = new_label if lab == e else lab
        b_direct, x_direct = after[here]
        try:
            b_pushed = mut.substitution[mut.target.b(lab)].evaluate(values)
            x_pushed = mut.substitution[mut.target.x(lab)].evaluate(values)
        except ZeroDivisionError:
            raise DegenerateError(f"mutation formula degenerates at {e}") from None
        if b_pushed != b_direct:
            return Verdict(name, False, f"B{here}: direct {b_direct}, mutation {b_pushed}")
        if here in internal and x_pushed != x_direct:
            return Verdict(name, False, f"X{here}: direct {x_direct}, mutation {x_pushed}")
    return Verdict(name, True)


def mirror_x_check(dc: DoubleConfig, quad: Sequence[int] = (1, 2, 3, 4),
                   perturbed_back: VectorConfig | None = None) -> Verdict:
    """Back cross-ratio read in the mirror orientation against ``X^-1 B12 B34 / (B14 B23)``.

    ``perturbed_back`` replaces the back configuration on the left side only,
    as a negative control.
    """
    a, b, c, d = quad
    x_back = 1 / cross_ratio(perturbed_back or dc.back, a, b, c, d)
    x = cross_ratio(dc.front, a, b, c, d)
    rhs = (dc.B(a, b) * dc.B(c, d)) / (x * dc.B(a, d) * dc.B(b, c))
    ok = x_back == rhs
    return Verdict(f"mirror-x{tuple(quad)}", ok, None if ok else f"{x_back} != {rhs}")


def mirror_monomial_check(dc: DoubleConfig, t: Triangulation) -> Verdict:
    """``X°_E = X_E prod B^eps`` equals the back cross-ratio with the front formula."""
    coords = double_coords(dc, t, include_boundary=True)
    seed = DoubleSeed(epsilon_of(t, include_boundary=True))
    values = {}
    for lab, (bv, xv) in coords.items():
        values[seed.b(lab)] = bv
        values[seed.x(lab)] = Fraction(1) if xv is None else xv
    for e in t.internal_edges:
        a, b, c, d = t.quadrilateral(e)
        lhs = x_mirror(seed, e).evaluate(values)
        rhs = cross_ratio(dc.back, a, b, c, d)
        if lhs != rhs:
            return Verdict("mirror-monomial", False, f"{e}: {lhs} != {rhs}")
    return Verdict("mirror-monomial", True)


# --------------------------------------------------------------------------
# gluing a polygon and its mirror
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HorocycleLengths:
    """Cyclic side values ``d_i`` (back minus front, log scale)."""

    d: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(to_fraction(x) for x in self.d))

    @property
    def m(self) -> int:
        return len(self.d)

    @classmethod
    def from_sides(cls, front: Sequence, back: Sequence) -> "HorocycleLengths":
        if len(front) != len(back):
            raise ValueError("side lists differ in length")
        return cls(tuple(to_fraction(b) - to_fraction(a) for a, b in zip(front, back)))


@dataclass
class GlueResult:
    kind: str  # "unique" | "family" | "infeasible"
    base: tuple[Fraction, ...] | None = None
    generator: tuple[Fraction, ...] | None = None
    certificate: Fraction | None = None
    dimension: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.base is not None:
            out["base"] = [_fmt(x) for x in self.base]
        if self.generator is not None:
            out["generator"] = [_fmt(x) for x in self.generator]
        if self.certificate is not None:
            out["certificate"] = f"alternating sum = {_fmt(self.certificate)}"
        if self.dimension is not None:
            out["dimension"] = self.dimension
        return out


def alternating_sum(values: Sequence) -> Fraction:
    """``sum_{i=1..m} (-1)^i v_i``."""
    return sum(((-1) ** (i + 1) * to_fraction(v) for i, v in enumerate(values)), Fraction(0))


def glue_solve(h: HorocycleLengths | Sequence) -> GlueResult:
    """Solve ``t_i + t_{i+1} = d_i`` cyclically over the rationals."""
    if not isinstance(h, HorocycleLengths):
        h = HorocycleLengths(tuple(h))
    m = h.m
    if m < 3:
        raise ValueError("gluing needs m >= 3")
    a = [[0] * m for _ in range(m)]
    for i in range(m):
        a[i][i] = 1
        a[i][(i + 1) % m] = 1
    base, null = solve_affine(a, list(h.d))
    if base is None:
        return GlueResult("infeasible", certificate=alternating_sum(h.d))
    if not null:
        return GlueResult("unique", base=tuple(base), dimension=0)
    g = null[0]
    g = tuple(x / g[0] for x in g)
    # base orthogonal to the family direction
    c = sum(x * y for x, y in zip(base, g)) / sum(y * y for y in g)
    base = tuple(x - c * y for x, y in zip(base, g))
    return GlueResult("family", base=base, generator=g, dimension=len(null))


def casimir(lengths: Sequence) -> Fraction:
    """``l_1 - l_2 + l_3 - ... - l_m`` for even ``m``."""
    if len(lengths) % 2:
        raise ValueError("the Casimir is defined for an even number of sides")
    return -alternating_sum(lengths)


# --------------------------------------------------------------------------
# B(alpha) along a closed path
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PathLocalSystem:
    """Framings ``v_i`` at marked points and transports ``t_i`` along ``α_{i,i+1}``."""

    vectors: tuple[Vec, ...]
    transports: tuple[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]], ...]

    def __post_init__(self):
        vs = tuple(vec(v) for v in self.vectors)
        ts = tuple(tuple(tuple(to_fraction(x) for x in row) for row in t) for t in self.transports)
        object.__setattr__(self, "vectors", vs)
        object.__setattr__(self, "transports", ts)
        if len(vs) != len(ts):
            raise ValueError("need one transport per marked point")
        for i, t in enumerate(ts):
            if t[0][0] * t[1][1] - t[0][1] * t[1][0] != 1:
                raise ValueError(f"transport {i + 1} is not in SL2")
        if any(v == (0, 0) for v in vs):
            raise ValueError("framing vectors must be nonzero")

    @property
    def k(self) -> int:
        return len(self.vectors)

    def shifted(self, steps: int = 1) -> "PathLocalSystem":
        s = steps % self.k
        return PathLocalSystem(self.vectors[s:] + self.vectors[:s], self.transports[s:] + self.transports[:s])

    def rescaled(self, i: int, c) -> "PathLocalSystem":
        c = to_fraction(c)
        vs = list(self.vectors)
        vs[i] = (vs[i][0] * c, vs[i][1] * c)
        return PathLocalSystem(tuple(vs), self.transports)


def b_alpha(p: PathLocalSystem) -> Fraction:
    """Alternating product of the pairings along the arcs.

    Arcs alternate between the two halves of the double, which carry
    opposite orientations, so even arcs are paired in the opposite order.
    """
    k = p.k
    if k % 2:
        raise ValueError("B(alpha) needs an even number of marked points")
    num, den = Fraction(1), Fraction(1)
    for i in range(k):
        w = apply(p.transports[i], p.vectors[i])
        nxt = p.vectors[(i + 1) % k]
        if i % 2 == 0:  # arcs 1, 3, 5, ...
            h = delta(w, nxt)
            num *= h
        else:
            h = delta(nxt, w)
            den *= h
        if h == 0:
            raise DegenerateError(f"framings collide along arc {i + 1}")
    return num / den


def w0(t: Fraction) -> Fraction:
    """The Weyl involution on the scalar coordinate of the Cartan."""
    return 1 / t


def cyclic_shift_check(p: PathLocalSystem) -> Verdict:
    before, after = b_alpha(p), w0(b_alpha(p.shifted()))
    ok = before == after
    return Verdict("b-alpha-shift", ok, None if ok else f"{before} != {after}")
