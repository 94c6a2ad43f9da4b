"""Seed tori of the symplectic double and the classical mutation formulas.

A :class:`DoubleSeed` carries a quiver and names coordinates ``B<label>`` and
``X<label>``, decorated with one prime per mutation step so that composing
substitutions can never capture a variable by accident.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .quiver import Quiver, epsilon_kernel, mutate_quiver, positive_part, sgn
from .symbolic import (
    RationalFunction,
    SpanError,
    TwoForm,
    are_associate,
    dlog_wedge,
    form_pullback,
    rf,
    rf_equal,
    rf_substitute,
    wedge_reduce,
)
from .verdict import Verdict

Substitution = dict[str, RationalFunction]


def _suffix(generation: int) -> str:
    return "'" * generation if generation <= 3 else f"#{generation}"


@dataclass(frozen=True)
class DoubleSeed:
    quiver: Quiver
    generation: int = 0

    @property
    def rank(self) -> int:
        return self.quiver.rank

    @property
    def epsilon(self):
        return self.quiver.epsilon

    def x(self, i) -> str:
        return f"X{self.quiver.labels[self.quiver.index(i)]}{_suffix(self.generation)}"

    def b(self, i) -> str:
        return f"B{self.quiver.labels[self.quiver.index(i)]}{_suffix(self.generation)}"

    def X(self, i) -> RationalFunction:
        return RationalFunction.var(self.x(i))

    def B(self, i) -> RationalFunction:
        return RationalFunction.var(self.b(i))

    @property
    def coordinates(self) -> tuple[str, ...]:
        """``(B_1..B_n, X_1..X_n)``."""
        n = self.rank
        return tuple(self.b(i) for i in range(n)) + tuple(self.x(i) for i in range(n))

    def identity(self) -> Substitution:
        return {c: RationalFunction.var(c) for c in self.coordinates}

    def with_generation(self, generation: int) -> "DoubleSeed":
        return DoubleSeed(self.quiver, generation)


@dataclass
class MutationMap:
    """Pullback ``mu^*``: target coordinates as functions of source coordinates."""

    source: DoubleSeed
    target: DoubleSeed
    substitution: Substitution

    def pull(self, f) -> RationalFunction:
        return rf_substitute(f, self.substitution)

    def then(self, other: "MutationMap") -> "MutationMap":
        """Compose ``self: s0 -> s1`` with ``other: s1 -> s2``."""
        sub = {c: rf_substitute(img, self.substitution) for c, img in other.substitution.items()}
        return MutationMap(self.source, other.target, sub)

    def to_json(self) -> dict:
        return {c: f.render() for c, f in self.substitution.items()}


def b_plus_minus(s: DoubleSeed, k: int) -> tuple[RationalFunction, RationalFunction]:
    """The monomials ``(BB_k^+, BB_k^-)``."""
    eps = s.epsilon
    plus = {s.b(i): eps[k][i] for i in range(s.rank) if eps[k][i] > 0}
    minus = {s.b(i): -eps[k][i] for i in range(s.rank) if eps[k][i] < 0}
    return RationalFunction.monomial(plus), RationalFunction.monomial(minus)


def x_mirror(s: DoubleSeed, i) -> RationalFunction:
    """``X_i * prod_j B_j^{eps_ij}``."""
    i = s.quiver.index(i)
    exps = {s.x(i): 1}
    for j in range(s.rank):
        if s.epsilon[i][j]:
            exps[s.b(j)] = s.epsilon[i][j]
    return RationalFunction.monomial(exps)


def mutate_double(s: DoubleSeed, k) -> MutationMap:
    k = s.quiver.index(k)
    t = DoubleSeed(mutate_quiver(s.quiver, k), s.generation + 1)
    eps = s.epsilon
    xk = s.X(k)
    sub: Substitution = {}
    for i in range(s.rank):
        if i == k:
            sub[t.x(i)] = RationalFunction.monomial({s.x(k): -1})
            continue
        e = eps[i][k]
        if e == 0:
            sub[t.x(i)] = s.X(i)
        else:
            # X_i (1 + X_k^{-sgn e})^{-e}
            inner = 1 + RationalFunction.monomial({s.x(k): -sgn(e)})
            sub[t.x(i)] = s.X(i) * inner ** (-e)
    bp, bm = b_plus_minus(s, k)
    for j in range(s.rank):
        if j == k:
            sub[t.b(j)] = (bm + xk * bp) / (s.B(k) * (1 + xk))
        else:
            sub[t.b(j)] = s.B(j)
    return MutationMap(s, t, sub)


def mutation_sequence(s: DoubleSeed, ks: Sequence) -> MutationMap:
    m = mutate_double(s, ks[0])
    for k in ks[1:]:
        m = m.then(mutate_double(m.target, k))
    return m


def corrupt(m: MutationMap, kind: str = "drop_denominator") -> MutationMap:
    """Deliberately wrong variants of a mutation map, for negative controls."""
    s, t = m.source, m.target
    sub = dict(m.substitution)
    k = next(i for i in range(s.rank) if rf_equal(sub[t.x(i)], 1 / s.X(i)))
    if kind == "drop_denominator":
        bp, bm = b_plus_minus(s, k)
        sub[t.b(k)] = (bm + s.X(k) * bp) / s.B(k)
    elif kind == "drop_x_factor":
        bp, bm = b_plus_minus(s, k)
        sub[t.b(k)] = (bm + bp) / (s.B(k) * (1 + s.X(k)))
    elif kind == "invert_x":
        for i in range(s.rank):
            if i != k and s.epsilon[i][k]:
                sub[t.x(i)] = s.X(i) * s.X(i) / sub[t.x(i)]
                break
    else:
        raise ValueError(f"unknown corruption {kind!r}")
    return MutationMap(s, t, sub)


# --------------------------------------------------------------------------
# Poisson structure and symplectic form
# --------------------------------------------------------------------------

def _generator_bracket(s: DoubleSeed, u: str, v: str) -> RationalFunction | None:
    coords = s.coordinates
    n = s.rank
    iu, iv = coords.index(u), coords.index(v)
    zu, zv = RationalFunction.var(u), RationalFunction.var(v)
    if iu < n and iv < n:
        return None
    if iu >= n and iv >= n:
        e = s.epsilon[iu - n][iv - n]
        return zu * zv * e if e else None
    if iu >= n:  # {X_i, B_j}
        return zu * zv if iu - n == iv else None
    return -(zu * zv) if iv - n == iu else None


def poisson_bracket(s: DoubleSeed, f, g) -> RationalFunction:
    """Leibniz extension of ``{B,B}=0, {X_i,B_j}=d_ij X_i B_j, {X_i,X_j}=eps_ij X_i X_j``."""
    f, g = rf(f), rf(g)
    coords = s.coordinates
    vars_f, vars_g = set(f.variables), set(g.variables)
    df = {u: f.partial(u) for u in coords if u in vars_f}
    dg = {v: g.partial(v) for v in coords if v in vars_g}
    total = RationalFunction.const(0)
    for u, fu in df.items():
        if fu.is_zero():
            continue
        for v, gv in dg.items():
            if gv.is_zero():
                continue
            br = _generator_bracket(s, u, v)
            if br is not None:
                total = total + fu * gv * br
    return total


def poisson_matrix(s: DoubleSeed) -> list[list[RationalFunction]]:
    coords = s.coordinates
    zero = RationalFunction.const(0)
    return [[_generator_bracket(s, u, v) or zero for v in coords] for u in coords]


def symplectic_form(s: DoubleSeed) -> TwoForm:
    """``-1/2 sum eps_ij dlog B_i ^ dlog B_j - sum dlog B_i ^ dlog X_i``."""
    n = s.rank
    terms = []
    for i in range(n):
        for j in range(n):
            if s.epsilon[i][j]:
                terms.append((Fraction(-s.epsilon[i][j], 2), s.b(i), s.b(j)))
        terms.append((-1, s.b(i), s.x(i)))
    return dlog_wedge(s.coordinates, terms)


def bracket_form_product(s: DoubleSeed) -> list[list[RationalFunction]]:
    """Matrix product ``P W`` of the bracket matrix and the form matrix."""
    p = poisson_matrix(s)
    w = symplectic_form(s).matrix()
    m = len(p)
    out = []
    for a in range(m):
        row = []
        for b in range(m):
            acc = RationalFunction.const(0)
            for c in range(m):
                if not p[a][c].is_zero() and not w[c][b].is_zero():
                    acc = acc + p[a][c] * w[c][b]
            row.append(acc)
        out.append(row)
    return out


def bracket_form_sign(s: DoubleSeed) -> int | None:
    """``+1`` if ``P W = I``, ``-1`` if ``P W = -I``, else ``None``."""
    prod = bracket_form_product(s)
    m = len(prod)
    for sign in (1, -1):
        if all(rf_equal(prod[a][b], sign if a == b else 0) for a in range(m) for b in range(m)):
            return sign
    return None


# --------------------------------------------------------------------------
# verifications
# --------------------------------------------------------------------------

def check_form_invariance(s: DoubleSeed, k, mutation: MutationMap | None = None) -> Verdict:
    m = mutation or mutate_double(s, k)
    pulled = form_pullback(symplectic_form(m.target), m.substitution, s.coordinates)
    witness = pulled.difference_witness(symplectic_form(s))
    name = f"form-invariance[k={k}]"
    if witness is None:
        return Verdict(name, True)
    u, v, d = witness
    return Verdict(name, False, f"d{u}^d{v}: {d.render()}")


def _w_terms(s: DoubleSeed, images: Mapping[str, RationalFunction] | None = None):
    def get(name):
        return images[name] if images is not None else RationalFunction.var(name)

    n = s.rank
    terms = []
    for i in range(n):
        for j in range(n):
            if s.epsilon[i][j]:
                terms.append((Fraction(-s.epsilon[i][j], 2), get(s.b(i)), get(s.b(j))))
        terms.append((-1, get(s.b(i)), get(s.x(i))))
    return terms


def k2_factor_basis(s: DoubleSeed, k) -> list[RationalFunction]:
    k = s.quiver.index(k)
    bp, bm = b_plus_minus(s, k)
    basis = [s.X(i) for i in range(s.rank)] + [s.B(i) for i in range(s.rank)]
    basis.append(1 + s.X(k))
    extra = (bm + s.X(k) * bp).reduce()
    if not any(are_associate(extra, b) for b in basis):
        basis.append(extra)
    return basis


def k2_check(s: DoubleSeed, k, mutation: MutationMap | None = None, corrupt_w: bool = False) -> Verdict:
    """``mu^* W~ - W == (1 + X°_k) ^ X°_k - (1 + X_k) ^ X_k`` modulo constants."""
    k = s.quiver.index(k)
    m = mutation or mutate_double(s, k)
    name = f"k2[k={k}]"
    basis = k2_factor_basis(s, k)
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if are_associate(basis[a], basis[b]):
                return Verdict(name, False, f"associate basis elements {basis[a]} and {basis[b]}")
    lhs_terms = _w_terms(m.target, m.substitution)
    w_terms = _w_terms(s)
    if corrupt_w:
        c, f, g = w_terms[0]
        w_terms[0] = (-c, f, g)
    xo = x_mirror(s, k)
    xk = s.X(k)
    expr = lhs_terms + [(-c, f, g) for c, f, g in w_terms]
    expr += [(-1, 1 + xo, xo), (1, 1 + xk, xk)]
    try:
        cls = wedge_reduce(expr, basis)
    except SpanError as exc:
        return Verdict(name, False, f"span check failed: {exc}")
    if cls.is_zero():
        return Verdict(name, True, details={"basis": [b.render() for b in basis]})
    return Verdict(name, False, cls.render())


def check_involution(s: DoubleSeed, k) -> Verdict:
    m = mutate_double(s, k)
    back = m.then(mutate_double(m.target, k))
    t2 = back.target
    name = f"involution[k={k}]"
    if t2.quiver.epsilon != s.quiver.epsilon:
        return Verdict(name, False, "quiver did not return")
    for i in range(s.rank):
        for new, old in ((t2.x(i), s.X(i)), (t2.b(i), s.B(i))):
            if not rf_equal(back.substitution[new], old):
                return Verdict(name, False, f"{new} -> {back.substitution[new].render()}")
    return Verdict(name, True)


def check_pentagon(s: DoubleSeed | None = None, include_b: bool = True) -> Verdict:
    """A2 periodicity: mu_0 mu_1 mu_0 mu_1 mu_0 acts as the swap of the two indices."""
    if s is None:
        s = DoubleSeed(Quiver.from_matrix([[0, 1], [-1, 0]]))
    m = mutation_sequence(s, [0, 1, 0, 1, 0])
    t = m.target
    pairs = [(t.x(0), s.X(1)), (t.x(1), s.X(0))]
    if include_b:
        pairs += [(t.b(0), s.B(1)), (t.b(1), s.B(0))]
    for new, old in pairs:
        if not rf_equal(m.substitution[new], old):
            return Verdict("pentagon", False, f"{new} -> {m.substitution[new].render()}")
    return Verdict("pentagon", True)


def check_bracket_preservation(s: DoubleSeed, k) -> Verdict:
    m = mutate_double(s, k)
    t = m.target
    coords = t.coordinates
    for a in range(len(coords)):
        for b in range(a + 1, len(coords)):
            f, g = coords[a], coords[b]
            lhs = poisson_bracket(s, m.substitution[f], m.substitution[g])
            rhs = m.pull(poisson_bracket(t, RationalFunction.var(f), RationalFunction.var(g)))
            if not rf_equal(lhs, rhs):
                return Verdict(f"poisson[k={k}]", False, f"{{{f},{g}}}: {(lhs - rhs).render()}")
    return Verdict(f"poisson[k={k}]", True)


def check_casimirs(s: DoubleSeed) -> Verdict:
    for v in epsilon_kernel(s.quiver):
        mono = RationalFunction.monomial({s.x(i): v[i] for i in range(s.rank)})
        for j in range(s.rank):
            br = poisson_bracket(s, mono, s.X(j))
            if not br.is_zero():
                return Verdict("casimir", False, f"{{{mono.render()}, {s.x(j)}}} = {br.render()}")
    return Verdict("casimir", True)


def check_bracket_form_duality(s: DoubleSeed) -> Verdict:
    sign = bracket_form_sign(s)
    if sign is None:
        return Verdict("bracket-form", False, "P W is not +-identity")
    return Verdict("bracket-form", True, details={"sign": sign})
