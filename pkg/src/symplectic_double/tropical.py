"""Max-plus limits of the double mutation formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .double import DoubleSeed, mutate_double
from .quiver import Quiver, mutate_quiver, sgn
from .verdict import Verdict

LIMIT_BASES = (2, 4, 16, 256)


@dataclass(frozen=True)
class TropPoint:
    x: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(v) for v in self.x))
        object.__setattr__(self, "b", tuple(Fraction(v) for v in self.b))
        if len(self.x) != len(self.b):
            raise ValueError("x and b coordinates differ in length")

    @property
    def rank(self) -> int:
        return len(self.x)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.x + self.b)

    @classmethod
    def parse(cls, text: str) -> "TropPoint":
        """``"x1,b1;x2,b2;..."``."""
        xs, bs = [], []
        for i, chunk in enumerate(text.split(";")):
            parts = [p.strip() for p in chunk.split(",")]
            if len(parts) != 2:
                raise ValueError(f"point entry {i + 1} must be 'x,b', got {chunk!r}")
            try:
                xs.append(Fraction(parts[0]))
                bs.append(Fraction(parts[1]))
            except ValueError:
                raise ValueError(f"point entry {i + 1} is not rational: {chunk!r}") from None
        return cls(tuple(xs), tuple(bs))

    def render(self) -> str:
        return ";".join(f"{x},{b}" for x, b in zip(self.x, self.b))

    def swapped(self, i: int, j: int) -> "TropPoint":
        x, b = list(self.x), list(self.b)
        x[i], x[j] = x[j], x[i]
        b[i], b[j] = b[j], b[i]
        return TropPoint(tuple(x), tuple(b))


def trop_mutate(p: TropPoint, q: Quiver, k, drop_max: bool = False) -> TropPoint:
    """Piecewise-linear mutation at ``k``.

    ``drop_max`` omits the ``max(0, x_k)`` term of the new ``b_k``; it exists
    only as a negative control.
    """
    if p.rank != q.rank:
        raise ValueError(f"point has {p.rank} coordinates, quiver has rank {q.rank}")
    k = q.index(k)
    eps = q.epsilon
    xk = p.x[k]
    x = list(p.x)
    for i in range(q.rank):
        e = eps[i][k]
        if i == k:
            x[i] = -xk
        elif e:
            x[i] = p.x[i] - e * max(0, -sgn(e) * xk)
    minus = sum((-eps[k][i] * p.b[i] for i in range(q.rank) if eps[k][i] < 0), Fraction(0))
    plus = sum((eps[k][i] * p.b[i] for i in range(q.rank) if eps[k][i] > 0), Fraction(0))
    b = list(p.b)
    b[k] = max(minus, xk + plus) - p.b[k] - (0 if drop_max else max(0, xk))
    return TropPoint(tuple(x), tuple(b))


def trop_sequence(p: TropPoint, q: Quiver, ks: Sequence) -> tuple[TropPoint, Quiver]:
    for k in ks:
        p = trop_mutate(p, q, k)
        q = mutate_quiver(q, k)
    return p, q


def on_wall(p: TropPoint, q: Quiver, k) -> bool:
    """Whether two arguments of some max tie at ``p``."""
    k = q.index(k)
    eps = q.epsilon
    if p.x[k] == 0:
        return True
    minus = sum((-eps[k][i] * p.b[i] for i in range(q.rank) if eps[k][i] < 0), Fraction(0))
    plus = sum((eps[k][i] * p.b[i] for i in range(q.rank) if eps[k][i] > 0), Fraction(0))
    return minus == p.x[k] + plus


def _log(v: Fraction) -> float:
    return math.log(v.numerator) - math.log(v.denominator)


def trop_limit_check(s: DoubleSeed, k, p: TropPoint, bases: Sequence[int] = LIMIT_BASES,
                     trop_map: Callable[[TropPoint, Quiver, int], TropPoint] | None = None) -> Verdict:
    """Compare the PL map with the classical map evaluated at ``t^p``.

    With ``V`` an image and ``y`` its predicted exponent, passing means
    ``t^y / K <= V <= t^y K`` exactly at every base ``t`` (``K`` bounds the
    number of monomials) and the relative error ``|log_t V - y|`` does not
    grow from the smallest to the largest base.
    """
    k = s.quiver.index(k)
    if not p.is_integral():
        raise ValueError("the limit check needs an integral point")
    if any(t <= 1 for t in bases):
        raise ValueError("bases must exceed 1")
    trop_map = trop_map or trop_mutate
    predicted = trop_map(p, s.quiver, k)
    m = mutate_double(s, k)
    t_seed = m.target
    n = s.rank
    weight = sum(abs(s.epsilon[i][k]) for i in range(n)) + 2
    K = Fraction(2) ** weight
    errors: dict[str, list[float]] = {}
    for t in bases:
        t = Fraction(t)
        values = {}
        for i in range(n):
            values[s.x(i)] = t ** int(p.x[i])
            values[s.b(i)] = t ** int(p.b[i])
        for i in range(n):
            for name, y in ((t_seed.x(i), predicted.x[i]), (t_seed.b(i), predicted.b[i])):
                v = m.substitution[name].evaluate(values)
                ty = t ** int(y)
                if v <= 0 or not (ty / K <= v <= ty * K):
                    return Verdict(f"trop-limit[k={k}]", False,
                                   f"{name}: log_{t} of image is {_log(v) / _log(t):.4f}, PL map gives {y}"
                                   if v > 0 else f"{name}: nonpositive image {v}")
                errors.setdefault(name, []).append(abs(_log(v) / _log(t) - float(y)))
    for name, errs in errors.items():
        if errs[-1] > errs[0] + 1e-12:
            return Verdict(f"trop-limit[k={k}]", False, f"{name}: error grows {errs[0]:.4g} -> {errs[-1]:.4g}")
    return Verdict(f"trop-limit[k={k}]", True, details={"wall": on_wall(p, s.quiver, k)})


def check_involution(p: TropPoint, q: Quiver, k) -> Verdict:
    once = trop_mutate(p, q, k)
    twice = trop_mutate(once, mutate_quiver(q, k), k)
    ok = twice == p
    return Verdict(f"trop-involution[k={k}]", ok, None if ok else f"{p.render()} -> {twice.render()}")


def check_pentagon(p: TropPoint) -> Verdict:
    """Five alternating mutations on A2 swap the two indices."""
    q = Quiver.from_matrix([[0, 1], [-1, 0]])
    out, _ = trop_sequence(p, q, [0, 1, 0, 1, 0])
    ok = out == p.swapped(0, 1)
    return Verdict("trop-pentagon", ok, None if ok else f"{p.render()} -> {out.render()}")
