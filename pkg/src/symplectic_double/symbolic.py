"""Exact multivariate polynomials, rational functions and algebraic 2-forms over Q.

Polynomials are sparse maps from monomials to rational coefficients.
Rational functions keep their denominator as a product of *factors*
(single variables and primitive non-monomial polynomials with
multiplicities).  Addition then only needs the least common multiple of two
factor multisets, which keeps expressions produced by mutation formulas
small without any multivariate GCD.  Equality is decided by
cross-multiplication, so the factor bookkeeping is an optimisation only.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]

# --------------------------------------------------------------------------
# variable registry: monomials are tuples of (var id, exponent) sorted by id
# --------------------------------------------------------------------------

_VAR_IDS: dict[str, int] = {}
_VAR_NAMES: list[str] = []


def _vid(name: str) -> int:
    i = _VAR_IDS.get(name)
    if i is None:
        i = len(_VAR_NAMES)
        _VAR_IDS[name] = i
        _VAR_NAMES.append(name)
    return i


def _norm(c: Number) -> Number:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_div(a: tuple, b: tuple) -> tuple | None:
    """a / b if b divides a, else None."""
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def _mono_deg(m: tuple) -> int:
    return sum(e for _, e in m)


def _order_key(m: tuple):
    # graded lex on variable ids; used only internally (division)
    return (_mono_deg(m), tuple((-v, e) for v, e in m))


def _name_cmp(a: tuple, b: tuple) -> int:
    da, db = _mono_deg(a), _mono_deg(b)
    if da != db:
        return -1 if da < db else 1
    ea = {_VAR_NAMES[v]: e for v, e in a}
    eb = {_VAR_NAMES[v]: e for v, e in b}
    for name in sorted(set(ea) | set(eb)):
        x, y = ea.get(name, 0), eb.get(name, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


_render_key = functools.cmp_to_key(_name_cmp)


class MultiPoly:
    """Sparse polynomial over Q in named variables."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping[tuple, Number] | None = None):
        self._t: dict[tuple, Number] = {}
        self._hash = None
        if terms:
            for m, c in terms.items():
                if c:
                    self._t[m] = _norm(c)

    @classmethod
    def _raw(cls, t: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Number) -> "MultiPoly":
        return cls._raw({(): _norm(Fraction(c)) if isinstance(c, Fraction) else c} if c else {})

    @classmethod
    def var(cls, name: str) -> "MultiPoly":
        return cls._raw({((_vid(name), 1),): 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Number = 1) -> "MultiPoly":
        if any(e < 0 for e in exps.values()):
            raise ValueError("negative exponent in polynomial monomial")
        m = tuple(sorted((_vid(n), e) for n, e in exps.items() if e))
        return cls._raw({m: coeff} if coeff else {})

    @classmethod
    def from_exponents(cls, variables: Sequence[str], terms: Mapping[Sequence[int], Number]) -> "MultiPoly":
        out: dict[tuple, Number] = {}
        ids = [_vid(v) for v in variables]
        for exps, c in terms.items():
            if len(exps) != len(ids):
                raise ValueError("exponent vector does not match variable arity")
            m = tuple(sorted((i, e) for i, e in zip(ids, exps) if e))
            out[m] = out.get(m, 0) + c
        return cls(out)

    # -- inspection -------------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted({_VAR_NAMES[v] for m in self._t for v, _ in m}))

    @property
    def terms(self) -> dict[tuple[int, ...], Number]:
        """Exponent vectors (over ``variables``) to coefficients."""
        names = self.variables
        pos = {_vid(n): i for i, n in enumerate(names)}
        out = {}
        for m, c in self._t.items():
            e = [0] * len(names)
            for v, k in m:
                e[pos[v]] = k
            out[tuple(e)] = c
        return out

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._t.get((), 0)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def __len__(self) -> int:
        return len(self._t)

    def degree(self) -> int:
        return max((_mono_deg(m) for m in self._t), default=-1)

    def degree_in(self, name: str) -> int:
        v = _VAR_IDS.get(name)
        return max((dict(m).get(v, 0) for m in self._t), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = _norm(s)
            else:
                t.pop(m, None)
        return MultiPoly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def scale(self, c: Number) -> "MultiPoly":
        if not c:
            return MultiPoly()
        return MultiPoly._raw({m: _norm(v * c) for m, v in self._t.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        if len(self._t) < len(other._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        if len(b) == 1:
            (mb, cb), = b.items()
            return MultiPoly._raw({_mono_mul(ma, mb): _norm(ca * cb) for ma, ca in a.items()})
        t: dict[tuple, Number] = {}
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                t[m] = t.get(m, 0) + ca * cb
        return MultiPoly._raw({m: _norm(c) for m, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def leading(self) -> tuple[tuple, Number]:
        m = max(self._t, key=_order_key)
        return m, self._t[m]

    def exact_div(self, other: "MultiPoly") -> "MultiPoly | None":
        """Quotient if ``other`` divides ``self`` exactly, else ``None``."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return MultiPoly()
        if len(other._t) == 1:
            (mo, co), = other._t.items()
            out = {}
            for m, c in self._t.items():
                q = _mono_div(m, mo)
                if q is None:
                    return None
                out[q] = _norm(Fraction(c) / co)
            return MultiPoly._raw(out)
        lm_o, lc_o = other.leading()
        rem = dict(self._t)
        quot: dict[tuple, Number] = {}
        while rem:
            lm = max(rem, key=_order_key)
            qm = _mono_div(lm, lm_o)
            if qm is None:
                return None
            qc = _norm(Fraction(rem[lm]) / lc_o)
            quot[qm] = qc
            for m, c in other._t.items():
                mm = _mono_mul(m, qm)
                s = rem.get(mm, 0) - c * qc
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        return MultiPoly._raw(quot)

    def partial(self, name: str) -> "MultiPoly":
        v = _VAR_IDS.get(name)
        if v is None:
            return MultiPoly()
        t: dict[tuple, Number] = {}
        for m, c in self._t.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            nm = tuple(sorted(d.items()))
            t[nm] = t.get(nm, 0) + c * e
        return MultiPoly._raw({m: _norm(c) for m, c in t.items() if c})

    def monomial_gcd(self) -> tuple:
        it = iter(self._t)
        g = dict(next(it))
        for m in it:
            d = dict(m)
            g = {v: min(e, d[v]) for v, e in g.items() if v in d}
            if not g:
                break
        return tuple(sorted(g.items()))

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` integral and primitive."""
        nums = [Fraction(c) for c in self._t.values()]
        num = functools.reduce(math.gcd, (x.numerator for x in nums))
        den = functools.reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in nums))
        return Fraction(num, den)

    def evaluate(self, values: Mapping[str, Number]) -> Number:
        total: Number = 0
        for m, c in self._t.items():
            term = c
            for v, e in m:
                term = term * Fraction(values[_VAR_NAMES[v]]) ** e
            total += term
        return _norm(Fraction(total))

    def map_variables(self, fn) -> "MultiPoly":
        """Rename variables via ``fn(name) -> name``."""
        t: dict[tuple, Number] = {}
        for m, c in self._t.items():
            nm = tuple(sorted((_vid(fn(_VAR_NAMES[v])), e) for v, e in m))
            t[nm] = t.get(nm, 0) + c
        return MultiPoly({m: c for m, c in t.items() if c})

    def items(self):
        """Iterate ``({name: exp}, coeff)`` pairs."""
        for m, c in self._t.items():
            yield {_VAR_NAMES[v]: e for v, e in m}, c

    # -- rendering --------------------------------------------------------
    def render(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for m in sorted(self._t, key=_render_key, reverse=True):
            c = self._t[m]
            names = sorted(((_VAR_NAMES[v], e) for v, e in m))
            mono = "*".join(n if e == 1 else f"{n}^{e}" for n, e in names)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"

    __str__ = render


def _normalize_factor(p: MultiPoly) -> tuple[Number, dict[MultiPoly, int]]:
    """Split ``p`` as ``c * prod(factors)`` with canonical factors.

    Variables become their own factors; the rest is made primitive with a
    positive leading coefficient.
    """
    if p.is_zero():
        raise ZeroDivisionError("zero denominator")
    factors: dict[MultiPoly, int] = {}
    mg = p.monomial_gcd()
    if mg:
        p = p.exact_div(MultiPoly._raw({mg: 1}))
        for v, e in mg:
            factors[MultiPoly._raw({((v, 1),): 1})] = e
    if p.is_constant():
        return p.constant_value(), factors
    c = p.content()
    if p.leading()[1] < 0:
        c = -c
    prim = p.scale(1 / c) if c != 1 else p
    if prim.is_monomial():  # cannot happen after removing monomial gcd
        raise AssertionError
    factors[prim] = factors.get(prim, 0) + 1
    return _norm(c), factors


def _factor_product(factors: Mapping[MultiPoly, int]) -> MultiPoly:
    out = MultiPoly.const(1)
    for f, e in factors.items():
        out = out * f ** e
    return out


class RationalFunction:
    """Quotient ``numerator / denominator`` of polynomials over Q.

    The denominator is stored as a multiset of canonical factors; the
    ``denominator`` property expands it.
    """

    __slots__ = ("num", "den")

    def __init__(self, numerator: MultiPoly | Number = 0, denominator: MultiPoly | Number | None = None):
        if not isinstance(numerator, MultiPoly):
            numerator = MultiPoly.const(numerator)
        if denominator is None:
            self.num, self.den = numerator, {}
            return
        if not isinstance(denominator, MultiPoly):
            denominator = MultiPoly.const(denominator)
        c, factors = _normalize_factor(denominator)
        self.num = numerator.scale(Fraction(1) / c) if c != 1 else numerator
        self.den = factors
        self._cancel()

    @classmethod
    def _raw(cls, num: MultiPoly, den: dict) -> "RationalFunction":
        r = cls.__new__(cls)
        r.num, r.den = num, den
        return r

    @classmethod
    def var(cls, name: str) -> "RationalFunction":
        return cls._raw(MultiPoly.var(name), {})

    @classmethod
    def const(cls, c: Number) -> "RationalFunction":
        return cls._raw(MultiPoly.const(c), {})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Number = 1) -> "RationalFunction":
        """Laurent monomial ``coeff * prod(name**exp)``; exponents may be negative."""
        pos = {n: e for n, e in exps.items() if e > 0}
        den = {MultiPoly.var(n): -e for n, e in exps.items() if e < 0}
        return cls._raw(MultiPoly.monomial(pos, coeff), den)

    @property
    def numerator(self) -> MultiPoly:
        return self.num

    @property
    def denominator(self) -> MultiPoly:
        return _factor_product(self.den)

    @property
    def variables(self) -> tuple[str, ...]:
        vs = set(self.num.variables)
        for f in self.den:
            vs.update(f.variables)
        return tuple(sorted(vs))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and not self.den

    # -- internal normalisation ------------------------------------------
    def _cancel(self, deep: bool = False) -> "RationalFunction":
        if self.num.is_zero():
            self.den = {}
            return self
        if not self.den:
            return self
        mg = dict(self.num.monomial_gcd())
        cancel_mono = {}
        for f, e in list(self.den.items()):
            if f.is_monomial():
                (mono,) = f._t.keys()
                v = mono[0][0]
                k = min(e, mg.get(v, 0))
                if k:
                    cancel_mono[v] = k
                    if e == k:
                        del self.den[f]
                    else:
                        self.den[f] = e - k
        if cancel_mono:
            self.num = self.num.exact_div(MultiPoly._raw({tuple(sorted(cancel_mono.items())): 1}))
        if deep:
            for f, e in list(self.den.items()):
                if f.is_monomial():
                    continue
                while e:
                    q = self.num.exact_div(f)
                    if q is None:
                        break
                    self.num = q
                    e -= 1
                if e:
                    self.den[f] = e
                else:
                    del self.den[f]
        return self

    def reduce(self) -> "RationalFunction":
        """Cancel every stored denominator factor that divides the numerator."""
        r = RationalFunction._raw(self.num, dict(self.den))
        return r._cancel(deep=True)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, MultiPoly):
            return RationalFunction._raw(x, {})
        if isinstance(x, (int, Fraction)):
            return RationalFunction.const(x)
        return NotImplemented

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction._raw(self.num + other.num, dict(self.den))._cancel()
        lcm = dict(self.den)
        for f, e in other.den.items():
            if lcm.get(f, 0) < e:
                lcm[f] = e
        a = self.num * _factor_product({f: e - self.den.get(f, 0) for f, e in lcm.items() if e - self.den.get(f, 0)})
        b = other.num * _factor_product({f: e - other.den.get(f, 0) for f, e in lcm.items() if e - other.den.get(f, 0)})
        return RationalFunction._raw(a + b, lcm)._cancel()

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._raw(-self.num, dict(self.den))

    def __sub__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunction.const(0)
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        r = RationalFunction._raw(self.num * other.num, den)
        return r._cancel(deep=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        c, factors = _normalize_factor(self.num)
        num = _factor_product(self.den).scale(Fraction(1) / c)
        return RationalFunction._raw(num, factors)._cancel(deep=True)

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RationalFunction":
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._raw(self.num ** k, {f: e * k for f, e in self.den.items()})

    def equals(self, other) -> bool:
        """Exact equality by cross-multiplication."""
        return rf_equal(self, other)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return rf_equal(self, other)

    __hash__ = None  # equality is semantic; not usable as a dict key

    def partial(self, name: str) -> "RationalFunction":
        return rf_partial(self, name)

    def subs(self, sigma: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        return rf_substitute(self, sigma)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        d = Fraction(1)
        for f, e in self.den.items():
            d *= Fraction(f.evaluate(values)) ** e
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return Fraction(self.num.evaluate(values)) / d

    def render(self) -> str:
        n = self.num.render()
        if not self.den:
            return n
        fs = []
        for f in sorted(self.den, key=lambda p: (len(p) > 1, p.render())):
            body = f.render()
            if len(f) > 1:
                body = f"({body})"
            e = self.den[f]
            fs.append(body if e == 1 else f"{body}^{e}")
        num = n if len(self.num) <= 1 else f"({n})"
        den = fs[0] if len(fs) == 1 else "(" + "*".join(fs) + ")"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({self.render()!r})"

    __str__ = render


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------

def rf(x) -> RationalFunction:
    """Coerce numbers, polynomials, variable names or rendered text."""
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, str):
        return parse(x)
    return RationalFunction._coerce(x)


def rf_arith(f, g, op: str) -> RationalFunction:
    f, g = rf(f), rf(g)
    if op == "+":
        return f + g
    if op == "-":
        return f - g
    if op == "*":
        return f * g
    if op == "/":
        if g.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return f / g
    raise ValueError(f"unknown operation {op!r}")


def rf_equal(f, g) -> bool:
    f, g = rf(f), rf(g)
    return (f - g).num.is_zero()


def _eval_poly(p: MultiPoly, sigma: Mapping[str, RationalFunction], cache: dict) -> RationalFunction:
    total = RationalFunction.const(0)
    for m, c in p._t.items():
        term = RationalFunction.const(c)
        for v, e in m:
            key = (v, e)
            val = cache.get(key)
            if val is None:
                name = _VAR_NAMES[v]
                if name not in sigma:
                    raise KeyError(f"substitution does not cover variable {name!r}")
                val = rf(sigma[name]) ** e
                cache[key] = val
            term = term * val
        total = total + term
    return total


def rf_substitute(f, sigma: Mapping[str, RationalFunction]) -> RationalFunction:
    """Compose ``f`` with the substitution ``sigma`` (variable -> function)."""
    f = rf(f)
    cache: dict = {}
    num = _eval_poly(f.num, sigma, cache)
    if not f.den:
        return num
    den = RationalFunction.const(1)
    for fac, e in f.den.items():
        val = _eval_poly(fac, sigma, cache)
        if val.is_zero():
            raise ZeroDivisionError("substitution makes a denominator identically zero")
        den = den * val ** e
    return num / den


def rf_partial(f, name: str) -> RationalFunction:
    f = rf(f)
    result = RationalFunction._raw(f.num.partial(name), dict(f.den))._cancel()
    for fac, e in f.den.items():
        d = fac.partial(name)
        if d.is_zero():
            continue
        den = dict(f.den)
        den[fac] = e + 1
        result = result + RationalFunction._raw((f.num * d).scale(-e), den)._cancel()
    return result


# --------------------------------------------------------------------------
# parsing of rendered expressions
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_'#.]*)|(.))")


def parse(text: str) -> RationalFunction:
    """Parse ``+ - * / ^`` expressions over integers and identifiers."""
    tokens = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            tokens.append(("num", num))
        elif name:
            tokens.append(("name", name))
        elif op.strip():
            tokens.append(("op", op))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def expr():
        kind, val = peek()
        sign = 1
        if (kind, val) == ("op", "-"):
            take()
            sign = -1
        elif (kind, val) == ("op", "+"):
            take()
        out = term() * sign
        while peek() in (("op", "+"), ("op", "-")):
            _, o = take()
            t = term()
            out = out + t if o == "+" else out - t
        return out

    def term():
        out = power()
        while peek() in (("op", "*"), ("op", "/")):
            _, o = take()
            p = power()
            out = out * p if o == "*" else out / p
        return out

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            e_sign = 1
            if (kind, val) == ("op", "-"):
                e_sign = -1
                kind, val = take()
            if kind == "op" and val == "(":
                kind, val = take()
                neg = 1
                if (kind, val) == ("op", "-"):
                    neg = -1
                    kind, val = take()
                if take() != ("op", ")"):
                    raise ValueError("bad exponent")
                e_sign *= neg
            if kind != "num" or "/" in val:
                raise ValueError(f"bad exponent in {text!r}")
            base = base ** (e_sign * int(val))
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return RationalFunction.const(_norm(Fraction(val)))
        if kind == "name":
            return RationalFunction.var(val)
        if (kind, val) == ("op", "("):
            out = expr()
            if take() != ("op", ")"):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return out
        if (kind, val) == ("op", "-"):
            return -power()
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


# --------------------------------------------------------------------------
# 2-forms
# --------------------------------------------------------------------------

class TwoForm:
    """``sum_{u<v} F[u][v] dz_u ^ dz_v`` with rational-function coefficients."""

    def __init__(self, coordinates: Sequence[str], coefficients: Mapping[tuple[int, int], RationalFunction] | None = None):
        self.coordinates = tuple(coordinates)
        self._c: dict[tuple[int, int], RationalFunction] = {}
        for (u, v), f in (coefficients or {}).items():
            self.add(u, v, f)

    def add(self, u: int, v: int, f) -> None:
        """Add ``f dz_u ^ dz_v`` (any order of u, v)."""
        f = rf(f)
        if u == v or f.is_zero():
            return
        if u > v:
            u, v, f = v, u, -f
        cur = self._c.get((u, v))
        new = f if cur is None else cur + f
        if new.is_zero():
            self._c.pop((u, v), None)
        else:
            self._c[(u, v)] = new

    def coefficient(self, u, v) -> RationalFunction:
        if isinstance(u, str):
            u = self.coordinates.index(u)
        if isinstance(v, str):
            v = self.coordinates.index(v)
        if u == v:
            return RationalFunction.const(0)
        if u < v:
            return self._c.get((u, v), RationalFunction.const(0))
        return -self._c.get((v, u), RationalFunction.const(0))

    def matrix(self) -> list[list[RationalFunction]]:
        n = len(self.coordinates)
        return [[self.coefficient(u, v) for v in range(n)] for u in range(n)]

    def nonzero_items(self):
        return sorted(self._c.items())

    def difference_witness(self, other: "TwoForm"):
        """First ``(u, v, difference)`` where the forms differ, else ``None``."""
        if self.coordinates != other.coordinates:
            other = other.reorder(self.coordinates)
        keys = sorted(set(self._c) | set(other._c))
        for u, v in keys:
            d = self.coefficient(u, v) - other.coefficient(u, v)
            if not d.is_zero():
                return self.coordinates[u], self.coordinates[v], d
        return None

    def reorder(self, coordinates: Sequence[str]) -> "TwoForm":
        idx = {c: i for i, c in enumerate(coordinates)}
        out = TwoForm(coordinates)
        for (u, v), f in self._c.items():
            out.add(idx[self.coordinates[u]], idx[self.coordinates[v]], f)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoForm):
            return NotImplemented
        if set(self.coordinates) != set(other.coordinates):
            return False
        return self.difference_witness(other) is None

    def __neg__(self) -> "TwoForm":
        return TwoForm(self.coordinates, {k: -f for k, f in self._c.items()})

    def render(self) -> str:
        if not self._c:
            return "0"
        return " + ".join(f"({f.render()}) d{self.coordinates[u]}^d{self.coordinates[v]}"
                          for (u, v), f in self.nonzero_items())

    def __repr__(self) -> str:
        return f"TwoForm({self.render()})"


def dlog_wedge(coordinates: Sequence[str], terms: Iterable[tuple[Number, str, str]]) -> TwoForm:
    """Expand ``sum c * dlog z_a ^ dlog z_b`` into a :class:`TwoForm`."""
    idx = {c: i for i, c in enumerate(coordinates)}
    form = TwoForm(coordinates)
    for c, a, b in terms:
        coeff = RationalFunction.monomial({a: -1, b: -1} if a != b else {a: -2}, c)
        form.add(idx[a], idx[b], coeff)
    return form


def form_pullback(omega: TwoForm, sigma: Mapping[str, RationalFunction],
                  target: Sequence[str] | None = None) -> TwoForm:
    """Pull ``omega`` back along ``z_u = sigma[z_u](y)``."""
    images = [rf(sigma[z]) for z in omega.coordinates]
    if target is None:
        vs = set()
        for f in images:
            vs.update(f.variables)
        target = sorted(vs)
    target = tuple(target)
    jac = [[f.partial(y) for y in target] for f in images]
    out = TwoForm(target)
    for (u, v), coeff in omega.nonzero_items():
        c = rf_substitute(coeff, sigma)
        ju, jv = jac[u], jac[v]
        for a in range(len(target)):
            if ju[a].is_zero() and jv[a].is_zero():
                continue
            for b in range(a + 1, len(target)):
                minor = ju[a] * jv[b] - ju[b] * jv[a]
                if not minor.is_zero():
                    out.add(a, b, c * minor)
    return out


# --------------------------------------------------------------------------
# wedge classes in Lambda^2 of the multiplicative group
# --------------------------------------------------------------------------

class SpanError(ValueError):
    """A function does not factor over the supplied multiplicative basis."""


def factor_over(f, basis: Sequence[RationalFunction]) -> tuple[Fraction, list[int]]:
    """Write ``f = c * prod(basis[i] ** e[i])`` with ``c`` in Q*.

    Basis elements must be polynomials.  Raises :class:`SpanError` when a
    non-constant cofactor remains.
    """
    f = rf(f)
    polys = []
    for b in basis:
        b = rf(b)
        if b.den:
            b = b.reduce()
            if b.den:
                raise ValueError("factor basis elements must be polynomials")
        polys.append(b.num)
    exps = [0] * len(polys)

    def strip(p: MultiPoly, sign: int) -> Fraction:
        for i, b in enumerate(polys):
            while True:
                q = p.exact_div(b)
                if q is None:
                    break
                p = q
                exps[i] += sign
        if not p.is_constant():
            raise SpanError(f"{p.render()} is not in the multiplicative span of the basis")
        return Fraction(p.constant_value())

    if f.is_zero():
        raise SpanError("zero has no multiplicative decomposition")
    c = strip(f.num, 1)
    for fac, e in f.den.items():
        for _ in range(e):
            c /= strip(fac, -1)
    return c, exps


class WedgeClass:
    """Antisymmetric integer matrix over an ordered factor basis."""

    def __init__(self, basis: Sequence[RationalFunction], matrix: Sequence[Sequence[int]] | None = None):
        self.basis = [rf(b) for b in basis]
        n = len(self.basis)
        self.matrix = [list(r) for r in matrix] if matrix is not None else [[0] * n for _ in range(n)]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.matrix for x in row)

    def __sub__(self, other: "WedgeClass") -> "WedgeClass":
        return WedgeClass(self.basis, [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __add__(self, other: "WedgeClass") -> "WedgeClass":
        return WedgeClass(self.basis, [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def entries(self):
        n = len(self.basis)
        return [(self.basis[a], self.basis[b], self.matrix[a][b])
                for a in range(n) for b in range(a + 1, n) if self.matrix[a][b]]

    def render(self) -> str:
        ents = self.entries()
        if not ents:
            return "0"
        return " + ".join(f"{c}*({a.render()})^({b.render()})" for a, b, c in ents)


def wedge_reduce(expr: Iterable[tuple[Number, RationalFunction, RationalFunction]],
                 basis: Sequence[RationalFunction]) -> WedgeClass:
    """Reduce ``sum c * (f ^ g)`` to a :class:`WedgeClass` over ``basis``.

    Rational constants are discarded (torsion in the wedge square of Q*).
    """
    n = len(basis)
    acc = [[Fraction(0)] * n for _ in range(n)]
    for c, f, g in expr:
        _, v = factor_over(f, basis)
        _, w = factor_over(g, basis)
        for a in range(n):
            if not v[a] and not w[a]:
                continue
            for b in range(a + 1, n):
                x = v[a] * w[b] - v[b] * w[a]
                if x:
                    acc[a][b] += c * x
                    acc[b][a] -= c * x
    for row in acc:
        for x in row:
            if x.denominator != 1:
                raise ValueError("wedge class has non-integral coefficients")
    return WedgeClass(basis, [[int(x) for x in row] for row in acc])


def are_associate(f, g) -> bool:
    """True when ``f / g`` is a nonzero rational constant."""
    q = rf(f) / rf(g)
    q = q.reduce()
    return q.is_constant()
