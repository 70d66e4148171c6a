"""Polynomials and rational functions in doubled complex variables.

A complex variable ``z`` and its conjugate ``~z`` are independent symbols, so
Wirtinger derivatives are ordinary formal partials.  Polynomials are sparse
maps from monomials to :class:`GaussianRational` coefficients; a monomial is a
tuple of ``(variable, exponent)`` pairs sorted by variable.

Variable order is ``z1 < z2 < ... < ~z1 < ... < w1 < ... < ~w1 < ...`` and the
monomial order is graded lexicographic over it.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, NamedTuple

from .errors import DivisionError, UnassignedVariable, ZeroDenominator
from .numbers import ONE, ZERO, GaussianRational, as_gaussian

__all__ = [
    "RVariable",
    "RPoly",
    "RRational",
    "z",
    "zb",
    "w",
    "wb",
    "var",
    "poly_arith",
    "conjugate",
    "wirt_diff",
    "rational_normalize",
    "eval_at",
    "as_rational",
]


class RVariable(NamedTuple):
    """A doubled variable.

    Field order makes the natural tuple ordering the package variable order.
    """

    dependent: bool
    conjugated: bool
    index: int

    @property
    def kind(self) -> str:
        return "w" if self.dependent else "z"

    @property
    def partner(self) -> "RVariable":
        return RVariable(self.dependent, not self.conjugated, self.index)

    @property
    def base(self) -> "RVariable":
        return RVariable(self.dependent, False, self.index)

    def __str__(self):
        return ("~" if self.conjugated else "") + self.kind + str(self.index)

    def __repr__(self):
        return f"var({str(self)!r})"

    @classmethod
    def parse(cls, name: str) -> "RVariable":
        m = _VAR_RE.fullmatch(name.strip())
        if not m:
            raise ValueError(f"not a variable name: {name!r}")
        idx = int(m.group(3)) if m.group(3) else 1
        if idx < 1:
            raise ValueError(f"variable index must be positive: {name!r}")
        return cls(m.group(2) == "w", bool(m.group(1)), idx)


_VAR_RE = re.compile(r"(~?)([zw])(\d*)")


def z(k: int = 1) -> RVariable:
    return RVariable(False, False, k)


def zb(k: int = 1) -> RVariable:
    return RVariable(False, True, k)


def w(k: int = 1) -> RVariable:
    return RVariable(True, False, k)


def wb(k: int = 1) -> RVariable:
    return RVariable(True, True, k)


def var(name: str | RVariable) -> RVariable:
    return name if isinstance(name, RVariable) else RVariable.parse(name)


# ---------------------------------------------------------------- monomials

Monomial = tuple  # tuple[tuple[RVariable, int], ...]

_MAX_EXP = 2**63 - 1


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) + e
        if e2 > _MAX_EXP:
            raise OverflowError("exponent exceeds machine-word range")
        d[v] = e2
    return tuple(sorted(d.items()))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b when b divides a, else None."""
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) - e
        if e2 < 0:
            return None
        if e2 == 0:
            del d[v]
        else:
            d[v] = e2
    return tuple(sorted(d.items()))


def _mono_gcd(monos: Iterable[Monomial]) -> Monomial:
    it = iter(monos)
    try:
        g = dict(next(it))
    except StopIteration:
        return ()
    for m in it:
        if not g:
            break
        md = dict(m)
        g = {v: min(e, md[v]) for v, e in g.items() if v in md}
    return tuple(sorted(g.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    """Graded lex key; a larger key is a larger monomial."""
    return (
        _mono_degree(m),
        tuple((-v.dependent, -v.conjugated, -v.index, e) for v, e in m),
    )


def _mono_str(m: Monomial) -> str:
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


def _coef_str(c: GaussianRational) -> str:
    s = str(c)
    if c.is_real() or c.re == 0:
        return s
    return f"({s})"


# ---------------------------------------------------------------- polynomials


class RPoly:
    """Sparse polynomial over Q(i) in doubled variables. Immutable."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            self._terms = {}
        elif isinstance(terms, RPoly):
            self._terms = terms._terms
        elif isinstance(terms, Mapping):
            d = {}
            for m, c in terms.items():
                c = as_gaussian(c)
                if c:
                    m = tuple(sorted((v, e) for v, e in m if e))
                    d[m] = d.get(m, ZERO) + c
                    if not d[m]:
                        del d[m]
            self._terms = d
        else:
            c = as_gaussian(terms)
            self._terms = {(): c} if c else {}
        self._hash = None

    @classmethod
    def _wrap(cls, d: dict) -> "RPoly":
        p = object.__new__(cls)
        p._terms = d
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "RPoly":
        return cls(c)

    @classmethod
    def variable(cls, v: RVariable | str) -> "RPoly":
        return cls._wrap({((var(v), 1),): ONE})

    @classmethod
    def monomial(cls, m: Monomial, c=1) -> "RPoly":
        return cls({m: c})

    # ----- inspection
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """(monomial, coefficient) pairs, largest monomial first."""
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]), reverse=True)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get(()) == ONE

    def constant_term(self) -> GaussianRational:
        return self._terms.get((), ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, v: RVariable) -> int:
        return max((dict(m).get(v, 0) for m in self._terms), default=-1)

    def variables(self) -> list[RVariable]:
        return sorted({v for m in self._terms for v, _ in m})

    def leading_monomial(self) -> Monomial:
        return max(self._terms, key=_mono_key)

    def leading_coefficient(self) -> GaussianRational:
        if not self._terms:
            return ZERO
        return self._terms[self.leading_monomial()]

    def coefficient(self, m: Monomial) -> GaussianRational:
        return self._terms.get(tuple(sorted(m)), ZERO)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def collect(self, v: RVariable) -> dict[int, "RPoly"]:
        """Split into powers of ``v``: ``{k: coefficient polynomial of v^k}``."""
        out: dict[int, dict] = {}
        for m, c in self._terms.items():
            md = dict(m)
            k = md.pop(v, 0)
            out.setdefault(k, {})[tuple(sorted(md.items()))] = c
        return {k: RPoly._wrap(d) for k, d in out.items()}

    # ----- ring operations
    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        d = dict(self._terms)
        for m, c in o._terms.items():
            s = d.get(m)
            if s is None:
                d[m] = c
            else:
                s = s + c
                if s:
                    d[m] = s
                else:
                    del d[m]
        return RPoly._wrap(d)

    __radd__ = __add__

    def __neg__(self):
        return RPoly._wrap({m: -c for m, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return RPoly._wrap({})
        if o.is_constant():
            c = o._terms[()]
            return RPoly._wrap({m: a * c for m, a in self._terms.items()})
        if self.is_constant():
            return o * self
        d: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = _mono_mul(m1, m2)
                s = d.get(m)
                d[m] = c1 * c2 if s is None else s + c1 * c2
        return RPoly._wrap({m: c for m, c in d.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RRational(RPoly(1), self) ** (-k)
        result = RPoly(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        c = as_gaussian(other, strict=False)
        if c is not None:
            inv = c.inverse()
            return RPoly._wrap({m: a * inv for m, a in self._terms.items()})
        if isinstance(other, (RPoly, RRational)):
            return RRational(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        c = as_gaussian(other, strict=False)
        if c is None:
            return NotImplemented
        return RRational(RPoly(c), self)

    def scale(self, c) -> "RPoly":
        return self * as_gaussian(c)

    def monic(self) -> "RPoly":
        lc = self.leading_coefficient()
        return self if not lc or lc == ONE else self / lc

    def div_monomial(self, m: Monomial) -> "RPoly":
        d = {}
        for t, c in self._terms.items():
            q = _mono_div(t, m)
            if q is None:
                raise DivisionError("monomial does not divide", None)
            d[q] = c
        return RPoly._wrap(d)

    def divmod(self, b: "RPoly") -> tuple["RPoly", "RPoly"]:
        """Multivariate division by a single divisor in graded lex order.

        The remainder is zero exactly when ``b`` divides ``self``, because a
        single polynomial is a Groebner basis of the ideal it generates.
        """
        if not b._terms:
            raise ZeroDenominator("division by the zero polynomial")
        lm_b = b.leading_monomial()
        inv_lc = b._terms[lm_b].inverse()
        if b.is_constant():
            return self * inv_lc, RPoly._wrap({})
        p = dict(self._terms)
        q: dict = {}
        r: dict = {}
        b_items = list(b._terms.items())
        while p:
            m = max(p, key=_mono_key)
            c = p.pop(m)
            qm = _mono_div(m, lm_b)
            if qm is None:
                r[m] = c
                continue
            f = c * inv_lc
            q[qm] = q.get(qm, ZERO) + f
            for bm, bc in b_items:
                if bm == lm_b:
                    continue
                t = _mono_mul(qm, bm)
                s = p.get(t, ZERO) - f * bc
                if s:
                    p[t] = s
                else:
                    p.pop(t, None)
        return RPoly._wrap({m: c for m, c in q.items() if c}), RPoly._wrap(r)

    def exact_div(self, b: "RPoly") -> "RPoly":
        q, r = self.divmod(b)
        if r:
            raise DivisionError(f"({b}) does not divide ({self})", r)
        return q

    def divides(self, other: "RPoly") -> bool:
        return not other.divmod(self)[1]

    # ----- calculus and conjugation
    def diff(self, v: RVariable | str) -> "RPoly":
        """Formal partial derivative; ``v`` and its partner are independent."""
        v = var(v)
        d: dict = {}
        for m, c in self._terms.items():
            md = dict(m)
            e = md.get(v, 0)
            if not e:
                continue
            if e == 1:
                del md[v]
            else:
                md[v] = e - 1
            d[tuple(sorted(md.items()))] = c * e
        return RPoly._wrap(d)

    def conjugate(self) -> "RPoly":
        d = {}
        for m, c in self._terms.items():
            d[tuple(sorted((v.partner, e) for v, e in m))] = c.conjugate()
        return RPoly._wrap(d)

    def subs(self, mapping: Mapping) -> "RPoly":
        """Substitute polynomials (or scalars) for variables."""
        mp = {var(k): _as_poly(v) for k, v in mapping.items()}
        out = RPoly._wrap({})
        cache: dict = {}
        for m, c in self._terms.items():
            t = RPoly._wrap({(): c})
            rest = []
            for v, e in m:
                if v in mp:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = mp[v] ** e
                    t = t * cache[key]
                else:
                    rest.append((v, e))
            if rest:
                t = t * RPoly._wrap({tuple(rest): ONE})
            out = out + t
        return out

    def eval_at(self, point: Mapping, mode: str = "physical") -> GaussianRational:
        values = _point_values(point, mode)
        total = ZERO
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                try:
                    x = values[v]
                except KeyError:
                    raise UnassignedVariable(f"no value for {v}") from None
                t = t * x**e
            total = total + t
        return total

    # ----- equality and rendering
    def __eq__(self, other):
        if isinstance(other, RRational):
            return other == self
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.items():
            if not m:
                s = str(c)
            elif c == ONE:
                s = _mono_str(m)
            elif c == -ONE:
                s = "-" + _mono_str(m)
            else:
                s = f"{_coef_str(c)}*{_mono_str(m)}"
            if parts:
                parts.append(" - " + s[1:] if s.startswith("-") else " + " + s)
            else:
                parts.append(s)
        return "".join(parts)

    def __repr__(self):
        return f"RPoly('{self}')"


def _as_poly(x) -> RPoly | None:
    if isinstance(x, RPoly):
        return x
    if isinstance(x, RVariable):
        return RPoly.variable(x)
    c = as_gaussian(x, strict=False)
    if c is None:
        return None
    return RPoly._wrap({(): c} if c else {})


def _point_values(point: Mapping, mode: str) -> dict:
    values = {}
    if mode == "physical":
        for k, x in point.items():
            v = var(k)
            if v.conjugated:
                raise ValueError("physical mode assigns only unconjugated variables")
            x = as_gaussian(x)
            values[v] = x
            values[v.partner] = x.conjugate()
    elif mode == "formal":
        for k, x in point.items():
            values[var(k)] = as_gaussian(x)
    else:
        raise ValueError(f"unknown evaluation mode {mode!r}")
    return values


# ---------------------------------------------------------------- rational functions


class RRational:
    """Quotient of two RPolys with a monic denominator.

    Reduction is best effort: monomial content, exact divisibility either
    way, and trial division by supplied ``hints`` (known factors).  Equality
    is decided by cross-multiplication, so missed cancellations never change
    a comparison.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, hints: Iterable[RPoly] = ()):
        n = _as_poly(num)
        d = _as_poly(den)
        if n is None or d is None:
            raise TypeError("RRational needs polynomial numerator and denominator")
        self.num, self.den = _normalize(n, d, hints)

    @classmethod
    def _wrap(cls, num: RPoly, den: RPoly) -> "RRational":
        r = object.__new__(cls)
        r.num = num
        r.den = den
        return r

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def to_poly(self) -> RPoly:
        if not self.den.is_one():
            raise DivisionError(f"{self} is not a polynomial", None)
        return self.num

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_term() / self.den.constant_term()

    def variables(self) -> list[RVariable]:
        return sorted(set(self.num.variables()) | set(self.den.variables()))

    # ----- field operations
    def __add__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        a, b, c, d = self.num, self.den, o.num, o.den
        if not a:
            return o
        if not c:
            return self
        if b == d:
            return RRational(a + c, b, hints=(b,))
        if b.is_one():
            return RRational._wrap(a * d + c, d)
        if d.is_one():
            return RRational._wrap(a + c * b, b)
        q, r = d.divmod(b)
        if not r:
            return RRational(a * q + c, d, hints=(b, q))
        q, r = b.divmod(d)
        if not r:
            return RRational(a + c * q, b, hints=(d, q))
        return RRational(a * d + c * b, b * d, hints=(b, d))

    __radd__ = __add__

    def __neg__(self):
        return RRational._wrap(-self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return RRational._wrap(RPoly(), RPoly(1))
        if self.den.is_one() and o.den.is_one():
            return RRational._wrap(self.num * o.num, self.den)
        hints = [h for h in (self.den, o.den) if not h.is_one()]
        return RRational(self.num * o.num, self.den * o.den, hints=hints)

    __rmul__ = __mul__

    def inverse(self) -> "RRational":
        if not self.num:
            raise ZeroDenominator("inverse of zero")
        return RRational(self.den, self.num)

    def __truediv__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDenominator("division by zero rational function")
        hints = [h for h in (self.den, o.num) if not h.is_constant()]
        return RRational(self.num * o.den, self.den * o.num, hints=hints)

    def __rtruediv__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return RRational._wrap(self.num**k, self.den**k)

    # ----- calculus and conjugation
    def diff(self, v: RVariable | str) -> "RRational":
        v = var(v)
        dn = self.num.diff(v)
        dd = self.den.diff(v)
        if not dd:
            return RRational(dn, self.den)
        return RRational(dn * self.den - self.num * dd, self.den * self.den, hints=(self.den,))

    def conjugate(self) -> "RRational":
        return RRational(self.num.conjugate(), self.den.conjugate())

    def subs(self, mapping: Mapping) -> "RRational":
        return RRational(self.num.subs(mapping)) / RRational(self.den.subs(mapping))

    def eval_at(self, point: Mapping, mode: str = "physical") -> GaussianRational:
        d = self.den.eval_at(point, mode)
        if not d:
            raise ZeroDenominator("denominator vanishes at the point")
        return self.num.eval_at(point, mode) / d

    # ----- equality and rendering
    def __eq__(self, other):
        o = as_rational(other, strict=False)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        n = str(self.num)
        if len(self.num._terms) > 1 or any(ch in "+-" for ch in n[1:]):
            n = f"({n})"
        d = str(self.den)
        terms = self.den._terms
        simple = len(terms) == 1 and len(next(iter(terms))) == 1 and next(iter(terms.values())) == ONE
        return f"{n}/{d}" if simple else f"{n}/({d})"

    def __repr__(self):
        return f"RRational('{self}')"


def as_rational(x, strict: bool = True) -> RRational | None:
    if isinstance(x, RRational):
        return x
    p = _as_poly(x)
    if p is None:
        if strict:
            raise TypeError(f"cannot convert {type(x).__name__} to RRational")
        return None
    return RRational._wrap(p, RPoly(1))


def _normalize(num: RPoly, den: RPoly, hints) -> tuple[RPoly, RPoly]:
    if not den:
        raise ZeroDenominator("zero denominator")
    one = RPoly(1)
    if not num:
        return RPoly(), one
    if den.is_constant():
        return num / den.constant_term(), one
    g = _mono_gcd(list(num._terms) + list(den._terms))
    if g:
        num = num.div_monomial(g)
        den = den.div_monomial(g)
        if den.is_constant():
            return num / den.constant_term(), one
    q, r = num.divmod(den)
    if not r:
        return q, one
    if not num.is_constant() and num.degree() <= den.degree():
        q, r = den.divmod(num)
        if not r:
            lc = q.leading_coefficient()
            return RPoly(1) / lc, q / lc
    for h in hints:
        h = _as_poly(h)
        if h is None or h.is_constant():
            continue
        while True:
            q1, r1 = num.divmod(h)
            if r1:
                break
            q2, r2 = den.divmod(h)
            if r2:
                break
            num, den = q1, q2
    if den.is_constant():
        return num / den.constant_term(), one
    lc = den.leading_coefficient()
    if lc != ONE:
        num, den = num / lc, den / lc
    return num, den


# ---------------------------------------------------------------- functional API


def poly_arith(a: RPoly, b: RPoly, op: str) -> RPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "exact_div":
        return a.exact_div(b)
    raise ValueError(f"unknown polynomial operation {op!r}")


def conjugate(p):
    if isinstance(p, (RPoly, RRational)):
        return p.conjugate()
    return as_gaussian(p).conjugate()


def wirt_diff(p, v):
    if isinstance(p, (RPoly, RRational)):
        return p.diff(v)
    return RPoly()


def rational_normalize(r: RRational) -> RRational:
    return RRational(r.num, r.den)


def eval_at(p, point: Mapping, mode: str = "physical") -> GaussianRational:
    if isinstance(p, (RPoly, RRational)):
        return p.eval_at(point, mode)
    return as_gaussian(p)
