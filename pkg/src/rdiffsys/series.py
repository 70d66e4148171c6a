"""Truncated power-series solutions of completely solvable total systems.

The system ``dw = X1 dz + X2 d~z`` is doubled: ``z`` and ``~z`` become
independent variables and ``~w`` gets the conjugate equations.  Writing
``u = (z - z0, ~z - ~z0)``, every partial of the unknowns is prescribed, so
Taylor coefficients follow degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import Mapping

from .errors import CapabilityError, InconsistentRecurrence, InputError, NotCompletelySolvable
from .numbers import ZERO, GaussianRational, as_gaussian
from .poly import RPoly, var, w, wb, z, zb
from .systems import TotalSystem, conjugate_system, frobenius_check

__all__ = ["TruncatedSeries", "cauchy_series", "residual_check"]

Series = dict  # exponent tuple over u -> GaussianRational


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients ``c[beta] = (w1..wn, ~w1..~wn)`` for ``|beta| <= order``.

    ``beta`` runs over exponents of ``(z1-z01, .., zm-z0m, ~z1-~z01, ..)``.
    """

    m: int
    n: int
    z0: tuple
    w0: tuple
    order: int
    coefficients: dict

    def component(self, k: int) -> Series:
        """Series of unknown ``k`` (0-based, ``~w`` components after ``w``)."""
        return {b: c[k] for b, c in self.coefficients.items() if c[k]}

    def coefficient(self, beta, k: int = 0) -> GaussianRational:
        c = self.coefficients.get(tuple(beta))
        return c[k] if c is not None else ZERO

    def polynomial(self, k: int = 0) -> RPoly:
        """Unknown ``k`` as a polynomial in the shifted variables, named ``z``/``~z``."""
        vs = [z(j) for j in range(1, self.m + 1)] + [zb(j) for j in range(1, self.m + 1)]
        return RPoly({tuple((v, e) for v, e in zip(vs, b) if e): c for b, c in self.component(k).items()})

    def items(self):
        """Nonzero ``(beta, k, coefficient)`` in graded order."""
        for b in sorted(self.coefficients, key=lambda b: (sum(b), tuple(-e for e in b))):
            for k, c in enumerate(self.coefficients[b]):
                if c:
                    yield b, k, c


def _degree(b) -> int:
    return sum(b)


def _mul(a: Series, b: Series, D: int) -> Series:
    out: dict = {}
    for ea, ca in a.items():
        da = _degree(ea)
        for eb, cb in b.items():
            if da + _degree(eb) > D:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, ZERO) + ca * cb
    return {e: c for e, c in out.items() if c}


def _evaluate(p: RPoly, values: dict, D: int, dim: int) -> Series:
    """``p`` with each variable replaced by a series, truncated at degree ``D``."""
    one = {(0,) * dim: GaussianRational(1)}
    cache: dict = {}

    def power(v, e):
        key = (v, e)
        if key not in cache:
            cache[key] = one if e == 0 else _mul(power(v, e - 1), values[v], D)
        return cache[key]

    acc: dict = {}
    for mono, c in p.terms.items():
        t = {k: x * c for k, x in one.items()}
        for v, e in mono:
            t = _mul(t, power(v, e), D)
        for k, x in t.items():
            acc[k] = acc.get(k, ZERO) + x
    return {k: x for k, x in acc.items() if x}


def _point(s: TotalSystem, point: Mapping):
    pt = {var(k): as_gaussian(v) for k, v in point.items()}
    for v in pt:
        if v.conjugated:
            raise InputError("give the point through z and w only; conjugates follow")
    try:
        z0 = tuple(pt[z(j)] for j in range(1, s.m + 1))
        w0 = tuple(pt[w(k)] for k in range(1, s.n + 1))
    except KeyError as e:
        raise InputError(f"point does not assign {e.args[0]}") from None
    return z0, w0


def _rhs(s: TotalSystem):
    """``rhs[k][l]``: prescribed partial of unknown ``k`` along direction ``l``."""
    rows = []
    for xi in range(s.n):
        rows.append([s.X(xi, l) for l in range(2 * s.m)])
    for xi in range(s.n):
        rows.append([s.X(xi, s.m + j).conjugate() for j in range(s.m)] + [s.X(xi, j).conjugate() for j in range(s.m)])
    return rows


def _values(s: TotalSystem, z0, coeffs: dict, dim: int) -> dict:
    vals = {}
    for j in range(s.m):
        e = [0] * dim
        e[j] = 1
        vals[z(j + 1)] = {(0,) * dim: z0[j], tuple(e): GaussianRational(1)}
        e = [0] * dim
        e[s.m + j] = 1
        vals[zb(j + 1)] = {(0,) * dim: z0[j].conjugate(), tuple(e): GaussianRational(1)}
    for k in range(s.n):
        vals[w(k + 1)] = {b: c[k] for b, c in coeffs.items() if c[k]}
        vals[wb(k + 1)] = {b: c[s.n + k] for b, c in coeffs.items() if c[s.n + k]}
    return vals


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def cauchy_series(s: TotalSystem, point: Mapping, N: int) -> TruncatedSeries:
    """Taylor coefficients of the unique solution through ``point`` up to degree ``N``.

    The first direction ``l`` with ``beta_l >= 1`` defines each coefficient;
    every other direction is checked against it.
    """
    if s.conjugated:
        s = conjugate_system(s)
    if not frobenius_check(s).passed:
        raise NotCompletelySolvable("system fails the compatibility conditions")
    if not s.is_polynomial():
        raise CapabilityError("series solutions need polynomial coefficients")
    z0, w0 = _point(s, point)
    dim = 2 * s.m
    nk = 2 * s.n
    coeffs = {(0,) * dim: tuple(w0) + tuple(x.conjugate() for x in w0)}
    rhs = _rhs(s)
    for d in range(N):
        vals = _values(s, z0, coeffs, dim)
        ev = [[_evaluate(rhs[k][l], vals, d, dim) for l in range(dim)] for k in range(nk)]
        for beta in _compositions(d + 1, dim):
            vec = []
            for k in range(nk):
                val = None
                for l in range(dim):
                    if beta[l] == 0:
                        continue
                    src = list(beta)
                    src[l] -= 1
                    cand = ev[k][l].get(tuple(src), ZERO) / beta[l]
                    if val is None:
                        val = cand
                    elif cand != val:
                        raise InconsistentRecurrence(
                            f"coefficient {beta} of unknown {k + 1} disagrees between directions"
                        )
                vec.append(val)
            if any(vec):
                coeffs[beta] = tuple(vec)
    return TruncatedSeries(s.m, s.n, z0, w0, N, coeffs)


def residual_check(s: TotalSystem, ts: TruncatedSeries) -> int:
    """Largest ``D`` such that ``dw - X1 dz - X2 d~z`` vanishes through degree ``D``.

    The term ``u^alpha du_l`` of the residual form counts as degree
    ``|alpha| + 1``, so a wrong coefficient of degree ``k`` gives ``D = k - 1``.
    An exact vanishing is reported as ``ts.order``.
    """
    if s.conjugated:
        s = conjugate_system(s)
    dim = 2 * s.m
    N = ts.order
    rhs = _rhs(s)
    vals = _values(s, ts.z0, ts.coefficients, dim)
    first = inf
    for k in range(2 * s.n):
        comp = ts.component(k)
        for l in range(dim):
            deriv: dict = {}
            for b, c in comp.items():
                if b[l]:
                    e = list(b)
                    e[l] -= 1
                    deriv[tuple(e)] = c * b[l]
            ev = _evaluate(rhs[k][l], vals, N, dim) if rhs[k][l] else {}
            for e in set(deriv) | set(ev):
                if deriv.get(e, ZERO) != ev.get(e, ZERO):
                    first = min(first, _degree(e) + 1)
    if first == inf:
        return N
    return min(int(first) - 1, N)
