"""Verification of first integrals, partial integrals and last multipliers.

Also the Wronskian tests: along an integral manifold the coefficient tuples
of each operator restricted to the admissible variables must be linearly
dependent, so their Wronskians in every other variable vanish there.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .darboux import DarbouxExpr
from .errors import ScopeError
from .linalg import sparse_solve
from .operators import DiffOperator, divergence, lie_derivative, lie_log
from .poly import RPoly, RRational, RVariable, as_rational, var, w, wb, z, zb
from .systems import PdeSystem, TotalSystem, build_operators, gamma

__all__ = [
    "CylindricalityProfile",
    "IntegralCandidate",
    "VerificationResult",
    "PartialIntegralResult",
    "operators_of",
    "variables_of",
    "verify_first_integral",
    "verify_partial_integral",
    "verify_last_multiplier",
    "verify",
    "ideal_cofactors",
    "wronskian",
    "necessary_condition_report",
]

ROLES = ("first", "partial", "multiplier")


@dataclass(frozen=True)
class CylindricalityProfile:
    """The set of variables a candidate integral may depend on."""

    allowed: frozenset

    def __init__(self, allowed: Iterable):
        object.__setattr__(self, "allowed", frozenset(var(v) for v in allowed))

    @classmethod
    def parse(cls, text: str) -> "CylindricalityProfile":
        names = [t for t in text.replace(",", " ").split() if t]
        return cls(names)

    @property
    def variables(self) -> list[RVariable]:
        return sorted(self.allowed)

    def __contains__(self, v):
        return var(v) in self.allowed

    def __str__(self):
        return ", ".join(str(v) for v in self.variables)


def _as_expr(e) -> DarbouxExpr:
    if isinstance(e, DarbouxExpr):
        return e
    if isinstance(e, RPoly):
        return DarbouxExpr.from_poly(e)
    return DarbouxExpr.from_rational(as_rational(e))


@dataclass(frozen=True)
class IntegralCandidate:
    expr: DarbouxExpr
    role: str
    profile: CylindricalityProfile | None = None

    def __post_init__(self):
        object.__setattr__(self, "expr", _as_expr(self.expr))
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if self.profile is not None:
            stray = [v for v in self.expr.variables() if v not in self.profile.allowed]
            if stray:
                raise ScopeError(
                    "candidate uses variables outside its profile: " + ", ".join(map(str, stray))
                )
        if self.role == "partial" and self.expr.single_factor() is None:
            raise ValueError("a partial integral must be a single polynomial factor")

    @property
    def polynomial(self) -> RPoly:
        p = self.expr.single_factor()
        if p is None:
            raise ValueError("candidate is not a single polynomial")
        return p


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    residuals: tuple

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class PartialIntegralResult:
    ok: bool
    cofactors: tuple  # per operator (alpha, beta) or None
    residuals: tuple
    deg_bound: int | None = None

    def __bool__(self):
        return self.ok


def operators_of(system) -> list[DiffOperator]:
    if isinstance(system, TotalSystem):
        return build_operators(system)
    if isinstance(system, PdeSystem):
        return list(system.ops)
    if hasattr(system, "matrices"):
        from .systems import operators_from_matrices

        return list(operators_from_matrices(system).ops)
    return list(system)


def variables_of(system) -> list[RVariable]:
    """The full doubled variable set of a system, in variable order."""
    if isinstance(system, TotalSystem):
        zs = [z(k) for k in range(1, system.m + 1)] + [zb(k) for k in range(1, system.m + 1)]
        ws = [w(k) for k in range(1, system.n + 1)] + [wb(k) for k in range(1, system.n + 1)]
        return zs + ws
    if hasattr(system, "n"):
        return gamma(system.n)
    vs = set()
    for op in system:
        vs.update(op.variables())
    return sorted(vs)


# ---------------------------------------------------------------- verification


def verify_first_integral(ops: Sequence[DiffOperator], c: IntegralCandidate) -> VerificationResult:
    res = tuple(lie_log(op, c.expr) for op in ops)
    return VerificationResult(all(r.is_zero() for r in res), res)


def verify_last_multiplier(ops: Sequence[DiffOperator], c: IntegralCandidate) -> VerificationResult:
    res = tuple(lie_log(op, c.expr) + divergence(op) for op in ops)
    return VerificationResult(all(r.is_zero() for r in res), res)


def verify_partial_integral(
    ops: Sequence[DiffOperator], c: IntegralCandidate, deg_bound: int | None = None
) -> PartialIntegralResult:
    """Find cofactors with ``op(f) = alpha*f + beta*conj(f)`` for every operator.

    ``beta = 0`` is tried first by exact division; otherwise ``alpha`` and
    ``beta`` are sought as polynomials of total degree at most ``deg_bound``
    (default ``deg(op f) - deg(f) + 1``).  Rational operator coefficients give
    cofactors over the same denominator.
    """
    f = c.polynomial
    cofs = []
    residuals = []
    for op in ops:
        lf = as_rational(lie_derivative(op, f))
        found = ideal_cofactors(lf.num, f, deg_bound)
        if found is None:
            cofs.append(None)
            residuals.append(lf)
            continue
        a, b = found
        if not lf.den.is_one():
            a, b = _simplify(RRational(a, lf.den)), _simplify(RRational(b, lf.den))
        residual = as_rational(lf) - (as_rational(a) * f + as_rational(b) * f.conjugate())
        assert residual.is_zero(), "cofactor identity failed to re-expand"
        cofs.append((a, b))
        residuals.append(residual)
    ok = all(x is not None for x in cofs)
    return PartialIntegralResult(ok, tuple(cofs), tuple(residuals), deg_bound)


def _simplify(r: RRational):
    return r.num if r.is_polynomial() else r


def ideal_cofactors(g: RPoly, f: RPoly, deg_bound: int | None = None):
    """Polynomials ``(a, b)`` with ``g = a*f + b*conj(f)``, or None.

    Exact division by ``f`` is tried first so that results stay canonical;
    the linear ansatz over monomials of degree ``<= deg_bound`` runs only
    when that fails.
    """
    if not g:
        return RPoly(), RPoly()
    if not f:
        return None
    q, r = g.divmod(f)
    if not r:
        return q, RPoly()
    fb = f.conjugate()
    if deg_bound is None:
        deg_bound = max(g.degree() - f.degree(), 0) + 1
    if deg_bound < 0:
        return None
    vs = sorted(set(g.variables()) | set(f.variables()) | set(fb.variables()))
    monos = _monomials(vs, deg_bound)
    ncols = 2 * len(monos)
    eqs: dict = {}
    for which, base in ((0, f), (1, fb)):
        for i, mono in enumerate(monos):
            col = which * len(monos) + i
            for t, cf in (base * RPoly.monomial(mono)).terms.items():
                eqs.setdefault(t, {})
                eqs[t][col] = eqs[t].get(col, 0) + cf
    keys = sorted(set(eqs) | set(g.terms), key=str)
    rows = [eqs.get(t, {}) for t in keys]
    rhs = [g.coefficient(t) for t in keys]
    sol, _ = sparse_solve(rows, rhs, ncols)
    if sol is None:
        return None
    a = RPoly({monos[i]: sol[i] for i in range(len(monos)) if i in sol})
    b = RPoly({monos[i]: sol[len(monos) + i] for i in range(len(monos)) if len(monos) + i in sol})
    return a, b


def _monomials(vs: Sequence[RVariable], deg: int) -> list[tuple]:
    out = [()]
    for d in range(1, deg + 1):
        for combo in combinations_with_replacement(vs, d):
            counts: dict = {}
            for v in combo:
                counts[v] = counts.get(v, 0) + 1
            out.append(tuple(sorted(counts.items())))
    return out


def verify(ops: Sequence[DiffOperator], c: IntegralCandidate, deg_bound: int | None = None):
    """Dispatch on the candidate's role."""
    if c.role == "first":
        return verify_first_integral(ops, c)
    if c.role == "multiplier":
        return verify_last_multiplier(ops, c)
    return verify_partial_integral(ops, c, deg_bound)


# ---------------------------------------------------------------- Wronskians


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = RPoly()
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * _det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def wronskian(fs: Sequence, v) -> RRational:
    """Determinant with row ``r`` holding the r-th partials in ``v``."""
    v = var(v)
    row = [f if isinstance(f, (RPoly, RRational)) else RPoly(f) for f in fs]
    if not row:
        return as_rational(1)
    M = [row]
    for _ in range(len(row) - 1):
        row = [f.diff(v) for f in row]
        M.append(row)
    return as_rational(_det(M))


@dataclass(frozen=True)
class WronskianRow:
    operator: int  # 1-based
    variable: RVariable
    functions: tuple
    wronskian: RRational
    tag: str  # zero | ideal | obstructed


@dataclass(frozen=True)
class NecessaryConditionReport:
    role: str
    profile: CylindricalityProfile
    tuples: tuple  # per operator, the function tuple used
    rows: tuple

    @property
    def consistent(self) -> bool:
        return all(r.tag != "obstructed" for r in self.rows)

    def row(self, operator: int, variable) -> WronskianRow:
        v = var(variable)
        for r in self.rows:
            if r.operator == operator and r.variable == v:
                return r
        raise KeyError((operator, v))


def condition_tuple(system, op_index: int, op: DiffOperator, allowed: Sequence[RVariable], role: str):
    """Coefficient tuple of one operator restricted to the admissible variables."""
    funcs = []
    if isinstance(system, TotalSystem):
        own = z(op_index + 1) if op_index < system.m else zb(op_index - system.m + 1)
        if own in allowed:
            funcs.append(RPoly(1))
        funcs += [op.coefficient(v) for v in allowed if v.dependent]
    else:
        funcs += [op.coefficient(v) for v in allowed]
    if role == "multiplier":
        funcs.append(divergence(op))
    return tuple(funcs)


def necessary_condition_report(
    system, profile: CylindricalityProfile, role: str, f: RPoly | None = None, deg_bound: int | None = None
) -> NecessaryConditionReport:
    if role not in ROLES:
        raise ValueError(f"unknown role {role!r}")
    if role == "partial" and f is None:
        raise ValueError("role partial needs the candidate polynomial f")
    ops = operators_of(system)
    allowed = profile.variables
    universe = variables_of(system)
    excluded = [v for v in universe if v not in profile.allowed]
    tuples = []
    rows = []
    for l, op in enumerate(ops):
        funcs = condition_tuple(system, l, op, allowed, role)
        tuples.append(funcs)
        for v in excluded:
            W = wronskian(funcs, v)
            if W.is_zero():
                tag = "zero"
            elif role == "partial" and ideal_cofactors(W.num, f, deg_bound) is not None:
                tag = "ideal"
            else:
                tag = "obstructed"
            rows.append(WronskianRow(l + 1, v, funcs, W, tag))
    return NecessaryConditionReport(role, profile, tuple(tuples), tuple(rows))

