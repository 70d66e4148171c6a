"""Pfaffian forms, exactness, potentials, and the gradient-ansatz solver.

For an integral ``F`` with gradient ``g`` over the admissible variables every
operator gives one linear equation ``sum_v coef_v * g_v = H``.  ``H`` is 0
for first integrals, ``-div`` for the logarithm of a last multiplier and a
user-supplied function for partial integrals.  The solver looks for ``g``
first over the rational function field and then as bounded-degree
polynomials, with closedness ``d g_u / dv = d g_v / du`` imposed alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .darboux import DarbouxExpr
from .errors import NonElementaryTerm, NotClosed
from .integrals import (
    CylindricalityProfile,
    IntegralCandidate,
    _monomials,
    operators_of,
    verify,
)
from .linalg import rref, sparse_solve
from .numbers import ZERO
from .operators import divergence
from .poly import RPoly, RRational, RVariable, _mono_div, _mono_mul, _mono_key, as_rational, var

__all__ = [
    "PfaffForm",
    "closedness_check",
    "integrate_exact",
    "ansatz_gradient_solve",
    "AnsatzSolution",
    "PfaffianIntegral",
    "synthesize_pfaffian",
    "independence_rank",
    "log_gradient_form",
]


class PfaffForm:
    """``sum(coefficient_v * d v)`` with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        d = {}
        for v, c in items:
            v = var(v)
            c = as_rational(c)
            d[v] = d[v] + c if v in d else c
        self._terms = {v: c for v, c in sorted(d.items()) if not c.is_zero()}

    @property
    def terms(self) -> list[tuple[RVariable, RRational]]:
        return list(self._terms.items())

    def coefficient(self, v) -> RRational:
        return self._terms.get(var(v), as_rational(0))

    def variables(self) -> list[RVariable]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "PfaffForm") -> "PfaffForm":
        return PfaffForm(self.terms + other.terms)

    def scale(self, c) -> "PfaffForm":
        return PfaffForm({v: k * c for v, k in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, PfaffForm):
            return NotImplemented
        vs = set(self._terms) | set(other._terms)
        return all(self.coefficient(v) == other.coefficient(v) for v in vs)

    __hash__ = None

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for v, c in self._terms.items():
            cs = str(c)
            if not c.is_polynomial() or len(c.num.terms) > 1:
                cs = f"({cs})"
            parts.append(f"d({v})" if cs == "1" else f"{cs}*d({v})")
        return " + ".join(parts)

    def __repr__(self):
        return f"PfaffForm('{self}')"


# ---------------------------------------------------------------- exactness


@dataclass(frozen=True)
class ClosednessReport:
    closed: bool
    failing_pair: tuple | None = None

    def __bool__(self):
        return self.closed


def closedness_check(p: PfaffForm) -> ClosednessReport:
    vs = set(p.variables())
    for _, c in p.terms:
        vs.update(c.variables())
    for u, v in combinations(sorted(vs), 2):
        if p.coefficient(u).diff(v) != p.coefficient(v).diff(u):
            return ClosednessReport(False, (u, v))
    return ClosednessReport(True)


def integrate_exact(p: PfaffForm) -> DarbouxExpr:
    """A potential ``G`` with ``dG = p``, returned as the Darboux expression ``exp(G)``.

    Logarithmic terms become factors whose exponents are their coefficients;
    the rest is the exponential part.  The additive constant is dropped.
    """
    chk = closedness_check(p)
    if not chk:
        u, v = chk.failing_pair
        raise NotClosed(f"form is not closed: mixed partials in {u}, {v} differ")
    R = as_rational(0)
    logs: list[tuple[RPoly, object]] = []
    for v in p.variables():
        resid = p.coefficient(v) - _log_grad(R, logs, v)
        if resid.is_zero():
            continue
        r_add, l_add = _primitive(resid, v)
        R = R + r_add
        logs += l_add
    result = DarbouxExpr(logs, R)
    grads = result.log_gradient(p.variables())
    for v in p.variables():
        if grads[v] != p.coefficient(v):
            raise NonElementaryTerm(f"primitive in {v} does not reproduce the form")
    return result


def _log_grad(R: RRational, logs, v) -> RRational:
    acc = R.diff(v)
    for b, a in logs:
        db = b.diff(v)
        if db:
            acc = acc + RRational(db, b) * a
    return acc


def _int_poly(N: RPoly, v: RVariable) -> RPoly:
    d = {}
    for m, c in N.terms.items():
        md = dict(m)
        k = md.get(v, 0) + 1
        md[v] = k
        d[tuple(sorted(md.items()))] = c / k
    return RPoly(d)


def _primitive(r: RRational, v: RVariable):
    """Primitive of ``r`` in ``v``: ``(rational part, [(log base, coefficient)])``."""
    N, D = r.num, r.den
    if not D.diff(v):
        return RRational(_int_poly(N, v), D), []
    if D.is_monomial():
        (dm, dc), = D.terms.items()
        part = as_rational(0)
        logs = []
        for m, c in N.terms.items():
            # c*m/(dc*dm) as a Laurent monomial
            exps = dict(m)
            for u, e in dm:
                exps[u] = exps.get(u, 0) - e
            k = exps.pop(v, 0)
            coef = c / dc
            rest_num = tuple(sorted((u, e) for u, e in exps.items() if e > 0))
            rest_den = tuple(sorted((u, -e) for u, e in exps.items() if e < 0))
            rest = RRational(RPoly({rest_num: 1}), RPoly({rest_den: 1}))
            if k == -1:
                if not rest.is_constant():
                    raise NonElementaryTerm(f"log term in {v} with non-constant coefficient {rest}")
                logs.append((RPoly.variable(v), coef * rest.constant_value()))
            else:
                vk = RPoly({((v, k + 1),): 1}) if k + 1 > 0 else RRational(1, RPoly({((v, -(k + 1)),): 1}))
                part = part + rest * vk * (coef / (k + 1))
        return part, logs
    q, rem = N.divmod(D)
    part = as_rational(_int_poly(q, v)) if q else as_rational(0)
    if not rem:
        return part, []
    dD = D.diff(v)
    a = RRational(rem, dD)
    if a.is_constant():
        return part, [(D, a.constant_value())]
    raise NonElementaryTerm(f"cannot integrate ({r}) in {v}")


# ---------------------------------------------------------------- ansatz solver


@dataclass(frozen=True)
class AnsatzSolution:
    """Gradient solutions: ``particular + span(homogeneous)``.

    ``particular`` is None for homogeneous problems (role first) or when the
    inhomogeneous system has no solution at the bound.
    """

    particular: PfaffForm | None
    homogeneous: tuple
    method: str  # "rational" | "polynomial"
    inhomogeneous: bool = False

    def forms(self) -> list[PfaffForm]:
        """Candidate gradients: the particular solution, or the homogeneous basis."""
        if self.inhomogeneous:
            return [] if self.particular is None else [self.particular]
        return list(self.homogeneous)


def _rhs(ops, role: str, H):
    if role == "first":
        return [as_rational(0)] * len(ops)
    if role == "multiplier":
        return [-as_rational(divergence(op)) for op in ops]
    if role == "partial":
        if H is None or len(H) != len(ops):
            raise ValueError("role partial needs one right-hand side H per operator")
        return [as_rational(h) for h in H]
    raise ValueError(f"unknown role {role!r}")


def ansatz_gradient_solve(
    system,
    profile: CylindricalityProfile,
    role: str,
    deg_bound: int = 2,
    H: Sequence | None = None,
) -> AnsatzSolution:
    ops = operators_of(system)
    allowed = profile.variables
    rhs = _rhs(ops, role, H)
    coefs = [[as_rational(op.coefficient(v)) for v in allowed] for op in ops]

    # unique solution over the rational-function field
    if role != "first":
        aug = [row + [h] for row, h in zip(coefs, rhs)]
        R, piv = rref(aug)
        k = len(allowed)
        if k not in piv and piv == list(range(k)):
            g = PfaffForm({v: R[i][k] for i, v in enumerate(allowed)})
            if closedness_check(g):
                return AnsatzSolution(g, (), "rational", True)

    monos = sorted(_monomials(allowed, deg_bound), key=_mono_key)
    cols = [(v, m) for v in allowed for m in monos]
    col_of = {c: i for i, c in enumerate(cols)}
    rows: list[dict] = []
    rhs_vals: list = []

    for row, h in zip(coefs, rhs):
        den = RPoly(1)
        for c in row + [h]:
            if not c.den.is_one() and not c.den.divides(den):
                den = den * c.den
        polys = [(c * den).to_poly() for c in row]
        hp = (h * den).to_poly()
        eqs: dict = {}
        for (v, m), idx in col_of.items():
            pv = polys[allowed.index(v)]
            for t, cf in pv.terms.items():
                key = _mono_mul(t, m)
                eqs.setdefault(key, {})
                eqs[key][idx] = eqs[key].get(idx, ZERO) + cf
        for key in sorted(set(eqs) | set(hp.terms), key=_mono_key):
            rows.append(eqs.get(key, {}))
            rhs_vals.append(hp.coefficient(key))

    for u, v in combinations(allowed, 2):
        eqs = {}
        for (x, m), idx in col_of.items():
            if x == u:
                dv, e = _diff_mono(m, v)
                if e:
                    eqs.setdefault(dv, {})[idx] = eqs.get(dv, {}).get(idx, ZERO) + e
            elif x == v:
                du, e = _diff_mono(m, u)
                if e:
                    eqs.setdefault(du, {})[idx] = eqs.get(du, {}).get(idx, ZERO) - e
        for key in sorted(eqs, key=_mono_key):
            rows.append(eqs[key])
            rhs_vals.append(ZERO)

    part, basis = sparse_solve(rows, rhs_vals, len(cols))
    homogeneous = tuple(_form_from(vec, cols) for vec in basis)
    if role == "first":
        return AnsatzSolution(None, homogeneous, "polynomial")
    particular = None if part is None else _form_from(part, cols)
    return AnsatzSolution(particular, homogeneous, "polynomial", True)


def _diff_mono(m, v):
    e = dict(m).get(v, 0)
    if not e:
        return (), 0
    return _mono_div(m, ((v, 1),)), e


def _form_from(vec: dict, cols) -> PfaffForm:
    acc: dict = {}
    for idx, c in vec.items():
        v, m = cols[idx]
        acc[v] = acc.get(v, RPoly()) + RPoly({m: c})
    return PfaffForm(acc)


@dataclass(frozen=True)
class PfaffianIntegral:
    form: PfaffForm
    potential: DarbouxExpr  # exp(G) with dG = form
    candidate: IntegralCandidate
    verification: object

    @property
    def ok(self) -> bool:
        return bool(self.verification)


def synthesize_pfaffian(
    system,
    profile: CylindricalityProfile,
    role: str,
    deg_bound: int = 2,
    H: Sequence | None = None,
) -> list[PfaffianIntegral]:
    """Solve, integrate and re-verify; only verified integrals are returned."""
    sol = ansatz_gradient_solve(system, profile, role, deg_bound, H)
    ops = operators_of(system)
    out = []
    for form in sol.forms():
        if form.is_zero():
            continue
        try:
            pot = integrate_exact(form)
        except (NotClosed, NonElementaryTerm):
            continue
        if role == "partial":
            if pot.factors or not pot.exp_part.is_polynomial():
                continue
            expr = DarbouxExpr.from_poly(pot.exp_part.num)
        else:
            expr = pot
        cand = IntegralCandidate(expr, role, profile)
        res = verify(ops, cand)
        if res:
            out.append(PfaffianIntegral(form, pot, cand, res))
    return out


# ---------------------------------------------------------------- independence


def log_gradient_form(d: DarbouxExpr, variables: Iterable | None = None) -> PfaffForm:
    vs = d.variables() if variables is None else [var(v) for v in variables]
    return PfaffForm(d.log_gradient(vs))


def independence_rank(grads: Sequence[PfaffForm], variables: Iterable | None = None) -> int:
    """Generic rank of the gradient rows over the rational-function field."""
    if variables is None:
        vs = sorted({v for g in grads for v in g.variables()})
    else:
        vs = [var(v) for v in variables]
    if not grads or not vs:
        return 0
    M = [[g.coefficient(v) for v in vs] for g in grads]
    return len(rref(M)[1])

