"""Total differential systems, first-order PDE systems and their structural checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .errors import NotRLinear, ScopeError
from .linalg import rank
from .numbers import ZERO, as_gaussian
from .operators import DiffOperator, lie_derivative, poisson_bracket
from .poly import RPoly, RRational, RVariable, as_rational, var, w, wb, z, zb

__all__ = [
    "TotalSystem",
    "PdeSystem",
    "RLinearPdeSystem",
    "FrobeniusReport",
    "build_operators",
    "conjugate_system",
    "frobenius_check",
    "brackets_null",
    "jacobian_check",
    "extract_matrices",
    "operators_from_matrices",
    "gamma",
    "nondegeneracy_rank",
    "r_regularity_at",
]


def _entry(x):
    if isinstance(x, RRational):
        return x.num if x.is_polynomial() else x
    if isinstance(x, RPoly):
        return x
    return RPoly(as_gaussian(x))


def _check_scope(expr, m: int, n: int, where: str):
    for v in expr.variables():
        limit = n if v.dependent else m
        if v.index > limit:
            raise ScopeError(f"{where}: variable {v} outside declared range")


@dataclass(frozen=True)
class TotalSystem:
    """``dw = X1 dz + X2 d~z`` with ``X1[xi][j]``, ``X2[xi][j]`` (0-based).

    ``conjugated`` marks the conjugate system, whose unknowns are ``~w``.
    """

    m: int
    n: int
    X1: tuple
    X2: tuple
    conjugated: bool = False

    def __post_init__(self):
        X1 = tuple(tuple(_entry(x) for x in row) for row in self.X1)
        X2 = tuple(tuple(_entry(x) for x in row) for row in self.X2)
        for X in (X1, X2):
            if len(X) != self.n or any(len(row) != self.m for row in X):
                raise ValueError("coefficient matrices must be n x m")
        for name, X in (("X1", X1), ("X2", X2)):
            for xi, row in enumerate(X):
                for j, e in enumerate(row):
                    _check_scope(e, self.m, self.n, f"{name}[{xi + 1}][{j + 1}]")
        object.__setattr__(self, "X1", X1)
        object.__setattr__(self, "X2", X2)

    def X(self, xi: int, col: int):
        """Column ``col`` in ``0..2m-1``: X1 columns first, then X2."""
        return self.X1[xi][col] if col < self.m else self.X2[xi][col - self.m]

    def is_polynomial(self) -> bool:
        return all(isinstance(e, RPoly) for X in (self.X1, self.X2) for row in X for e in row)


@dataclass(frozen=True)
class PdeSystem:
    """Operators ``A_j`` acting on functions of ``z1..zn`` and ``~z1..~zn``."""

    n: int
    ops: tuple

    def __post_init__(self):
        ops = tuple(op if isinstance(op, DiffOperator) else DiffOperator(op) for op in self.ops)
        for j, op in enumerate(ops):
            for v, c in op.terms:
                if v.dependent or v.index > self.n:
                    raise ScopeError(f"operator {j + 1}: partial in {v} outside z1..z{self.n}")
                for u in c.variables():
                    if u.dependent or u.index > self.n:
                        raise ScopeError(f"operator {j + 1}: coefficient uses {u}")
        object.__setattr__(self, "ops", ops)

    @property
    def m(self) -> int:
        return len(self.ops)


@dataclass(frozen=True)
class RLinearPdeSystem:
    """Matrices of an R-linear PDE system.

    ``A_j[l][k]`` is the coefficient of ``gamma_l`` in the coefficient of the
    partial in ``gamma_k``, where ``gamma = (z1..zn, ~z1..~zn)``.  With this
    layout ``A_j nu = lam nu`` says exactly that ``nu . gamma`` is a partial
    integral with cofactor ``lam``.
    """

    n: int
    matrices: tuple = field(default=())

    def __post_init__(self):
        mats = tuple(tuple(tuple(as_gaussian(x) for x in row) for row in A) for A in self.matrices)
        for A in mats:
            if len(A) != 2 * self.n or any(len(r) != 2 * self.n for r in A):
                raise ValueError("matrices must be 2n x 2n")
        object.__setattr__(self, "matrices", mats)

    @property
    def m(self) -> int:
        return len(self.matrices)


def gamma(n: int) -> list[RVariable]:
    return [z(k) for k in range(1, n + 1)] + [zb(k) for k in range(1, n + 1)]


# ---------------------------------------------------------------- total systems


def build_operators(s: TotalSystem) -> list[DiffOperator]:
    """The 2m operators whose joint kernel holds the first integrals."""
    if s.conjugated:
        return build_operators(conjugate_system(s))
    ops = []
    for j in range(s.m):
        t = {z(j + 1): RPoly(1)}
        for xi in range(s.n):
            t[w(xi + 1)] = s.X1[xi][j]
            t[wb(xi + 1)] = s.X2[xi][j].conjugate()
        ops.append(DiffOperator(t))
    for j in range(s.m):
        t = {zb(j + 1): RPoly(1)}
        for xi in range(s.n):
            t[w(xi + 1)] = s.X2[xi][j]
            t[wb(xi + 1)] = s.X1[xi][j].conjugate()
        ops.append(DiffOperator(t))
    return ops


def conjugate_system(s: TotalSystem) -> TotalSystem:
    """``d~w = conj(X2) dz + conj(X1) d~z``."""
    X1 = tuple(tuple(e.conjugate() for e in row) for row in s.X2)
    X2 = tuple(tuple(e.conjugate() for e in row) for row in s.X1)
    return TotalSystem(s.m, s.n, X1, X2, not s.conjugated)


@dataclass(frozen=True)
class FrobeniusReport:
    passed: bool
    failures: tuple  # (family, tau, j, zeta, residual), indices 1-based
    brackets_null: bool

    def __bool__(self):
        return self.passed


def frobenius_check(s: TotalSystem) -> FrobeniusReport:
    """Expand the three compatibility identities of a total system.

    Families: ``zz`` compares mixed z-partials, ``bb`` mixed ~z-partials and
    ``zb`` the z/~z mixed partials of every dependent variable.
    """
    if s.conjugated:
        s = conjugate_system(s)
    ops = build_operators(s)
    m = s.m
    failures = []
    for tau in range(s.n):
        for j, zeta in combinations(range(m), 2):
            r = lie_derivative(ops[zeta], s.X(tau, j)) - lie_derivative(ops[j], s.X(tau, zeta))
            if r:
                failures.append(("zz", tau + 1, j + 1, zeta + 1, r))
            r = lie_derivative(ops[m + zeta], s.X(tau, m + j)) - lie_derivative(
                ops[m + j], s.X(tau, m + zeta)
            )
            if r:
                failures.append(("bb", tau + 1, j + 1, zeta + 1, r))
        for j in range(m):
            for zeta in range(m):
                r = lie_derivative(ops[zeta], s.X(tau, m + j)) - lie_derivative(ops[m + j], s.X(tau, zeta))
                if r:
                    failures.append(("zb", tau + 1, j + 1, zeta + 1, r))
    return FrobeniusReport(not failures, tuple(failures), brackets_null(ops))


def brackets_null(ops: Sequence[DiffOperator]) -> bool:
    return all(poisson_bracket(a, b).is_null() for a, b in combinations(ops, 2))


# ---------------------------------------------------------------- PDE systems


def jacobian_check(s: PdeSystem | RLinearPdeSystem) -> bool:
    if isinstance(s, RLinearPdeSystem):
        s = operators_from_matrices(s)
    return brackets_null(s.ops)


def extract_matrices(s: PdeSystem) -> RLinearPdeSystem:
    g = gamma(s.n)
    pos = {v: i for i, v in enumerate(g)}
    mats = []
    for j, op in enumerate(s.ops):
        A = [[ZERO] * (2 * s.n) for _ in range(2 * s.n)]
        for v, c in op.terms:
            if isinstance(c, RRational):
                raise NotRLinear(f"operator {j + 1}: rational coefficient at d/d({v})")
            k = pos[v]
            for mono, coef in c.terms.items():
                if len(mono) != 1 or mono[0][1] != 1:
                    raise NotRLinear(f"operator {j + 1}: coefficient of d/d({v}) is not R-linear: {c}")
                A[pos[mono[0][0]]][k] = coef
        mats.append(A)
    return RLinearPdeSystem(s.n, mats)


def operators_from_matrices(s: RLinearPdeSystem) -> PdeSystem:
    g = gamma(s.n)
    ops = []
    for A in s.matrices:
        t = {}
        for k, vk in enumerate(g):
            c = RPoly({((g[l], 1),): A[l][k] for l in range(2 * s.n)})
            t[vk] = c
        ops.append(DiffOperator(t))
    return PdeSystem(s.n, ops)


# ---------------------------------------------------------------- rank conditions


@dataclass(frozen=True)
class NondegeneracyReport:
    nondegenerate: bool
    witness: tuple | None  # (column a, column b, minor), 1-based columns


def nondegeneracy_rank(s: TotalSystem | Sequence, Q: RPoly | None = None) -> NondegeneracyReport:
    """Rank test for a single equation ``dw = (P_1 dz + ... + P_2m d~z) / Q``.

    The 2 x 2m matrix has rows ``(P_1, ..., P_2m)`` and ``(conj P_{m+1}, ...,
    conj P_2m, conj P_1, ..., conj P_m)``.  A common denominator ``Q`` only
    rescales every minor by ``Q * conj(Q)``, so passing the coefficients
    ``X`` directly gives the same answer.
    """
    if isinstance(s, TotalSystem):
        if s.n != 1:
            raise ValueError("nondegeneracy is defined for a single dependent variable")
        P = [s.X(0, c) for c in range(2 * s.m)]
    else:
        P = [_entry(p) for p in s]
    if Q is not None:
        P = [as_rational(p) * Q for p in P]
    m = len(P) // 2
    row2 = [p.conjugate() for p in P[m:]] + [p.conjugate() for p in P[:m]]
    for a, b in combinations(range(2 * m), 2):
        minor = P[a] * row2[b] - P[b] * row2[a]
        if minor:
            return NondegeneracyReport(True, (a + 1, b + 1, minor))
    return NondegeneracyReport(False, None)


@dataclass(frozen=True)
class RegularityReport:
    regular: bool
    matrix: tuple


def r_regularity_at(g, point: Mapping) -> RegularityReport:
    """Rank-2 test of the Wirtinger gradients of ``g`` and ``conj(g)`` at a point."""
    g = as_rational(g)
    gb = g.conjugate()
    base = sorted(var(k) for k in point)
    cols = base + [v.partner for v in base]
    M = []
    for f in (g, gb):
        M.append([f.diff(v).eval_at(point, "physical") for v in cols])
    return RegularityReport(rank(M) == 2, tuple(tuple(r) for r in M))

