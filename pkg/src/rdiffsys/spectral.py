"""Spectral construction of integrals for R-linear PDE systems.

With ``gamma = (z1..zn, ~z1..~zn)`` a common eigenvector ``nu`` of the
commuting matrices gives a linear partial integral ``nu . gamma`` whose
cofactor under operator ``j`` is the eigenvalue ``lam_j``.  Products of such
factors whose exponents annihilate the eigenvalue table are first integrals.
Jordan chains of one distinguished operator add rational functions ``Psi``
with constant Lie derivatives, which enter through an exponential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Sequence

from .darboux import DarbouxExpr
from .errors import ChainBreaks, EigenvalueNotRational, InputError, NonConstantMu, RDiffError
from .linalg import (
    charpoly,
    det,
    float_root_candidates,
    gaussian_rational_roots,
    matmul,
    matvec,
    nullspace,
    _deflate,
    poly_eval,
    rank,
    solve,
)
from .numbers import ONE, ZERO, GaussianRational, as_gaussian
from .operators import DiffOperator, lie_derivative, lie_log
from .poly import RPoly, RRational, as_rational
from .systems import RLinearPdeSystem, extract_matrices, gamma, operators_from_matrices

__all__ = [
    "EigenChain",
    "PsiChain",
    "commute_check",
    "eigenvalues",
    "eigen_decompose",
    "elementary_divisor_count",
    "choose_zeta",
    "generalized_chain",
    "linear_partial_integral",
    "exponent_nullspace",
    "darboux_from_eigen",
    "psi_chain",
    "chain_table",
    "integral_from_chains",
    "spectral_synthesis",
    "SpectralReport",
]


Vector = tuple


@dataclass(frozen=True)
class EigenChain:
    """A common eigenvector and, optionally, its Jordan chain under operator ``zeta``.

    ``generalized`` holds ``nu^1 .. nu^(s-1)`` with
    ``(A_zeta - lam E) nu^eta = eta * nu^(eta-1)``.
    """

    eigenvalue: GaussianRational
    eigenvalues_by_operator: tuple
    nu0: Vector
    generalized: tuple = ()
    zeta: int = 0  # 0-based

    @property
    def multiplicity(self) -> int:
        return 1 + len(self.generalized)

    @property
    def vectors(self) -> tuple:
        return (self.nu0,) + tuple(self.generalized)

    def with_chain(self, generalized: Sequence[Vector]) -> "EigenChain":
        return EigenChain(self.eigenvalue, self.eigenvalues_by_operator, self.nu0, tuple(generalized), self.zeta)


@dataclass(frozen=True)
class PsiChain:
    psis: tuple  # Psi_1 .. Psi_{s-1}
    mus: tuple  # mus[j][eta-1] = L_j Psi_eta, constants
    zeta: int


def _vec(v) -> Vector:
    return tuple(as_gaussian(x) for x in v)


def _normalize(v: Sequence) -> Vector:
    lead = next(x for x in v if x)
    return tuple(x / lead for x in v)


def _shift(A, lam):
    n = len(A)
    return [[A[i][j] - (lam if i == j else ZERO) for j in range(n)] for i in range(n)]


def _matrices(s) -> RLinearPdeSystem:
    if isinstance(s, RLinearPdeSystem):
        return s
    return extract_matrices(s)


# ---------------------------------------------------------------- eigenvalues


def commute_check(s) -> bool:
    mats = [list(map(list, A)) for A in _matrices(s).matrices]
    for A, B in combinations(mats, 2):
        if matmul(A, B) != matmul(B, A):
            return False
    return True


def eigenvalues(A, hints: Sequence = (), allow_float: bool = False) -> list[tuple[GaussianRational, int]]:
    """Distinct eigenvalues in Q(i) with algebraic multiplicities, sorted.

    The exact search runs first; hinted values and (if allowed) rounded
    floating-point roots are accepted only after an exact check.
    """
    cp = charpoly([list(r) for r in A])
    roots, rest = gaussian_rational_roots(cp)
    extra = [as_gaussian(h) for h in hints]
    if len(rest) > 1 and allow_float:
        extra += float_root_candidates(rest)
    for c in extra:
        while len(rest) > 1 and not poly_eval(rest, c):
            roots.append(c)
            rest = _deflate(rest, c)
    more, rest = gaussian_rational_roots(rest)
    roots += more
    if len(rest) > 1:
        raise EigenvalueNotRational(
            f"characteristic polynomial has a factor of degree {len(rest) - 1} without roots in Q(i)"
        )
    counts: dict = {}
    for r in roots:
        counts[r] = counts.get(r, 0) + 1
    return sorted(counts.items(), key=lambda t: t[0].sort_key())


def elementary_divisor_count(A, eigs) -> int:
    """Number of Jordan blocks: total geometric multiplicity."""
    n = len(A)
    return sum(n - rank(_shift([list(r) for r in A], lam)) for lam, _ in eigs)


def choose_zeta(s, hints: dict | None = None, allow_float: bool = False) -> int:
    """0-based index of the matrix with the fewest elementary divisors (ties: lowest)."""
    rs = _matrices(s)
    best, best_count = 0, None
    for j, A in enumerate(rs.matrices):
        eigs = eigenvalues(A, (hints or {}).get(j + 1, ()), allow_float)
        cnt = elementary_divisor_count(A, eigs)
        if best_count is None or cnt < best_count:
            best, best_count = j, cnt
    return best


def eigen_decompose(
    s, hints: dict | None = None, allow_float: bool = False, zeta: int | None = None
) -> list[EigenChain]:
    """Common eigenvectors of all matrices, as order-0 chains.

    Eigenvalue combinations are visited in lexicographic order and each
    joint eigenspace contributes its kernel basis, normalized so the first
    nonzero entry is 1.
    """
    rs = _matrices(s)
    if not commute_check(rs):
        raise InputError("matrices do not commute")
    mats = [[list(r) for r in A] for A in rs.matrices]
    if zeta is None:
        zeta = choose_zeta(rs, hints, allow_float)
    spectra = [[lam for lam, _ in eigenvalues(A, (hints or {}).get(j + 1, ()), allow_float)] for j, A in enumerate(mats)]
    chains = []
    for lams in product(*spectra):
        stacked = [row for A, lam in zip(mats, lams) for row in _shift(A, lam)]
        for v in nullspace(stacked):
            chains.append(EigenChain(lams[zeta], tuple(lams), _normalize(v), (), zeta))
    return chains


# ---------------------------------------------------------------- chains


def generalized_chain(
    A, lam, nu0: Sequence, s: int | None = None, zeta: int = 0, eigenvalues_by_operator=None
) -> EigenChain:
    """Solve ``(A - lam E) nu^eta = eta * nu^(eta-1)`` successively.

    With ``s`` given the chain must reach length ``s`` or :class:`ChainBreaks`
    is raised; with ``s=None`` the chain is extended as far as it goes.
    Each step takes the solution with free unknowns set to zero.
    """
    lam = as_gaussian(lam)
    M = _shift([list(r) for r in A], lam)
    nu0 = _vec(nu0)
    if any(matvec(M, nu0)):
        raise InputError("nu0 is not an eigenvector for this eigenvalue")
    vecs = [nu0]
    limit = len(nu0) if s is None else s
    while len(vecs) < limit:
        eta = len(vecs)
        x = solve(M, [eta * c for c in vecs[-1]])
        if x is None:
            if s is not None:
                raise ChainBreaks(f"chain stops at length {len(vecs)} before reaching {s}", len(vecs))
            break
        vecs.append(tuple(x))
    lams = tuple(eigenvalues_by_operator) if eigenvalues_by_operator is not None else (lam,)
    return EigenChain(lam, lams, nu0, tuple(vecs[1:]), zeta)


def check_chain(mats, chain: EigenChain) -> None:
    """Raise InputError unless the chain satisfies its defining equations exactly."""
    for A, lam in zip(mats, chain.eigenvalues_by_operator):
        if any(matvec(_shift([list(r) for r in A], lam), chain.nu0)):
            raise InputError("hinted nu0 is not a common eigenvector with the stated eigenvalues")
    M = _shift([list(r) for r in mats[chain.zeta]], chain.eigenvalue)
    vecs = chain.vectors
    for eta in range(1, len(vecs)):
        lhs = matvec(M, vecs[eta])
        if list(lhs) != [eta * c for c in vecs[eta - 1]]:
            raise InputError(f"hinted chain vector {eta} violates the chain equation")


def linear_partial_integral(chain: EigenChain | Sequence, n: int) -> RPoly:
    nu = chain.nu0 if isinstance(chain, EigenChain) else _vec(chain)
    return _dot(nu, n)


def _dot(nu: Sequence, n: int) -> RPoly:
    return RPoly({((v, 1),): c for v, c in zip(gamma(n), nu)})


# ---------------------------------------------------------------- exponent systems


def exponent_nullspace(table: Sequence[Sequence]) -> list[Vector]:
    """Basis of ``h`` with ``sum_theta table[j][theta] * h_theta = 0`` for every row ``j``.

    For ``m`` rows and ``m + 1`` columns with a nonzero leading minor the
    Cramer vector is also checked to lie in the span.
    """
    T = [[as_gaussian(x) for x in row] for row in table]
    ncols = len(T[0]) if T else 0
    basis = [tuple(v) for v in nullspace(T, ncols)]
    m = len(T)
    if m and ncols == m + 1:
        delta = det([row[:m] for row in T])
        if delta:
            h = []
            for i in range(m):
                Mi = [row[:i] + [row[m]] + row[i + 1 : m] for row in T]
                h.append(-det(Mi))
            h.append(delta)
            assert all(not sum((a * b for a, b in zip(row, h)), ZERO) for row in T)
            assert rank([list(b) for b in basis] + [h]) == len(basis)
    return basis


def darboux_from_eigen(chains: Sequence[EigenChain], h: Sequence, ops=None, n: int | None = None) -> DarbouxExpr:
    """``prod (nu_theta . gamma) ** h_theta``; checked against ``ops`` when given."""
    n = n if n is not None else len(chains[0].nu0) // 2
    F = DarbouxExpr([(_dot(c.nu0, n), as_gaussian(e)) for c, e in zip(chains, h)])
    if ops is not None:
        for op in ops:
            if not lie_log(op, F).is_zero():
                raise RDiffError("exponent vector does not give a first integral")
    return F


def psi_chain(chain: EigenChain, ops: Sequence[DiffOperator]) -> PsiChain:
    """Rational functions from the triangular system of a Jordan chain.

    ``Psi_1 = p_1 / p_0`` and
    ``Psi_eta = (p_eta - sum_{d<eta} C(eta-1, d-1) Psi_d p_{eta-d}) / p_0``
    with ``p_k = nu^k . gamma``.
    """
    if chain.multiplicity < 2:
        raise ValueError("psi_chain needs a chain of length at least 2")
    n = len(chain.nu0) // 2
    p = [_dot(v, n) for v in chain.vectors]
    p0 = p[0]
    psis: list[RRational] = []
    for eta in range(1, chain.multiplicity):
        acc = as_rational(p[eta])
        for d in range(1, eta):
            acc = acc - psis[d - 1] * p[eta - d] * comb(eta - 1, d - 1)
        psis.append(RRational(acc.num, acc.den * p0, hints=(p0,)))
    mus = []
    bad = []
    for j, op in enumerate(ops):
        row = []
        for eta, psi in enumerate(psis, start=1):
            val = as_rational(lie_derivative(op, psi))
            if j == chain.zeta:
                expect = ONE if eta == 1 else ZERO
                if val != expect:
                    raise RDiffError(f"Psi_{eta} fails its defining identity under operator {j + 1}")
            if not val.is_constant():
                bad.append(val)
                row.append(None)
            else:
                row.append(val.constant_value())
        mus.append(tuple(row))
    if bad:
        raise NonConstantMu("Lie derivatives of Psi functions are not constant", bad)
    return PsiChain(tuple(psis), tuple(mus), chain.zeta)


def chain_table(chains: Sequence[EigenChain], psichains: Sequence[PsiChain | None], m: int) -> list[list]:
    """Rows ``j``: for each chain ``[lam_j, mu_j1, ..., mu_j(s-1)]``, concatenated."""
    table = []
    for j in range(m):
        row = []
        for c, pc in zip(chains, psichains):
            row.append(c.eigenvalues_by_operator[j])
            if pc is not None:
                row += list(pc.mus[j])
        table.append(row)
    return table


def integral_from_chains(
    chains: Sequence[EigenChain], psichains: Sequence[PsiChain | None], h: Sequence, ops=None
) -> DarbouxExpr:
    """``prod (nu0 . gamma) ** h0 * exp(sum h_q Psi_q)`` over the given chains."""
    h = [as_gaussian(x) for x in h]
    factors = []
    expo = as_rational(0)
    k = 0
    for c, pc in zip(chains, psichains):
        n = len(c.nu0) // 2
        factors.append((_dot(c.nu0, n), h[k]))
        k += 1
        if pc is not None:
            for psi in pc.psis:
                if h[k]:
                    expo = expo + psi * h[k]
                k += 1
    F = DarbouxExpr(factors, expo)
    if ops is not None:
        for op in ops:
            if not lie_log(op, F).is_zero():
                raise RDiffError("exponent vector does not give a first integral")
    return F


# ---------------------------------------------------------------- pipeline


@dataclass
class SpectralIntegral:
    chain_indices: tuple
    h: tuple
    expr: DarbouxExpr
    verified: bool


@dataclass
class SpectralReport:
    system: RLinearPdeSystem
    commuting: bool
    zeta: int
    eigen: list = field(default_factory=list)  # order-0 chains
    chains: list = field(default_factory=list)  # possibly extended chains
    psis: list = field(default_factory=list)  # PsiChain | None per chain
    integrals: list = field(default_factory=list)  # independent, verified
    candidates: list = field(default_factory=list)  # every h vector tried
    rank: int = 0


def spectral_synthesis(
    s,
    zeta: int | None = None,
    hints: dict | None = None,
    chain_hints: Sequence[Sequence] = (),
    allow_float: bool = False,
) -> SpectralReport:
    """Run the full pipeline and keep a functionally independent set of verified integrals.

    ``zeta`` is 0-based.  ``hints`` maps 1-based operator indices to
    eigenvalue guesses.  ``chain_hints`` are explicit chains ``[nu0, nu1,
    ...]``; each is checked and replaces the computed chain of the matching
    eigenvector.
    """
    from .pfaffian import independence_rank, log_gradient_form

    rs = _matrices(s)
    ops = list(operators_from_matrices(rs).ops) if isinstance(s, RLinearPdeSystem) else list(s.ops)
    report = SpectralReport(rs, commute_check(rs), 0)
    if not report.commuting:
        return report
    mats = [[list(r) for r in A] for A in rs.matrices]
    if zeta is None:
        zeta = choose_zeta(rs, hints, allow_float)
    report.zeta = zeta
    eigen = eigen_decompose(rs, hints, allow_float, zeta)
    report.eigen = eigen

    hinted = []
    for vecs in chain_hints:
        vecs = [_vec(v) for v in vecs]
        nu0 = vecs[0]
        lams = []
        for A in mats:
            Av = matvec(A, nu0)
            i = next(i for i, x in enumerate(nu0) if x)
            lams.append(Av[i] / nu0[i])
        ch = EigenChain(lams[zeta], tuple(lams), nu0, tuple(vecs[1:]), zeta)
        check_chain(mats, ch)
        hinted.append(ch)

    chains = []
    for c in eigen:
        match = next((hc for hc in hinted if rank([list(hc.nu0), list(c.nu0)]) == 1), None)
        if match is not None:
            chains.append(match)
            continue
        ext = generalized_chain(mats[zeta], c.eigenvalue, c.nu0, None, zeta, c.eigenvalues_by_operator)
        chains.append(ext)
    report.chains = chains
    report.psis = [psi_chain(c, ops) if c.multiplicity > 1 else None for c in chains]

    n = rs.n
    g = gamma(n)
    grads = []
    idx = range(len(chains))
    for size in range(1, min(len(chains), rs.m + 1) + 1):
        for sub in combinations(idx, size):
            cs = [chains[i] for i in sub]
            ps = [report.psis[i] for i in sub]
            table = chain_table(cs, ps, rs.m)
            for h in exponent_nullspace(table):
                F = integral_from_chains(cs, ps, h)
                ok = all(lie_log(op, F).is_zero() for op in ops)
                report.candidates.append(SpectralIntegral(sub, h, F, ok))
                if not ok:
                    continue
                trial = grads + [log_gradient_form(F, g)]
                r = independence_rank(trial, g)
                if r > len(grads):
                    grads = trial
                    report.integrals.append(SpectralIntegral(sub, h, F, ok))
    report.rank = len(grads)
    return report

