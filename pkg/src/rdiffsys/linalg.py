"""Exact linear algebra over Q(i) and over rational-function fields.

Dense routines work on lists of lists whose entries support ``+ - * /`` and
truth testing (GaussianRational, RRational).  The sparse solver is used for
the large coefficient systems produced by polynomial ansatzes.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .numbers import ONE, ZERO, GaussianRational, as_gaussian

__all__ = [
    "rref",
    "rank",
    "nullspace",
    "solve",
    "det",
    "matmul",
    "matvec",
    "identity",
    "charpoly",
    "poly_eval",
    "gaussian_rational_roots",
    "sparse_solve",
]


def _copy(M):
    return [list(row) for row in M]


def rref(M) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    A = _copy(M)
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = ONE / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M) -> int:
    return len(rref(M)[1])


def nullspace(M, ncols: int | None = None) -> list[list]:
    """Basis of ``{x : M x = 0}``; each vector has a 1 at its free column."""
    if not M:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    R, pivots = rref(M)
    n = len(M[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


def solve(M, b) -> list | None:
    """One solution of ``M x = b`` (free unknowns set to zero), or None."""
    aug = [list(row) + [rhs] for row, rhs in zip(M, b)]
    R, pivots = rref(aug)
    n = len(M[0]) if M else 0
    if n in pivots:
        return None
    x = [ZERO] * n
    for r, p in enumerate(pivots):
        x[p] = R[r][n]
    return x


def det(M):
    A = _copy(M)
    n = len(A)
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return ZERO * result
        if p != c:
            A[c], A[p] = A[p], A[c]
            result = -result
        piv = A[c][c]
        result = result * piv
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] / piv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return result


def identity(n: int) -> list[list]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), ZERO) for j in range(len(B[0]))] for i in range(len(A))]


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v)), ZERO) for row in A]


def charpoly(A) -> list[GaussianRational]:
    """Coefficients of ``det(t E - A)``, constant term first (Faddeev-LeVerrier)."""
    n = len(A)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    Mk = [[ZERO] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = matmul(A, Mk)
        Mk = [[AM[i][j] + (coeffs[n - k + 1] if i == j else ZERO) for j in range(n)] for i in range(n)]
        AMk = matmul(A, Mk)
        tr = sum((AMk[i][i] for i in range(n)), ZERO)
        coeffs[n - k] = -tr / k
    return coeffs


def poly_eval(coeffs: Sequence, x):
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list, r) -> list:
    n = len(coeffs) - 1
    out = [ZERO] * n
    acc = ZERO
    for k in range(n, 0, -1):
        acc = acc * r + coeffs[k]
        out[k - 1] = acc
    return out


# ---------------------------------------------------------------- Gaussian-integer root search


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _gauss_divides(b: tuple[int, int], a: tuple[int, int]) -> bool:
    """Does the Gaussian integer b divide a?"""
    (x, y), (p, q) = b, a
    n = x * x + y * y
    # a / b = a * conj(b) / n
    re = p * x + q * y
    im = q * x - p * y
    return re % n == 0 and im % n == 0


def _gauss_divisors(a: tuple[int, int]) -> list[tuple[int, int]]:
    """All Gaussian-integer divisors of a (every associate included)."""
    norm = a[0] * a[0] + a[1] * a[1]
    out = []
    for d in _int_divisors(norm):
        for x in range(-isqrt(d), isqrt(d) + 1):
            y2 = d - x * x
            y = isqrt(y2)
            if y * y != y2:
                continue
            for yy in {y, -y}:
                if _gauss_divides((x, yy), a):
                    out.append((x, yy))
    return out


def _to_gaussian_integers(coeffs: Sequence[GaussianRational]) -> list[tuple[int, int]]:
    den = 1
    for c in coeffs:
        for f in (c.re, c.im):
            den = den * f.denominator // gcd(den, f.denominator)
    out = []
    for c in coeffs:
        out.append((int(c.re * den), int(c.im * den)))
    return out


def _candidates(coeffs: list[GaussianRational]) -> list[GaussianRational]:
    ints = _to_gaussian_integers(coeffs)
    a0, an = ints[0], ints[-1]
    ps = _gauss_divisors(a0)
    qs = [q for q in _gauss_divisors(an) if q[0] > 0 and q[1] >= 0]
    seen = set()
    out = []
    for q in qs:
        qg = GaussianRational(q[0], q[1])
        for p in ps:
            c = GaussianRational(p[0], p[1]) / qg
            if c not in seen:
                seen.add(c)
                out.append(c)
    out.sort(key=lambda c: (c.norm(), c.sort_key()))
    return out


def gaussian_rational_roots(coeffs: Sequence, max_norm: int | None = 10**12):
    """Roots in Q(i) of a polynomial given by coefficients (constant term first).

    Returns ``(roots, rest)``: roots listed with multiplicity in order of
    discovery and the deflated cofactor whose roots (if any) lie outside Q(i).
    ``max_norm`` bounds the divisor enumeration; beyond it the search stops.
    """
    p = [as_gaussian(c) for c in coeffs]
    while p and not p[-1]:
        p.pop()
    roots: list[GaussianRational] = []
    while len(p) > 1 and not p[0]:
        roots.append(ZERO)
        p = p[1:]
    while len(p) > 1:
        if len(p) == 2:
            roots.append(-p[0] / p[1])
            p = [p[1]]
            break
        ints = _to_gaussian_integers(p)
        if max_norm is not None and max(x * x + y * y for x, y in (ints[0], ints[-1])) > max_norm:
            break
        found = None
        for c in _candidates(p):
            if not poly_eval(p, c):
                found = c
                break
        if found is None:
            break
        roots.append(found)
        p = _deflate(p, found)
    return roots, p


def float_root_candidates(coeffs: Sequence, max_den: int = 1000) -> list[GaussianRational]:
    """Round numerical roots to nearby Gaussian rationals (discovery only)."""
    import numpy as np

    p = [complex(float(c.re), float(c.im)) for c in coeffs]
    out = []
    for r in np.roots(p[::-1]):
        out.append(
            GaussianRational(
                Fraction(float(r.real)).limit_denominator(max_den),
                Fraction(float(r.imag)).limit_denominator(max_den),
            )
        )
    return out


# ---------------------------------------------------------------- sparse systems


def sparse_solve(rows: list[dict], rhs: list, ncols: int):
    """Solve a sparse linear system over Q(i).

    ``rows`` are ``{column: coefficient}`` dicts.  Returns ``(particular,
    basis)`` where ``particular`` is a dict (free unknowns zero) or None if
    inconsistent, and ``basis`` lists nullspace vectors as dicts, one per
    free column in increasing order.
    """
    pivot_rows: dict[int, tuple[dict, GaussianRational]] = {}
    for row, b in zip(rows, rhs):
        row = {c: v for c, v in row.items() if v}
        b = as_gaussian(b)
        # pivot rows are kept fully reduced, so one pass suffices
        for c in [c for c in row if c in pivot_rows]:
            f = row.get(c)
            if not f:
                continue
            prow, pb = pivot_rows[c]
            for k, v in prow.items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            b = b - f * pb
        if not row:
            if b:
                return None, []
            continue
        c = min(row)
        inv = ONE / row[c]
        row = {k: v * inv for k, v in row.items()}
        b = b * inv
        # back-substitute into existing pivot rows
        for pc, (prow, pb) in list(pivot_rows.items()):
            f = prow.get(c)
            if f:
                for k, v in row.items():
                    nv = prow.get(k, ZERO) - f * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
                pivot_rows[pc] = (prow, pb - f * b)
        pivot_rows[c] = (row, b)
    particular = {c: pb for c, (prow, pb) in pivot_rows.items() if pb}
    free = [c for c in range(ncols) if c not in pivot_rows]
    basis = []
    for f in free:
        v = {f: ONE}
        for c, (prow, _) in pivot_rows.items():
            x = prow.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return particular, basis
