import pytest
from hypothesis import given
from hypothesis import strategies as st

from rdiffsys import (
    DarbouxExpr,
    GaussianRational,
    IntegralCandidate,
    RRational,
    commute_check,
    eigen_decompose,
    exponent_nullspace,
    generalized_chain,
    integral_from_chains,
    linear_partial_integral,
    load,
    operators_from_matrices,
    psi_chain,
    spectral_synthesis,
    verify_first_integral,
    verify_partial_integral,
)
from rdiffsys.errors import ChainBreaks, EigenvalueNotRational, InputError
from rdiffsys.linalg import matvec
from rdiffsys.numbers import as_gaussian
from rdiffsys.spectral import (
    choose_zeta,
    darboux_from_eigen,
    eigenvalues,
    elementary_divisor_count,
)
from rdiffsys.systems import extract_matrices

from conftest import DATA, P

z1, z2, zb1, zb2 = P("z1"), P("z2"), P("~z1"), P("~z2")
G = GaussianRational

JORDAN_CHAIN = [(-1, 1, -1, 0), (1, 0, -1, -1), (1, -1, 3, 0), (-3, 0, 9, 9)]


@pytest.fixture(scope="module")
def diagonal():
    rs = load(DATA / "rlinear_diagonal.sys").system()
    return rs, list(operators_from_matrices(rs).ops)


@pytest.fixture(scope="module")
def jordan():
    s = load(DATA / "rlinear_jordan.sys").system()
    return extract_matrices(s), list(s.ops)


@pytest.fixture(scope="module")
def jordan_report(jordan):
    rs, _ = jordan
    return spectral_synthesis(load(DATA / "rlinear_jordan.sys").system(), zeta=0, chain_hints=[JORDAN_CHAIN])


def mat(rows):
    return [[as_gaussian(x) for x in r] for r in rows]


def vec(v):
    return tuple(G(x) for x in v)


def proportional(u, v):
    i = next(k for k, x in enumerate(v) if x)
    r = u[i] / v[i]
    return all(a == r * b for a, b in zip(u, v))


# ---------------------------------------------------------------- eigen data


def test_commute(diagonal, jordan):
    assert commute_check(diagonal[0])
    assert commute_check(jordan[0])


def test_eigen_table_diagonal(diagonal):
    rs, _ = diagonal
    got = {(c.eigenvalues_by_operator, c.nu0) for c in eigen_decompose(rs)}
    expect = [
        ((-1, 0), (0, 0, 1, -1)),
        ((-1, 0), (1, 0, 0, 0)),
        ((1, -2), (0, 1, -1, -1)),
        ((1, 2), (0, 1, 1, 1)),
    ]
    assert got == {(vec(l), vec(v)) for l, v in expect}


def test_eigenvectors_satisfy_equations(diagonal, jordan):
    for rs in (diagonal[0], jordan[0]):
        for c in eigen_decompose(rs):
            for A, lam in zip(rs.matrices, c.eigenvalues_by_operator):
                assert matvec([list(r) for r in A], c.nu0) == [lam * x for x in c.nu0]


def test_diagonal_matrix_gives_standard_basis():
    from rdiffsys import RLinearPdeSystem

    rs = RLinearPdeSystem(1, (mat([[2, 0], [0, 3]]),))
    chains = eigen_decompose(rs)
    assert [c.nu0 for c in chains] == [vec((1, 0)), vec((0, 1))]
    assert [c.eigenvalue for c in chains] == [G(2), G(3)]


def test_jordan_single_eigenvector(jordan):
    rs, _ = jordan
    chains = eigen_decompose(rs, zeta=0)
    assert len(chains) == 1
    assert proportional(chains[0].nu0, vec(JORDAN_CHAIN[0]))
    assert chains[0].eigenvalues_by_operator == (G(1), G(2))


def test_irrational_eigenvalues_rejected():
    with pytest.raises(EigenvalueNotRational):
        eigenvalues(mat([[0, 1], [2, 0]]))
    # hints cannot help: the roots are not in Q(i)
    with pytest.raises(EigenvalueNotRational):
        eigenvalues(mat([[0, 1], [2, 0]]), hints=[1, 2])


def test_gaussian_eigenvalues_found():
    eig = eigenvalues(mat([[0, -1], [1, 0]]))
    assert {e for e, _ in eig} == {GaussianRational(0, 1), GaussianRational(0, -1)}


def test_hint_and_float_paths():
    A = mat([[G(7) / 3, 0], [0, G(-5, 2) / 2]])
    exact = eigenvalues(A)
    assert eigenvalues(A, hints=[G(7) / 3]) == exact
    assert eigenvalues(A, allow_float=True) == exact


def test_float_discovery_beyond_exact_search():
    # coefficients too large for divisor enumeration; float roots are rounded then checked exactly
    A = mat([[G(1000003) / 7, 0, 0], [0, G(1000033) / 11, 0], [0, 0, 999983]])
    with pytest.raises(EigenvalueNotRational):
        eigenvalues(A)
    got = {e for e, _ in eigenvalues(A, allow_float=True)}
    assert got == {G(1000003) / 7, G(1000033) / 11, G(999983)}
    assert {e for e, _ in eigenvalues(A, hints=[G(1000003) / 7, G(1000033) / 11])} == got


def test_zeta_prefers_fewest_blocks(jordan, diagonal):
    rs, _ = jordan
    counts = [elementary_divisor_count(A, eigenvalues(A)) for A in rs.matrices]
    assert counts[0] == 1
    assert choose_zeta(rs) == 0
    assert choose_zeta(diagonal[0]) == 0


# ---------------------------------------------------------------- chains


def test_jordan_block_chain():
    J = mat([[0, 1], [0, 0]])
    ch = generalized_chain(J, 0, (1, 0), s=2)
    assert ch.generalized == (vec((0, 1)),)


def test_chain_recovers_generalized_vectors(jordan):
    rs, _ = jordan
    A = [list(r) for r in rs.matrices[0]]
    ch = generalized_chain(A, 1, JORDAN_CHAIN[0], s=4)
    assert ch.multiplicity == 4
    M = [[A[i][j] - (1 if i == j else 0) for j in range(4)] for i in range(4)]
    for eta in range(1, 4):
        assert matvec(M, ch.vectors[eta]) == [eta * x for x in ch.vectors[eta - 1]]


def test_chain_breaks_for_diagonalizable():
    with pytest.raises(ChainBreaks):
        generalized_chain(mat([[1, 0], [0, 2]]), 1, (1, 0), s=2)


def test_chain_requires_eigenvector():
    with pytest.raises(InputError):
        generalized_chain(mat([[1, 0], [0, 2]]), 1, (0, 1))


# ---------------------------------------------------------------- linear partial integrals


@pytest.mark.parametrize(
    "nu,expect",
    [
        ((0, -1, 1, 1), -z2 + zb1 + zb2),
        ((1, 0, 0, 0), z1),
        ((-1, 1, -1, 0), -z1 + z2 - zb1),
    ],
)
def test_linear_partial_integral(nu, expect):
    assert linear_partial_integral(nu, 2) == expect


def test_linear_partial_integral_cofactors(diagonal):
    rs, ops = diagonal
    for c in eigen_decompose(rs):
        f = linear_partial_integral(c, 2)
        res = verify_partial_integral(ops, IntegralCandidate(DarbouxExpr.from_poly(f), "partial"))
        assert res.ok
        for (alpha, beta), lam in zip(res.cofactors, c.eigenvalues_by_operator):
            assert alpha == lam and not beta


# ---------------------------------------------------------------- exponent systems


def test_exponent_nullspace_examples():
    # columns nu1, nu2, nu3 and nu1, nu2, nu4 of the diagonal example
    (h,) = exponent_nullspace([[1, -1, -1], [-2, 0, 0]])
    assert proportional(h, vec((0, -1, 1)))
    (h,) = exponent_nullspace([[1, -1, 1], [-2, 0, 2]])
    assert proportional(h, vec((1, 2, 1)))
    assert len(exponent_nullspace([[0, 0, 0], [0, 0, 0]])) == 3


tables = st.integers(1, 3).flatmap(
    lambda m: st.integers(m, m + 2).flatmap(
        lambda k: st.lists(
            st.lists(st.integers(-3, 3), min_size=k, max_size=k), min_size=m, max_size=m
        )
    )
)


@given(tables)
def test_exponent_nullspace_annihilates(table):
    from rdiffsys.linalg import rank

    basis = exponent_nullspace(table)
    T = [[G(x) for x in r] for r in table]
    for h in basis:
        assert all(not sum((a * b for a, b in zip(r, h)), G(0)) for r in T)
    assert len(basis) == len(table[0]) - rank(T)
    if basis:
        assert rank([list(b) for b in basis]) == len(basis)


# ---------------------------------------------------------------- integrals


def test_darboux_from_eigen(diagonal):
    rs, ops = diagonal
    ch = {c.nu0: c for c in eigen_decompose(rs)}
    nu1, nu2, nu3, nu4 = (ch[vec(v)] for v in [(0, 1, -1, -1), (1, 0, 0, 0), (0, 0, 1, -1), (0, 1, 1, 1)])
    F1 = darboux_from_eigen([nu1, nu2, nu3], (0, -1, 1), ops)
    F2 = darboux_from_eigen([nu1, nu2, nu4], (1, 2, 1), ops)
    assert F1.equivalent_up_to_scalar(DarbouxExpr([(zb1 - zb2, 1), (z1, -1)]))
    assert F2.equivalent_up_to_scalar(DarbouxExpr.from_poly(z1**2 * (z2**2 - (zb1 + zb2) ** 2)))
    one = darboux_from_eigen([nu1], (0,), ops)
    assert one.to_rational() == RRational(1)


def test_psi_functions(jordan, jordan_report):
    _, ops = jordan
    rep = jordan_report
    (pc,) = rep.psis
    p0 = -z1 + z2 - zb1
    q = z1 - zb1 - zb2
    psi1 = RRational(q, p0)
    psi2 = RRational(p0 * (z1 - z2 + 3 * zb1) - q**2, p0**2)
    psi3 = RRational((-3 * z1 + 9 * zb1 + 9 * zb2) * p0**2 - 3 * p0 * q * (z1 - z2 + 3 * zb1) + 2 * q**3, p0**3)
    assert pc.psis[0] == psi1
    assert pc.psis[1] == psi2
    assert pc.psis[2] == psi3
    assert pc.mus[0] == (G(1), G(0), G(0))
    assert pc.mus[1] == (G(-1), G(0), G(6))


def test_psi_identities_on_auto_chain(jordan):
    rs, ops = jordan
    (c,) = eigen_decompose(rs, zeta=0)
    A = [list(r) for r in rs.matrices[0]]
    ch = generalized_chain(A, c.eigenvalue, c.nu0, None, 0, c.eigenvalues_by_operator)
    pc = psi_chain(ch, ops)
    assert pc.mus[0] == (G(1), G(0), G(0))
    assert len(pc.psis) == 3


def test_psi_chain_needs_length_two(diagonal):
    rs, ops = diagonal
    with pytest.raises(ValueError):
        psi_chain(eigen_decompose(rs)[0], ops)


def test_integral_from_chains(jordan, jordan_report):
    _, ops = jordan
    rep = jordan_report
    ch, pc = rep.chains[0], rep.psis[0]
    F1 = integral_from_chains([ch], [pc], (0, 0, 1, 0), ops)
    assert F1.exp_part == pc.psis[1]
    p0 = -z1 + z2 - zb1
    F2 = integral_from_chains([ch], [pc], (2, -2, 0, -1), ops)
    assert F2.factors[0] == (p0, G(2))
    one = integral_from_chains([ch], [pc], (0, 0, 0, 0), ops)
    assert one.to_rational() == RRational(1)


def test_synthesis_diagonal(diagonal):
    rs, ops = diagonal
    rep = spectral_synthesis(rs)
    assert rep.rank == 2
    for it in rep.integrals:
        assert it.verified
        assert verify_first_integral(ops, IntegralCandidate(it.expr, "first")).ok


def test_synthesis_jordan(jordan, jordan_report):
    _, ops = jordan
    assert jordan_report.rank == 2
    for it in jordan_report.integrals:
        assert verify_first_integral(ops, IntegralCandidate(it.expr, "first")).ok
    hs = [it.h for it in jordan_report.integrals]
    assert vec((0, 0, 1, 0)) in hs


def test_synthesis_without_hint(jordan):
    rep = spectral_synthesis(load(DATA / "rlinear_jordan.sys").system())
    assert rep.rank == 2
    assert all(c.verified for c in rep.integrals)


def test_bad_chain_hint_rejected():
    bad = [JORDAN_CHAIN[0], (1, 0, 0, 0)]
    with pytest.raises(InputError):
        spectral_synthesis(load(DATA / "rlinear_jordan.sys").system(), chain_hints=[bad])


def test_noncommuting_reported():
    from rdiffsys import RLinearPdeSystem

    rs = RLinearPdeSystem(1, (mat([[1, 1], [0, 1]]), mat([[1, 0], [1, 1]])))
    rep = spectral_synthesis(rs)
    assert not rep.commuting and not rep.integrals
    with pytest.raises(InputError):
        eigen_decompose(rs)


def test_master_property_all_candidates(diagonal):
    # every verified candidate passes the independent verifier
    rs, ops = diagonal
    rep = spectral_synthesis(rs)
    for c in rep.candidates:
        ok = verify_first_integral(ops, IntegralCandidate(c.expr, "first")).ok
        assert ok == c.verified
