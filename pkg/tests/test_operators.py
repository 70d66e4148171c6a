from hypothesis import given
from hypothesis import strategies as st

from rdiffsys import DarbouxExpr, DiffOperator, RPoly, RRational, divergence, lie_derivative, lie_log, poisson_bracket
from rdiffsys import load
from rdiffsys.integrals import operators_of

from conftest import DATA, P, Z_VARS, gaussians, polys

z1, z2, zb1, zb2 = P("z1"), P("z2"), P("~z1"), P("~z2")
w1, w2, wb1, wb2 = P("w1"), P("w2"), P("~w1"), P("~w2")


def ops_of(name):
    return operators_of(load(DATA / name).system())


def operators(max_terms=3):
    coeff = polys(Z_VARS, max_deg=2, max_terms=3)
    return st.lists(st.tuples(st.sampled_from(Z_VARS), coeff), max_size=max_terms).map(DiffOperator)


def test_lie_derivative_examples():
    assert lie_derivative(DiffOperator({"z1": z2}), z1 + z2) == z2
    A1 = ops_of("pde_first.sys")[0]
    assert not lie_derivative(A1, z1**2 + zb2**2)
    assert not lie_derivative(A1, RPoly(7))


def test_lie_derivative_of_rational_uses_quotient_rule():
    op = DiffOperator({"z1": 1})
    r = RRational(z2, z1)
    assert lie_derivative(op, r) == RRational(-z2, z1 * z1)


def test_lie_log_matches_expanded_derivative():
    op = DiffOperator({"z1": z2, "~z1": z1})
    d = DarbouxExpr([(z1 + zb1, 2), (z2, -1)])
    r = d.to_rational()
    assert lie_log(op, d) == lie_derivative(op, r) / r


def test_divergence_examples():
    X1 = ops_of("total_multiplier.sys")[0]
    assert divergence(X1) == 1 + 2 * wb2
    u1 = ops_of("pde_multiplier.sys")[0]
    assert divergence(u1) == zb1
    assert not divergence(DiffOperator({"z1": 3, "~z2": 1}))


def test_rendering():
    op = DiffOperator({"z1": z2, "~z1": -(z1 + 1)})
    assert str(op) == "z2 * d/d(z1) + (-z1 - 1) * d/d(~z1)"
    assert str(DiffOperator({"z1": -z2})) == "-z2 * d/d(z1)"


def test_bracket_examples():
    ops = ops_of("rlinear_diagonal.sys")
    assert poisson_bracket(ops[0], ops[1]).is_null()
    ops = ops_of("pde_first.sys")
    assert not poisson_bracket(ops[0], ops[1]).is_null()
    assert poisson_bracket(ops[0], ops[0]).is_null()


@given(operators(), operators())
def test_bracket_antisymmetry(a, b):
    assert poisson_bracket(a, b) == -poisson_bracket(b, a)


@given(operators(2), operators(2), operators(2))
def test_jacobi_identity(a, b, c):
    total = (
        poisson_bracket(a, poisson_bracket(b, c))
        + poisson_bracket(b, poisson_bracket(c, a))
        + poisson_bracket(c, poisson_bracket(a, b))
    )
    assert total.is_null()


@given(operators(), operators(), polys(Z_VARS, max_deg=2))
def test_bracket_acts_as_commutator(a, b, f):
    lhs = lie_derivative(poisson_bracket(a, b), f)
    rhs = lie_derivative(a, lie_derivative(b, f)) - lie_derivative(b, lie_derivative(a, f))
    assert lhs == rhs


@given(operators(), polys(Z_VARS, max_deg=2), polys(Z_VARS, max_deg=2), gaussians)
def test_lie_derivative_leibniz(op, f, g, c):
    assert lie_derivative(op, f * g) == lie_derivative(op, f) * g + f * lie_derivative(op, g)
    assert lie_derivative(op, f * c + g) == lie_derivative(op, f) * c + lie_derivative(op, g)


@given(operators())
def test_conjugate_operator_is_involution(op):
    assert op.conjugate().conjugate() == op
