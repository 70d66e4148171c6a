import pytest
from hypothesis import given
from hypothesis import strategies as st

from rdiffsys import (
    CylindricalityProfile,
    DarbouxExpr,
    PfaffForm,
    RPoly,
    RRational,
    ansatz_gradient_solve,
    closedness_check,
    independence_rank,
    integrate_exact,
    load,
    log_gradient_form,
    synthesize_pfaffian,
)
from rdiffsys.errors import NonElementaryTerm, NotClosed

from conftest import DATA, P, gaussians, nonzero_gaussians, polys

z1, z2, zb1, zb2 = P("z1"), P("z2"), P("~z1"), P("~z2")
w1, wb1, wb2 = P("w1"), P("~w1"), P("~w2")


def system(name):
    return load(DATA / name).system()


def grad_matches(d: DarbouxExpr, form: PfaffForm) -> bool:
    return log_gradient_form(d, form.variables()) == form


# ---------------------------------------------------------------- closedness and integration


def test_closedness_examples():
    assert closedness_check(PfaffForm({"z1": wb1, "~w1": z1, "~w2": 2 * wb2}))
    assert closedness_check(PfaffForm({"w1": 1, "~w2": 1}))
    rep = closedness_check(PfaffForm({"z1": z2}))
    assert not rep and set(map(str, rep.failing_pair)) == {"z1", "z2"}


def test_integrate_polynomial_form():
    d = integrate_exact(PfaffForm({"z1": wb1, "~w1": z1, "~w2": 2 * wb2}))
    assert not d.factors
    assert d.exp_part == z1 * wb1 + wb2**2


def test_integrate_logarithmic_form():
    d = integrate_exact(PfaffForm({"w1": RRational(-1, w1)}))
    assert d == DarbouxExpr([(w1, -1)])


def test_integrate_half_scalar():
    d = integrate_exact(PfaffForm({"z1": z1, "~z2": zb2}))
    assert d.exp_part == (z1**2 + zb2**2) / 2


def test_integrate_rejects_open_form():
    with pytest.raises(NotClosed):
        integrate_exact(PfaffForm({"z1": z2}))


def test_integrate_reports_non_elementary():
    # d(arctan z1) is closed but has no Darboux primitive over Q(i)[z1] without factoring
    with pytest.raises(NonElementaryTerm):
        integrate_exact(PfaffForm({"z1": RRational(1, z1 * z1 + 1)}))


linear_a = st.builds(lambda a, b, c: z1 * a + zb1 * b + c, nonzero_gaussians, gaussians, gaussians)
linear_b = st.builds(lambda a, c: z2 * a + c, nonzero_gaussians, gaussians)
laurent = st.builds(
    lambda p, i, j: RRational(p, zb2**i * w1**j),
    polys(["~z2", "w1"], max_deg=2, max_terms=3),
    st.integers(0, 2),
    st.integers(0, 2),
)


@given(
    polys(["z1", "z2", "~z1", "~z2", "w1"], max_deg=3),
    laurent,
    st.lists(st.tuples(st.sampled_from(["a", "b", "m1", "m2"]), nonzero_gaussians), max_size=3),
    linear_a,
    linear_b,
)
def test_integrate_exact_round_trip(G, G2, factor_spec, a, b):
    bases = {"a": a, "b": b, "m1": zb2, "m2": w1}
    factors = [(bases[k], e) for k, e in factor_spec if not bases[k].is_constant()]
    d = DarbouxExpr(factors, RRational(G) + G2)
    form = log_gradient_form(d, ["z1", "z2", "~z1", "~z2", "w1"])
    if form.is_zero():
        return
    back = integrate_exact(form)
    assert grad_matches(back, form)
    assert back.equivalent_up_to_scalar(d)


# ---------------------------------------------------------------- ansatz


def test_ansatz_first_integral_degree_one():
    sol = ansatz_gradient_solve(system("pde_first.sys"), CylindricalityProfile.parse("z1, ~z2"), "first", 1)
    (f,) = sol.forms()
    a, b = f.coefficient("z1"), f.coefficient("~z2")
    # the solution space is spanned by a multiple of (z1, ~z2)
    assert not a.is_zero()
    assert a * zb2 == b * z1
    assert (a / z1).is_constant()


def test_ansatz_multiplier_rational():
    sol = ansatz_gradient_solve(system("pde_multiplier.sys"), CylindricalityProfile.parse("~z2"), "multiplier")
    (form,) = sol.forms()
    assert form.coefficient("~z2") == RRational(-1, zb2)


def test_ansatz_partial_with_hints():
    H = [(w1 + wb2) * (w1 + P("w2")), (w1 + wb2) * (P("w2") + wb2)]
    sol = ansatz_gradient_solve(system("total_partial.sys"), CylindricalityProfile.parse("w1, ~w2"), "partial", 2, H)
    (form,) = sol.forms()
    assert form == PfaffForm({"w1": 1, "~w2": 1})


def test_partial_role_requires_rhs():
    with pytest.raises(ValueError):
        ansatz_gradient_solve(system("total_partial.sys"), CylindricalityProfile.parse("w1, ~w2"), "partial")


# ---------------------------------------------------------------- independence


def test_independence_rank_examples():
    assert independence_rank([PfaffForm({"z1": 1}), PfaffForm({"z2": 1})], ["z1", "z2"]) == 2
    assert independence_rank([PfaffForm({"z1": z1, "~z2": zb2}), PfaffForm({"z1": 2 * z1, "~z2": 2 * zb2})]) == 1
    F1 = DarbouxExpr([(z1, -1), (zb1 - zb2, 1)])
    F2 = DarbouxExpr([(z1, 2), (z2 + zb1 + zb2, 1), (z2 - zb1 - zb2, 1)])
    vs = ["z1", "z2", "~z1", "~z2"]
    assert independence_rank([log_gradient_form(F1, vs), log_gradient_form(F2, vs)], vs) == 2


# ---------------------------------------------------------------- full pipeline


def test_synthesis_results():
    (r,) = synthesize_pfaffian(system("total_first.sys"), CylindricalityProfile.parse("z1, ~w1, ~w2"), "first")
    assert r.potential.exp_part * 2 == z1 * wb1 + wb2**2
    (r,) = synthesize_pfaffian(system("total_multiplier.sys"), CylindricalityProfile.parse("w1"), "multiplier")
    assert r.candidate.expr == DarbouxExpr([(w1, -1)])
