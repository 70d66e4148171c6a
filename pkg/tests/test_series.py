from dataclasses import replace
from math import factorial

import pytest
from hypothesis import assume, given

from rdiffsys import (
    GaussianRational,
    RPoly,
    TotalSystem,
    cauchy_series,
    load,
    parse_system_file,
    residual_check,
    wirt_diff,
)
from rdiffsys.errors import CapabilityError, InputError, NotCompletelySolvable

from conftest import DATA, P, gaussians, polys

G = GaussianRational


def exp_series(name):
    sf = load(DATA / name)
    return sf.system(), sf


def test_exp_z():
    s, _ = exp_series("series_exp.sys")
    ts = cauchy_series(s, {"z1": 0, "w1": 1}, 8)
    for a in range(9):
        for b in range(9 - a):
            expect = G(1) / factorial(a) if b == 0 else G(0)
            assert ts.coefficient((a, b)) == expect
    assert residual_check(s, ts) >= 7


def test_exp_z_plus_conjugate():
    s, _ = exp_series("series_exp2.sys")
    ts = cauchy_series(s, {"z1": 0, "w1": 1}, 6)
    for a in range(7):
        for b in range(7 - a):
            assert ts.coefficient((a, b)) == G(1) / (factorial(a) * factorial(b))
    assert residual_check(s, ts) >= 5


def test_direct_integration():
    s = parse_system_file("kind = total; m = 1; n = 1; X2[1][1] = 1;").system()
    ts = cauchy_series(s, {"z1": 0, "w1": G(2, 3)}, 4)
    assert ts.polynomial(0) == G(2, 3) + P("~z1")
    assert ts.polynomial(1) == G(2, -3) + P("z1")


def test_degree_zero_and_conjugate():
    s, _ = exp_series("series_exp.sys")
    ts = cauchy_series(s, {"z1": G(1, 1), "w1": G(0, 2)}, 3)
    assert ts.coefficients[(0, 0)] == (G(0, 2), G(0, -2))
    assert ts.polynomial(1) == ts.polynomial(0).conjugate()


def test_corrupted_coefficient_detected():
    s, _ = exp_series("series_exp.sys")
    ts = cauchy_series(s, {"z1": 0, "w1": 1}, 8)
    coeffs = dict(ts.coefficients)
    c = coeffs[(3, 0)]
    coeffs[(3, 0)] = (c[0] + 1, c[1])
    assert residual_check(s, replace(ts, coefficients=coeffs)) == 2


def test_zero_system_reports_order():
    s = parse_system_file("kind = total; m = 1; n = 1;").system()
    ts = cauchy_series(s, {"z1": 0, "w1": 5}, 5)
    assert ts.polynomial(0) == RPoly() + 5
    assert residual_check(s, ts) == 5


def test_not_completely_solvable():
    s = load(DATA / "total_first.sys").system()
    with pytest.raises(NotCompletelySolvable):
        cauchy_series(s, {"z1": 0, "w1": 0, "w2": 0}, 2)


def test_rational_coefficients_rejected():
    s = parse_system_file("kind = total; m = 1; n = 1; X1[1][1] = 1/z1;").system()
    with pytest.raises(CapabilityError):
        cauchy_series(s, {"z1": 1, "w1": 0}, 2)


def test_point_must_be_complete():
    s, _ = exp_series("series_exp.sys")
    with pytest.raises(InputError):
        cauchy_series(s, {"z1": 0}, 2)
    with pytest.raises(InputError):
        cauchy_series(s, {"z1": 0, "w1": 1, "~w1": 1}, 2)


# ---------------------------------------------------------------- properties

ZS = ["z1", "z2", "~z1", "~z2"]


def gradient_system(phi: RPoly) -> TotalSystem:
    X1 = ((wirt_diff(phi, "z1"), wirt_diff(phi, "z2")),)
    X2 = ((wirt_diff(phi, "~z1"), wirt_diff(phi, "~z2")),)
    return TotalSystem(2, 1, X1, X2)


@given(polys(ZS, max_deg=3, max_terms=4), gaussians)
def test_gradient_systems_recover_potential(phi, w0):
    # dw = d(phi) through (0, w0) is solved by phi - phi(0) + w0
    s = gradient_system(phi)
    ts = cauchy_series(s, {"z1": 0, "z2": 0, "w1": w0}, 4)
    assert ts.polynomial(0) == phi - phi.constant_term() + w0
    assert ts.polynomial(1) == ts.polynomial(0).conjugate()
    assert residual_check(s, ts) == 4


@given(polys(["z1", "w1"], max_deg=2, max_terms=3), gaussians, gaussians)
def test_nonlinear_series_properties(X, z0, w0):
    s = TotalSystem(1, 1, ((X,),), ((RPoly(),),))
    pt = {"z1": z0, "w1": w0}
    ts = cauchy_series(s, pt, 3)
    # determinism and extension
    again = cauchy_series(s, pt, 3)
    assert again.coefficients == ts.coefficients
    longer = cauchy_series(s, pt, 4)
    low = {b: c for b, c in longer.coefficients.items() if sum(b) <= 3}
    assert low == ts.coefficients
    # conjugate symmetry
    assert ts.polynomial(1) == ts.polynomial(0).conjugate()
    assert residual_check(s, ts) >= 2


@given(polys(["z1", "~z1"], max_deg=2, max_terms=3), polys(["z1", "~z1"], max_deg=2, max_terms=3))
def test_frobenius_gate(a, b):
    # dw = a dz + b d~z in z only is solvable exactly when d~z a = dz b
    s = TotalSystem(1, 1, ((a,),), ((b,),))
    ok = wirt_diff(a, "~z1") == wirt_diff(b, "z1")
    assume(ok or a or b)
    if ok:
        assert residual_check(s, cauchy_series(s, {"z1": 0, "w1": 0}, 3)) >= 2
    else:
        with pytest.raises(NotCompletelySolvable):
            cauchy_series(s, {"z1": 0, "w1": 0}, 3)
