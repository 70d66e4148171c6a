"""
Power series through a point
============================

A completely solvable total system has exactly one solution through each
point.  Its Taylor coefficients in z - z0 and ~z - ~z0 follow degree by
degree.
"""

from importlib.resources import files
from math import factorial

from rdiffsys import cauchy_series, load, residual_check

DATA = files("rdiffsys") / "data"

# dw = w dz through w(0) = 1 is the exponential of z.
s = load(DATA / "series_exp.sys").system()
ts = cauchy_series(s, {"z1": 0, "w1": 1}, 8)
for (a, b), k, c in ts.items():
    if k == 0:
        print(f"z^{a} ~z^{b}: {c}  (1/{a}! = 1/{factorial(a)})")

# The conjugate unknown carries the conjugate series.
print("w   =", ts.polynomial(0))
print("~w  =", ts.polynomial(1))

# The residual of the system vanishes through the truncation order.
print("residual degree:", residual_check(s, ts))

# dw = w dz + w d~z gives exp(z + ~z).
s = load(DATA / "series_exp2.sys").system()
ts = cauchy_series(s, {"z1": 0, "w1": 1}, 4)
print("exp(z + ~z) =", ts.polynomial(0))
