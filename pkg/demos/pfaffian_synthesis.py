"""
Finding integrals from a gradient ansatz
========================================

Instead of guessing, solve for the gradient of an unknown integral on a
chosen set of variables, then integrate the resulting closed form.
"""

from importlib.resources import files

from rdiffsys import (
    CylindricalityProfile,
    DarbouxExpr,
    integrate_exact,
    load,
    log_gradient_form,
    parse_expr,
    synthesize_pfaffian,
)

DATA = files("rdiffsys") / "data"

# First integrals depending on z1, ~w1 and ~w2 only.
s = load(DATA / "total_first.sys").system()
for item in synthesize_pfaffian(s, CylindricalityProfile.parse("z1, ~w1, ~w2"), "first"):
    print("form:     ", item.form)
    print("integral: ", item.candidate.expr)
    # the exponent is itself a polynomial integral
    print("log:      ", item.potential.exp_part)

# Last multipliers depending on w1 only.
s = load(DATA / "total_multiplier.sys").system()
(item,) = synthesize_pfaffian(s, CylindricalityProfile.parse("w1"), "multiplier")
print("multiplier:", item.candidate.expr)

# Partial integrals need the cofactor products H as input.
sf = load(DATA / "pde_partial.sys")
H = [sf.hints.H[j] for j in sorted(sf.hints.H)]
(item,) = synthesize_pfaffian(sf.system(), CylindricalityProfile.parse("z1, z2"), "partial", 2, H)
print("partial integral:", item.candidate.expr)

# integrate_exact inverts the logarithmic gradient of a Darboux expression.
F = DarbouxExpr([(parse_expr("z1 + 1"), 2), (parse_expr("~z2"), -1)], parse_expr("z1*~z2"))
form = log_gradient_form(F, ["z1", "~z2"])
print("d log F =", form)
print("recovered:", integrate_exact(form))
