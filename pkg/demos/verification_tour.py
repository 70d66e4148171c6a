"""
Checking integrals of a total system
====================================

Load a system from the bundled data files, test complete solvability and
verify candidate integrals exactly.
"""

from importlib.resources import files

from rdiffsys import (
    CylindricalityProfile,
    IntegralCandidate,
    RRational,
    frobenius_check,
    load,
    necessary_condition_report,
    parse_expr,
    verify_first_integral,
    verify_last_multiplier,
    verify_partial_integral,
)
from rdiffsys.integrals import operators_of

DATA = files("rdiffsys") / "data"

# A total system in one independent and two dependent variables.
sf = load(DATA / "total_first.sys")
s = sf.system()
print(s)

# It is not completely solvable: the compatibility identities leave residues.
rep = frobenius_check(s)
print("completely solvable:", rep.passed)
for failure in rep.failures:
    print("  ", failure)

# Still, it has a polynomial first integral.
ops = operators_of(s)
F = parse_expr("z1*~w1 + ~w2^2")
res = verify_first_integral(ops, IntegralCandidate(F, "first"))
print("F =", F, "->", res.ok)

# A wrong guess shows its logarithmic residual per operator.
res = verify_first_integral(ops, IntegralCandidate(parse_expr("z1"), "first"))
print("z1 ->", res.ok, [str(r) for r in res.residuals])

# Partial integrals come with their cofactors.
ops = operators_of(load(DATA / "total_partial.sys").system())
f = parse_expr("w1 + ~w2")
res = verify_partial_integral(ops, IntegralCandidate(f, "partial"))
for j, (alpha, beta) in enumerate(res.cofactors, start=1):
    print(f"operator {j}: alpha = {alpha}, beta = {beta}")

# The Wronskian test for an (w1, ~w2)-cylindrical partial integral.
report = necessary_condition_report(
    load(DATA / "total_partial.sys").system(), CylindricalityProfile.parse("w1, ~w2"), "partial", f
)
for row in report.rows:
    print(f"  W[{row.variable}] of operator {row.operator} = {row.wronskian}  [{row.tag}]")

# Last multipliers.
ops = operators_of(load(DATA / "total_multiplier.sys").system())
print("1/w1 multiplier:", verify_last_multiplier(ops, IntegralCandidate(RRational(1, parse_expr("w1")), "multiplier")).ok)
