"""
Integrals of R-linear systems from eigenvectors
===============================================

For a system whose coefficients are linear in z and ~z, each operator is a
matrix.  Common eigenvectors give linear partial integrals, and Jordan
chains give rational functions with constant derivatives.  Combining them
with exponents from a small linear system yields first integrals.
"""

from importlib.resources import files

from rdiffsys import eigen_decompose, exponent_nullspace, load, spectral_synthesis

DATA = files("rdiffsys") / "data"

# Two commuting diagonalizable matrices.
rs = load(DATA / "rlinear_diagonal.sys").system()
for j, A in enumerate(rs.matrices, start=1):
    print(f"A{j} =", [[str(x) for x in row] for row in A])

# Common eigenvectors with one eigenvalue per matrix.
chains = eigen_decompose(rs)
for c in chains:
    print("nu =", [str(x) for x in c.nu0], "lambda =", [str(x) for x in c.eigenvalues_by_operator])

# Exponents h with sum_theta lambda_theta^j h_theta = 0 for every j.
table = [[c.eigenvalues_by_operator[j] for c in chains[:3]] for j in range(rs.m)]
print("h basis:", [[str(x) for x in h] for h in exponent_nullspace(table)])

# The whole pipeline keeps a functionally independent set.
rep = spectral_synthesis(rs)
for it in rep.integrals:
    print("chains", [i + 1 for i in it.chain_indices], "->", it.expr)

# A system whose first matrix is a single 4x4 Jordan block.
s = load(DATA / "rlinear_jordan.sys").system()
rep = spectral_synthesis(s, zeta=0)
(chain,) = rep.chains
print("chain length:", chain.multiplicity)
(pc,) = rep.psis
for eta, psi in enumerate(pc.psis, start=1):
    print(f"Psi_{eta} =", psi)
print("derivatives under each operator:", [[str(x) for x in row] for row in pc.mus])
for it in rep.integrals:
    print("h =", [str(x) for x in it.h], "->", it.expr)

# Generalized eigenvectors are not unique.  A chain given in the data file
# is checked exactly and used instead; Psi_1 then changes by a constant.
sf = load(DATA / "rlinear_jordan.sys")
rep = spectral_synthesis(s, zeta=0, chain_hints=sf.hints.chains)
print("Psi_1 from the given chain =", rep.psis[0].psis[0])
