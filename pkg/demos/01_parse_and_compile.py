"""
From a reaction list to (S, V)
==============================

A network document lists species and reactions. Compiling it gives the
stoichiometric matrix S (exact rationals) and the sign pattern of the
rate-sensitivity matrix V.
"""

from dsr_analyzer.netmodel import compile_to_matrices, parse_network, render, trivial_decomposition
from dsr_analyzer.qualmat import QualMatrix

doc = """
species A C B D
reaction R1: A + C <-> B + C
reaction R2: C <-> D
"""
model = parse_network(doc)
S, V = compile_to_matrices(model)
print("species:", model.species_names())
print("S =")
print(S)
print("V =")
print(V)

# C appears on both sides of R1, so its column entry in S is 0 while the
# rate of R1 may depend on C either way: V[R1, C] is '?'.
print("influence of C on R1:", V[0, 1])

# Irreversible products do not feed back on the rate.
S2, V2 = compile_to_matrices(parse_network("species C A B\nreaction R1: C -> A + B"))
print("irreversible V row:", [str(e) for e in V2.entries[0]])

# render() emits a canonical document that parses back to the same matrices.
again = parse_network(render(model))
assert compile_to_matrices(again) == (S, V)
print(render(model))

# A Jacobian sign pattern can also be used directly as J = J * I.
J = QualMatrix.build([["-", "+"], ["+", "-"]])
Sj, Vj = trivial_decomposition(J)
print("trivial decomposition V =")
print(Vj)
