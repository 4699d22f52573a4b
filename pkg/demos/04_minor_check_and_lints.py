"""
Checking minors directly
========================

Condition (*) is sufficient. When it fails, comparing signs of matched
minors of S and V can settle the question in either direction, at a cost
that grows with C(n+m, n).
"""

from _paths import read
from dsr_analyzer.netmodel import compile_to_matrices, parse_network
from dsr_analyzer.verdict import check_genlem, genlem_cost, lint_motifs

S, V = compile_to_matrices(parse_network(read("storeq")))
result = check_genlem(S, V)
w = result.witness
print("status:", result.status)
print(f"rows {w.delta} cols {w.gamma}: S minor {w.s_sign.value}, V minor {w.v_sign.value}")
print("assumptions:", result.assumptions)
print("pairs visited:", result.pairs_checked, "of at most", genlem_cost(S.rows, S.cols))

# Some local patterns already rule out P0^(-) Jacobians.
for name in ("tworeac", "srone"):
    S, V = compile_to_matrices(parse_network(read(name)))
    found = lint_motifs(S, V)
    print(f"{name}: {[f.text for f in found] or 'no findings'}")

S, V = compile_to_matrices(parse_network("species A B\nreaction R1: A -> B\nmodulate R1: A : ?"))
print("unsigned self-influence:", [f.kind for f in lint_motifs(S, V)])
