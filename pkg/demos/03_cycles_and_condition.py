"""
Cycles and Condition (*)
========================

Four stages of a TCA cycle model. The first three satisfy Condition (*),
so their Jacobians are P0^(-) and multiple equilibria are excluded. The
fourth adds NAD/NADH coupling and picks up e-cycles whose stoichiometry
does not cancel.
"""

from _paths import read
from dsr_analyzer.dsrgraph import format_label
from dsr_analyzer.netmodel import parse_network
from dsr_analyzer.verdict import analyze

for stage in "abcd":
    report = analyze(parse_network(read(f"tca_{stage}")))
    star = report.star
    print(f"stage {stage}: {len(star.cycles)} cycles, {len(star.e_cycles)} e-cycles -> {star.status}")
    for cycle, kind in zip(star.cycles, star.classes):
        if kind.is_e_cycle:
            print(f"    {kind.kind}  stoich {format_label(kind.stoich):>4}  {cycle.describe(report.graph)}")

# The pair test: two es-cycles sharing edges only matter if they can be
# oriented compatibly and every shared piece has odd length.
report = analyze(parse_network(read("storeq")))
c, d = report.star.witnesses
print("failed pair:", c.describe(report.graph), "and", d.describe(report.graph))
print("shared:", [[report.graph.edge_name(k) for k in comp] for comp in report.star.components])
