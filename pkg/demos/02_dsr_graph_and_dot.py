"""
DSR graphs and Graphviz output
==============================

The graph is built from the pair (S, -V^T). Edges present in both are
undirected, edges only in S point from interaction to species, edges only
in -V^T point from species to interaction.
"""

import sys

from _paths import read
from dsr_analyzer.dsrgraph import build_dsr, export_dot, format_label
from dsr_analyzer.netmodel import compile_to_matrices, parse_network
from dsr_analyzer.verdict import dsr_pair

model = parse_network(read("orientation"))
S, V = compile_to_matrices(model)
g = build_dsr(*dsr_pair(S, V), model.species_names(), model.interaction_names())

for k, e in enumerate(g.edges):
    print(f"{g.edge_name(k):8s} sign {e.sign:+d}  label {format_label(e.label)}")

# Dashed edges are negative; undirected edges have dir=none.
sys.stdout.write(export_dot(g, "orientation"))
