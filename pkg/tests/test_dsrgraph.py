import re
from fractions import Fraction

from dsr_analyzer.dsrgraph import (
    INF, Direction, build_dsr, build_sr, export_dot, format_label, graph_to_dict, graph_to_json,
)
from dsr_analyzer.netmodel import compile_to_matrices, parse_network
from dsr_analyzer.qualmat import QualEntry, QualMatrix, Sign
from dsr_analyzer.verdict import dsr_pair


def graph_of(model):
    s, v = compile_to_matrices(model)
    return build_dsr(*dsr_pair(s, v), model.species_names(), model.interaction_names())


class TestSR:
    def test_five_edges_with_one_finite_label(self):
        m = QualMatrix.build([["+", "?"], [2, "+"]])
        g = build_sr(m)
        assert len(g.edges) == 5
        assert sorted(format_label(e.label) for e in g.edges) == ["2", "inf", "inf", "inf", "inf"]
        assert all(e.direction is Direction.BOTH for e in g.edges)

    def test_zero_matrix(self):
        assert build_sr(QualMatrix.zeros(2, 3)).edges == ()

    def test_fixed_column(self):
        g = build_sr(QualMatrix.from_concrete([[-1], [1]]))
        assert [(e.sign, e.label) for e in g.edges] == [(-1, 1), (1, 1)]


class TestDSR:
    def test_orientation_example_directions(self, fixture_model):
        g = graph_of(fixture_model("orientation"))
        directed = sorted(g.edge_name(k) for k, e in enumerate(g.edges)
                          if e.direction is not Direction.BOTH)
        assert directed == ["S1<-R2", "S2<-R1", "S3<-R3"]
        assert len(g.edges) == 7
        assert all(e.label == 1 for e in g.edges if e.direction is not Direction.STOR)

    def test_full_overlap_is_undirected(self):
        a = QualMatrix.from_concrete([[1, 1], [1, 1]])
        g = build_dsr(a, a)
        assert all(e.direction is Direction.BOTH and e.sign == 1 and e.label == 1 for e in g.edges)

    def test_irreversible_panel(self):
        g = graph_of(parse_network("species C A B\nreaction R1: C -> A + B"))
        by_species = {g.species_names[e.species]: e for e in g.edges}
        assert by_species["C"].direction is Direction.BOTH and by_species["C"].sign == -1
        assert by_species["A"].direction is Direction.RTOS and by_species["A"].sign == 1
        assert by_species["B"].direction is Direction.RTOS

    def test_s_to_r_edges_have_infinite_labels(self):
        a = QualMatrix.zeros(1, 1)
        b = QualMatrix.build([["-"]])
        (e,) = build_dsr(a, b).edges
        assert e.direction is Direction.STOR and e.label == INF

    def test_second_labels(self):
        a = QualMatrix.from_concrete([[2]])
        b = QualMatrix.from_concrete([[3]])
        (e,) = build_dsr(a, b, attach_second_labels=True).edges
        assert e.label == 2 and e.second_label == 3

    def test_unsigned_influence_gives_parallel_edges(self, fixture_model):
        g = graph_of(fixture_model("srone"))
        assert g.nS + g.nR == 6
        c = g.species_names.index("C")
        parallel = [g.edges[k] for k in g.edges_between(c, 0)]
        assert sorted(e.sign for e in parallel) == [-1, 1]
        assert all(e.direction is Direction.STOR for e in parallel)


class TestDot:
    def test_edgeless(self):
        text = export_dot(build_sr(QualMatrix.zeros(2, 1)))
        assert "->" not in text
        assert text.count("shape=ellipse") == 2 and text.count("shape=box") == 1

    def test_no_vertices(self):
        text = export_dot(build_sr(QualMatrix.zeros(0, 0)))
        assert text.splitlines() == ['digraph "DSR" {', '  node [fontname="Helvetica"];', "}"]

    def test_natural_pair_is_a_path(self, fixture_model):
        text = export_dot(graph_of(fixture_model("natural_ab")))
        edges = [l for l in text.splitlines() if "->" in l]
        assert len(edges) == 2
        assert all("dir=none" in l for l in edges)

    def test_repressilator_ring(self, fixture_model):
        g = graph_of(fixture_model("repressilator"))
        assert g.nS + g.nR == 12 and len(g.edges) == 12
        degree = {}
        for e in g.edges:
            for v in (("S", e.species), ("R", e.interaction)):
                degree[v] = degree.get(v, 0) + 1
        assert set(degree.values()) == {2}

    def test_styles_and_labels(self):
        g = build_dsr(QualMatrix.from_concrete([[-2]]), QualMatrix.build([["-"]]))
        line = [l for l in export_dot(g).splitlines() if "->" in l][0]
        assert "style=dashed" in line and 'label="2"' in line and "dir=none" in line

    def test_byte_stable(self, fixture_model):
        assert export_dot(graph_of(fixture_model("tca_d"))) == export_dot(graph_of(fixture_model("tca_d")))

    def test_name_clash_prefixes(self):
        g = build_sr(QualMatrix.from_concrete([[1]]), ["X"], ["X"])
        assert '"S:X"' in export_dot(g) and '"R:X"' in export_dot(g)

    def test_quoting(self):
        g = build_sr(QualMatrix.from_concrete([[1]]), ['a"b'], ["r"])
        assert r'"a\"b"' in export_dot(g)


def test_json_dump(fixture_model):
    g = graph_of(fixture_model("natural_ab"))
    d = graph_to_dict(g)
    assert d["species"] == list(g.species_names)
    assert {e["direction"] for e in d["edges"]} <= {"Both", "RtoS", "StoR"}
    assert graph_to_json(g).endswith("\n")


import random

from hypothesis import given, settings, strategies as st

from dsr_analyzer.oracle import random_qual_matrix


def _pair(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 4)
    a = random_qual_matrix(rng, n, m, p_zero=0.4, p_unsigned=0.2, p_fixed=0.5)
    b = random_qual_matrix(rng, n, m, p_zero=0.4, p_unsigned=0.2)
    return a, b


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_sr_graph_is_subgraph(seed):
    a, b = _pair(seed)
    from_a = sorted((e.species, e.interaction, e.sign, e.label) for e in build_dsr(a, b).edges
                    if e.direction is not Direction.STOR)
    assert from_a == sorted((e.species, e.interaction, e.sign, e.label) for e in build_sr(a).edges)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_swapping_reverses_directions(seed):
    a, b = _pair(seed)
    flip = {Direction.BOTH: Direction.BOTH, Direction.RTOS: Direction.STOR, Direction.STOR: Direction.RTOS}
    ab = sorted((e.species, e.interaction, e.sign, flip[e.direction].value) for e in build_dsr(a, b).edges)
    ba = sorted((e.species, e.interaction, e.sign, e.direction.value) for e in build_dsr(b, a).edges)
    assert ab == ba


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_at_most_two_edges_per_pair(seed):
    a, b = _pair(seed)
    g = build_dsr(a, b)
    for i in range(g.nS):
        for j in range(g.nR):
            assert len(g.edges_between(i, j)) <= 2
