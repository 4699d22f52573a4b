import random
from collections import Counter
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dsr_analyzer.cyclecheck import (
    CAP_EXCEEDED, SATISFIED, VIOLATED_E_NOT_S, VIOLATED_STR, Cycle, CycleCapExceeded,
    check_condition_star, classify, enumerate_cycles, s_to_r_intersection,
)
from dsr_analyzer.dsrgraph import INF, Direction, DsrEdge, DsrGraph, build_dsr
from dsr_analyzer.netmodel import compile_to_matrices
from dsr_analyzer.oracle import naive_cycle_enumerator, random_qual_matrix
from dsr_analyzer.qualmat import QualMatrix
from dsr_analyzer.verdict import dsr_pair


def graph_of(model):
    s, v = compile_to_matrices(model)
    return build_dsr(*dsr_pair(s, v), model.species_names(), model.interaction_names())


def ring(labels, signs, direction=Direction.BOTH):
    """A single cycle S0-R0-S1-R1-...; edge k joins S(ceil(k/2)) and R(k//2)."""
    n = len(labels) // 2
    edges = []
    for k, (lab, sg) in enumerate(zip(labels, signs)):
        i = (k + 1) // 2 % n
        edges.append(DsrEdge(i, k // 2, sg, lab, direction))
    edges.sort(key=DsrEdge.sort_key)
    return DsrGraph(tuple(f"S{i}" for i in range(n)), tuple(f"R{j}" for j in range(n)), tuple(edges))


def names(g, c):
    return [g.species_names[i] if t == 0 else g.interaction_names[i] for t, i in c.vertices]


class TestEnumerate:
    def test_repressilator_single_long_cycle(self, fixture_model):
        cycles = enumerate_cycles(graph_of(fixture_model("repressilator")))
        assert len(cycles) == 1 and len(cycles[0]) == 12

    def test_catalyst_graph_has_no_cycles(self, fixture_model):
        assert enumerate_cycles(graph_of(fixture_model("srone"))) == []

    def test_unsigned_influence_makes_short_cycle(self):
        s = QualMatrix.from_concrete([[1]])
        v = QualMatrix.build([["?"]])
        (c,) = enumerate_cycles(build_dsr(*dsr_pair(s, v)))
        assert len(c) == 2

    def test_single_edge_is_not_a_cycle(self):
        g = build_dsr(QualMatrix.from_concrete([[1]]), QualMatrix.from_concrete([[1]]))
        assert enumerate_cycles(g) == []

    def test_deterministic(self, fixture_model):
        g = graph_of(fixture_model("tca_d"))
        assert enumerate_cycles(g) == enumerate_cycles(g)

    def test_cap(self, fixture_model):
        g = graph_of(fixture_model("tca_d"))
        with pytest.raises(CycleCapExceeded):
            enumerate_cycles(g, cap=3)
        assert check_condition_star(g, cap=3).status == CAP_EXCEEDED


class TestClassify:
    def test_short_cycle_is_e_not_s(self):
        s = QualMatrix.from_concrete([[1]])
        v = QualMatrix.build([["?"]])
        (c,) = enumerate_cycles(build_dsr(*dsr_pair(s, v)))
        k = classify(c)
        assert k.is_e_cycle and k.stoich == INF and not k.is_es_cycle

    def test_hand_evaluated_four_cycle(self):
        g = ring([1, 2, 1, 1], [1, 1, 1, 1])
        (c,) = enumerate_cycles(g)
        k = classify(c)
        assert (k.sign, k.parity, k.stoich) == (1, 1, 1)
        assert not k.is_s_cycle

    def test_orientation_es_cycle(self, fixture_model):
        g = graph_of(fixture_model("orientation"))
        found = {tuple(names(g, c)): classify(c) for c in enumerate_cycles(g)}
        k = found[("S1", "R1", "S2", "R2")]
        assert k.is_es_cycle and k.stoich == 0

    def test_parity_dichotomy(self, fixture_model):
        for c in enumerate_cycles(graph_of(fixture_model("tca_d"))):
            k = classify(c)
            assert k.parity in (1, -1) and k.is_e_cycle != k.is_o_cycle


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([Fraction(1), Fraction(2), Fraction(1, 3), INF]),
                          st.sampled_from([1, -1])), min_size=4, max_size=8).filter(lambda x: len(x) % 2 == 0),
       st.integers(0, 7))
def test_classification_ignores_start(edges, shift):
    labels, signs = zip(*edges)
    (c,) = enumerate_cycles(ring(list(labels), list(signs)))
    r = shift % len(c)
    rotated = Cycle(c.vertices[r:] + c.vertices[:r], c.edge_ids[r:] + c.edge_ids[:r],
                    c.edges[r:] + c.edges[:r])
    assert classify(rotated) == classify(c)


def _random_pair(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 4), rng.randint(1, 4)
    a = random_qual_matrix(rng, n, m, p_zero=0.45, p_unsigned=0.15, p_fixed=0.7)
    b = random_qual_matrix(rng, n, m, p_zero=0.45, p_unsigned=0.15)
    return rng, a, b


def _signature(g):
    return Counter((len(c), classify(c).sign, classify(c).stoich) for c in enumerate_cycles(g))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_vertex_order_does_not_matter(seed):
    rng, a, b = _random_pair(seed)
    rows, cols = list(range(a.rows)), list(range(a.cols))
    rng.shuffle(rows)
    rng.shuffle(cols)
    assert _signature(build_dsr(a, b)) == _signature(build_dsr(a.submatrix(rows, cols), b.submatrix(rows, cols)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_orienting_an_edge_never_adds_cycles(seed):
    rng, a, b = _random_pair(seed)
    g = build_dsr(a, b)
    undirected = [k for k, e in enumerate(g.edges) if e.direction is Direction.BOTH]
    if not undirected:
        return
    k = rng.choice(undirected)
    edges = list(g.edges)
    edges[k] = replace(edges[k], direction=rng.choice([Direction.RTOS, Direction.STOR]))
    refined = replace(g, edges=tuple(edges))
    before = {c.edge_set for c in enumerate_cycles(g)}
    assert {c.edge_set for c in enumerate_cycles(refined)} <= before


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_matches_naive_enumerator(seed):
    _, a, b = _random_pair(seed)
    g = build_dsr(a, b)
    assert enumerate_cycles(g) == naive_cycle_enumerator(g)


class TestIntersection:
    def test_failed_pair_shares_one_edge(self, fixture_model):
        g = graph_of(fixture_model("storeq"))
        c, d = enumerate_cycles(g)
        hit = s_to_r_intersection(c, d)
        assert hit
        assert [[g.edge_name(k) for k in comp] for comp in hit.components] == [["S3-R3"]]

    def test_orientation_pair_incompatible(self, fixture_model):
        g = graph_of(fixture_model("orientation"))
        es = [c for c in enumerate_cycles(g) if classify(c).is_es_cycle]
        assert len(es) == 2
        hit = s_to_r_intersection(*es)
        assert not hit and hit.reason == "incompatible-orientation"

    def test_disjoint(self):
        a = QualMatrix.from_concrete([[1, 0], [0, 1]])
        b = QualMatrix.build([["?", 0], [0, "?"]])
        c, d = enumerate_cycles(build_dsr(a, b))
        assert s_to_r_intersection(c, d).reason == "disjoint"

    def test_self_comparison_rejected(self, fixture_model):
        (c,) = enumerate_cycles(graph_of(fixture_model("repressilator")))
        with pytest.raises(ValueError):
            s_to_r_intersection(c, c)


class TestConditionStar:
    @pytest.mark.parametrize("name", ["tca_a", "tca_b", "tca_c", "orientation", "repressilator"])
    def test_satisfied(self, fixture_model, name):
        assert check_condition_star(graph_of(fixture_model(name))).status == SATISFIED

    def test_tca_d(self, fixture_model):
        g = graph_of(fixture_model("tca_d"))
        r = check_condition_star(g)
        assert r.status == VIOLATED_E_NOT_S
        wanted = {"OAA", "R6", "FUM", "R7", "MAL", "R8", "NADH", "R3", "αKG", "R9"}
        assert any(set(names(g, c)) == wanted for c in r.bad_cycles)
        assert r.witnesses[0] in r.bad_cycles

    def test_failed_pair(self, fixture_model):
        r = check_condition_star(graph_of(fixture_model("storeq")))
        assert r.status == VIOLATED_STR and len(r.witnesses) == 2

    def test_ecycle_cap(self, fixture_model):
        r = check_condition_star(graph_of(fixture_model("storeq")), ecycle_cap=1)
        assert r.status == CAP_EXCEEDED

    def test_empty_graph(self):
        assert check_condition_star(build_dsr(QualMatrix.zeros(1, 0), QualMatrix.zeros(1, 0))).satisfied
