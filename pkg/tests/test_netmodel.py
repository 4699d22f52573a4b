from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dsr_analyzer.dsrgraph import Direction, build_dsr
from dsr_analyzer.cyclecheck import classify, enumerate_cycles
from dsr_analyzer.netmodel import (
    ParseError, compile_to_matrices, model_from_matrices, parse_network, render,
    trivial_decomposition,
)
from dsr_analyzer.qualmat import QualMatrix, Sign
from dsr_analyzer.verdict import dsr_pair


def matrices(text):
    return compile_to_matrices(parse_network(text))


class TestParse:
    def test_reversible_pair(self):
        m = parse_network("species A B\nreaction R1: A <-> B")
        assert m.stoich[(0, 0)].fixed == -1 and m.stoich[(1, 0)].fixed == 1
        assert m.influence == {(0, 0): Sign.POS, (1, 0): Sign.NEG}

    def test_species_only(self):
        m = parse_network("species X")
        s, v = compile_to_matrices(m)
        assert s.shape == (1, 0) and v.shape == (0, 1)
        assert m.influence == {}

    def test_catalyst_is_unsigned(self):
        m = parse_network("species A C B D\nreaction R1: A + C <-> B + C\nreaction R2: C <-> D")
        assert (1, 0) not in m.stoich
        assert m.influence[(1, 0)] is Sign.UNSIGNED

    def test_irreversible_products_have_no_influence(self):
        s, v = matrices("species C A B\nreaction R1: C -> A + B")
        assert [str(e) for e in v.entries[0]] == ["+", "0", "0"]
        g = build_dsr(*dsr_pair(s, v))
        dirs = {(e.species, e.direction) for e in g.edges}
        assert dirs == {(0, Direction.BOTH), (1, Direction.RTOS), (2, Direction.RTOS)}

    def test_coefficients_are_rational(self):
        s, _ = matrices("species A B\nreaction R1: 3/2 A + A -> 2 B")
        assert s[0, 0].fixed == Fraction(-5, 2) and s[1, 0].fixed == 2

    def test_modulate_overrides(self):
        m = parse_network("species A B\nreaction R1: A -> B\nmodulate R1: B : -")
        assert m.influence[(1, 0)] is Sign.NEG

    def test_outflows(self):
        assert parse_network("species A B\noutflows all").outflows == {0, 1}
        assert parse_network("species A B\noutflows B").outflows == {1}
        assert parse_network("species A B").outflows == frozenset()

    def test_declaration_order(self):
        m = parse_network("species Z Y X\nreaction Q: X -> Y\nreaction P: Z -> X")
        assert m.species_names() == ["Z", "Y", "X"]
        assert m.interaction_names() == ["Q", "P"]

    def test_comments_and_blank_lines(self):
        m = parse_network("# header\n\nspecies A  # trailing\n")
        assert m.species_names() == ["A"]

    def test_explicit_matrices(self):
        s, v = matrices("species S1 S2\ninteractions R1\nmatrix S:\n -1\n 2\nmatrix V:\n + ?")
        assert s[1, 0].fixed == 2
        assert v[0, 1].sign is Sign.UNSIGNED

    def test_rational_v_entry_keeps_sign_only(self):
        _, v = matrices("species A\ninteractions R1\nmatrix S:\n -1\nmatrix V:\n 3/4")
        assert v[0, 0].sign is Sign.POS and v[0, 0].fixed is None

    def test_jacobian_mode(self):
        s, v = matrices("species A B\nmatrix J:\n - +\n + -")
        assert s.sign_pattern() == ("-+", "+-")
        assert v[0, 0].fixed == 1 and v[0, 1].is_zero


class TestParseErrors:
    @pytest.mark.parametrize("text, line, col", [
        ("species A A", 1, 11),
        ("species A\nreaction R1: A -> Q", 2, 19),
        ("species A\nreaction R1: 0 A -> A", 2, 14),
        ("species A\nreaction R1: -1 A -> A", 2, 14),
        ("species A B\nreaction R1: A -> B\nreaction R1: B -> A", 3, 10),
        ("species A\nreaction R1: A -> A -> A", 2, 13),
        ("spices A", 1, 1),
    ])
    def test_located(self, text, line, col):
        with pytest.raises(ParseError) as info:
            parse_network(text)
        assert (info.value.line, info.value.col) == (line, col)

    def test_conflicting_modulators(self):
        with pytest.raises(ParseError) as info:
            parse_network("species A B\nreaction R1: A -> B\nmodulate R1: B : +\nmodulate R1: B : -")
        assert info.value.line == 4

    def test_reactions_and_matrices_exclusive(self):
        with pytest.raises(ParseError):
            parse_network("species A\nreaction R1: A ->\nmatrix S:\n 1\nmatrix V:\n +")

    def test_message_has_location(self):
        with pytest.raises(ParseError, match=r"line 1, col 1"):
            parse_network("bogus")


def test_trivial_decomposition_zero_jacobian():
    s, v = trivial_decomposition(QualMatrix.zeros(2, 2))
    g = build_dsr(*dsr_pair(s, v))
    assert all(e.direction is Direction.STOR for e in g.edges)
    assert sorted((e.species, e.interaction) for e in g.edges) == [(0, 0), (1, 1)]


def test_trivial_decomposition_negative_diagonal():
    s, v = trivial_decomposition(QualMatrix.build([["-", 0, 0], [0, "-", 0], [0, 0, "-"]]))
    g = build_dsr(*dsr_pair(s, v))
    assert len(g.edges) == 3 and enumerate_cycles(g) == []


def test_trivial_decomposition_rejects_rectangular():
    with pytest.raises(ValueError):
        trivial_decomposition(QualMatrix.zeros(2, 3))


def test_trivial_three_species_has_no_e_cycles(fixture_model):
    s, v = compile_to_matrices(fixture_model("trivial_3species"))
    cycles = enumerate_cycles(build_dsr(*dsr_pair(s, v)))
    assert cycles and not any(classify(c).is_e_cycle for c in cycles)


NAMES = ["A", "B", "C", "D"]
term = st.tuples(st.sampled_from(["", "2 ", "1/2 ", "3 "]), st.sampled_from(NAMES))
side = st.lists(term, max_size=3)


@st.composite
def dsl_documents(draw):
    lines = ["species " + " ".join(NAMES)]
    for j in range(draw(st.integers(0, 4))):
        left, right = draw(side), draw(side)
        arrow = draw(st.sampled_from(["->", "<->"]))
        fmt = lambda xs: " + ".join(c + x for c, x in xs)
        lines.append(f"reaction R{j}: {fmt(left)} {arrow} {fmt(right)}")
        if draw(st.booleans()):
            lines.append(f"modulate R{j}: {draw(st.sampled_from(NAMES))} : {draw(st.sampled_from('+-?'))}")
    lines.append("outflows " + draw(st.sampled_from(["all", "none", "A C"])))
    return "\n".join(lines)


@settings(max_examples=200, deadline=None)
@given(dsl_documents())
def test_render_round_trip(text):
    try:
        model = parse_network(text)
    except ParseError:
        return  # e.g. a modulate line repeated with a different sign
    again = parse_network(render(model))
    assert compile_to_matrices(again) == compile_to_matrices(model)
    assert again.outflows == model.outflows
    assert again.species_names() == model.species_names()


entry = st.sampled_from(["0", "+", "-", "?"])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_render_round_trip_matrices(n, m, data):
    s = QualMatrix.build([[data.draw(st.sampled_from([0, 1, -2, Fraction(1, 3)])) for _ in range(m)]
                          for _ in range(n)], cols=m)
    v = QualMatrix.build([[data.draw(entry) for _ in range(n)] for _ in range(m)], cols=n)
    model = model_from_matrices(s, v)
    assert compile_to_matrices(parse_network(render(model))) == (s, v)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(NAMES), st.sampled_from(NAMES)), min_size=1, max_size=4))
def test_reversible_networks_have_opposite_signs(pairs):
    lines = ["species " + " ".join(NAMES)]
    lines += [f"reaction R{j}: {a} <-> {b}" for j, (a, b) in enumerate(pairs) if a != b]
    s, v = matrices("\n".join(lines))
    for i in range(s.rows):
        for j in range(s.cols):
            if not s[i, j].is_zero:
                assert v[j, i].sign is -s[i, j].sign


def test_parse_is_deterministic(fixture_model):
    assert fixture_model("tca_d") == fixture_model("tca_d")
