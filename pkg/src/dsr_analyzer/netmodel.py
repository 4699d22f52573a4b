"""Network descriptions: the line-oriented DSL, explicit matrices, and compilation to (S, V).

Two kinds of input are accepted.

Reaction mode::

    species A B C
    reaction R1: A + 2 C <-> B
    modulate R1: B : -
    outflows all

Matrix mode, where S and V are given directly (``V`` is interactions by
species)::

    species X Y
    interactions R1
    matrix S:
      -1
       1
    matrix V:
      + -

A third form, ``matrix J:``, supplies a qualitative Jacobian and is compiled
through :func:`trivial_decomposition`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .qualmat import QualEntry, QualMatrix, Sign

__all__ = [
    "ParseError",
    "SpeciesId",
    "InteractionId",
    "Reaction",
    "NetworkModel",
    "parse_network",
    "compile_to_matrices",
    "trivial_decomposition",
    "render",
    "model_from_matrices",
]

DSL = "dsl"
EXPLICIT = "explicit-matrices"
JACOBIAN = "jacobian"

KEYWORDS = ("species", "interactions", "reaction", "modulate", "outflows", "matrix")

_NAME = re.compile(r"[^\W\d]\w*")
_NUMBER = r"[-+]?(?:\d+(?:/\d+)?|\d*\.\d+)"
_TERM = re.compile(rf"\s*(?:(?P<coef>{_NUMBER})\s*)?(?P<name>\w+)\s*$")
_ENTRY = re.compile(rf"{_NUMBER}|[-+?]")


class ParseError(ValueError):
    """Malformed network document. ``line`` and ``col`` are 1-based."""

    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SpeciesId:
    index: int
    name: str


@dataclass(frozen=True)
class InteractionId:
    index: int
    name: str


@dataclass(frozen=True)
class Reaction:
    """A parsed reaction line; sides map species index to coefficient."""

    name: str
    reactants: Tuple[Tuple[int, Fraction], ...]
    products: Tuple[Tuple[int, Fraction], ...]
    reversible: bool


@dataclass(frozen=True)
class NetworkModel:
    """A network ready for compilation.

    ``stoich[(i, j)]`` is the (i, j) entry of S and ``influence[(i, j)]`` the
    sign of ``V[j][i]``, the sensitivity of interaction ``j`` to species
    ``i``. Missing keys mean zero. In reaction mode every stoichiometric entry
    is a fixed rational; matrix mode may also use sign symbols.
    """

    species: Tuple[SpeciesId, ...]
    interactions: Tuple[InteractionId, ...]
    stoich: Mapping[Tuple[int, int], QualEntry] = field(default_factory=dict)
    influence: Mapping[Tuple[int, int], Sign] = field(default_factory=dict)
    outflows: FrozenSet[int] = frozenset()
    source_mode: str = DSL
    reactions: Tuple[Reaction, ...] = ()
    modulators: Tuple[Tuple[int, int, Sign], ...] = ()  # (interaction, species, sign)
    influence_values: Mapping[Tuple[int, int], QualEntry] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def m(self) -> int:
        return len(self.interactions)

    def species_names(self) -> List[str]:
        return [s.name for s in self.species]

    def interaction_names(self) -> List[str]:
        return [r.name for r in self.interactions]


# -- parsing ----------------------------------------------------------------


@dataclass
class _Line:
    number: int
    text: str  # comment stripped, right-trimmed
    indent: int


def _lines(text: str) -> List[_Line]:
    out = []
    for k, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            out.append(_Line(k, body, len(body) - len(body.lstrip())))
    return out


def _names(line: _Line, start: int) -> List[Tuple[str, int]]:
    """Whitespace-separated names after column offset ``start``."""
    found = []
    for mt in re.finditer(r"\S+", line.text[start:]):
        tok = mt.group()
        col = start + mt.start() + 1
        if not _NAME.fullmatch(tok):
            raise ParseError(f"invalid name {tok!r}", line.number, col)
        found.append((tok, col))
    return found


def _fraction(tok: str, line: int, col: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"invalid number {tok!r}", line, col) from None


class _Parser:
    def __init__(self, text: str):
        self.lines = _lines(text)
        self.species: Dict[str, int] = {}
        self.interactions: Dict[str, int] = {}
        self.reactions: List[Reaction] = []
        self.modulators: Dict[Tuple[int, int], Tuple[Sign, int]] = {}
        self.matrices: Dict[str, Tuple[List[List[QualEntry]], int]] = {}
        self.outflow_spec: Optional[Tuple[_Line, int]] = None
        self.interaction_line: Optional[int] = None

    def run(self) -> NetworkModel:
        pos = 0
        while pos < len(self.lines):
            line = self.lines[pos]
            word = line.text.split(None, 1)[0]
            col = line.indent + 1
            head = word.rstrip(":")
            if head not in KEYWORDS:
                raise ParseError(f"unexpected {word!r}; expected one of {', '.join(KEYWORDS)}",
                                 line.number, col)
            pos += 1
            if head == "matrix":
                pos = self._matrix(line, pos)
            else:
                getattr(self, "_" + head)(line, line.indent + len(head))
        return self._finish()

    def _declare(self, table: Dict[str, int], kind: str, line: _Line, start: int):
        names = _names(line, start)
        if not names:
            raise ParseError(f"{kind} line declares nothing", line.number, start + 1)
        for name, col in names:
            if name in table:
                raise ParseError(f"duplicate {kind} name {name!r}", line.number, col)
            table[name] = len(table)

    def _species(self, line: _Line, start: int):
        self._declare(self.species, "species", line, start)

    def _interactions(self, line: _Line, start: int):
        if self.interaction_line is None:
            self.interaction_line = line.number
        self._declare(self.interactions, "interaction", line, start)

    def _label(self, line: _Line, start: int, what: str) -> Tuple[str, int]:
        rest = line.text[start:]
        mt = re.match(r"\s*(\S+?)\s*:", rest)
        if not mt:
            raise ParseError(f"expected '{what} <id>:'", line.number, start + 1)
        name = mt.group(1)
        col = start + mt.start(1) + 1
        if not _NAME.fullmatch(name):
            raise ParseError(f"invalid name {name!r}", line.number, col)
        return name, start + mt.end()

    def _reaction(self, line: _Line, start: int):
        name, pos = self._label(line, start, "reaction")
        if name in self.interactions:
            raise ParseError(f"duplicate interaction name {name!r}", line.number,
                             line.text.index(name, start) + 1)
        body = line.text[pos:]
        arrows = [(mt.start(), mt.group()) for mt in re.finditer(r"<->|->", body)]
        if len(arrows) != 1:
            raise ParseError("reaction needs exactly one '->' or '<->'", line.number, pos + 1)
        at, arrow = arrows[0]
        lhs = self._side(line, body[:at], pos)
        rhs = self._side(line, body[at + len(arrow):], pos + at + len(arrow))
        self.interactions[name] = len(self.interactions)
        self.reactions.append(Reaction(name, lhs, rhs, arrow == "<->"))

    def _side(self, line: _Line, text: str, offset: int) -> Tuple[Tuple[int, Fraction], ...]:
        if not text.strip():
            return ()
        coeffs: Dict[int, Fraction] = {}
        pstart = 0
        for piece in text.split("+"):
            here, pstart = pstart, pstart + len(piece) + 1
            col = offset + here + (len(piece) - len(piece.lstrip())) + 1
            mt = _TERM.match(piece)
            if not mt:
                raise ParseError(f"malformed term {piece.strip()!r}", line.number, col)
            coef = Fraction(1)
            if mt.group("coef") is not None:
                coef = _fraction(mt.group("coef"), line.number, col)
                if coef <= 0:
                    raise ParseError(
                        f"stoichiometric coefficient must be a positive rational, got {mt.group('coef')}",
                        line.number, col)
            name = mt.group("name")
            name_col = offset + here + mt.start("name") + 1
            if not _NAME.fullmatch(name):
                raise ParseError(f"invalid species name {name!r}", line.number, name_col)
            if name not in self.species:
                raise ParseError(f"unknown species {name!r}", line.number, name_col)
            i = self.species[name]
            coeffs[i] = coeffs.get(i, Fraction(0)) + coef
        return tuple(coeffs.items())

    def _modulate(self, line: _Line, start: int):
        name, pos = self._label(line, start, "modulate")
        if name not in self.interactions:
            raise ParseError(f"unknown interaction {name!r}", line.number,
                             line.text.index(name, start) + 1)
        mt = re.fullmatch(r"\s*(\S+)\s*:\s*(\S+)\s*", line.text[pos:])
        if not mt:
            raise ParseError("expected 'modulate <id>: <species> : (+|-|?)'", line.number, pos + 1)
        sp, sym = mt.group(1), mt.group(2)
        if sp not in self.species:
            raise ParseError(f"unknown species {sp!r}", line.number, pos + mt.start(1) + 1)
        if sym not in ("+", "-", "?"):
            raise ParseError(f"influence sign must be +, - or ?, got {sym!r}",
                             line.number, pos + mt.start(2) + 1)
        key = (self.interactions[name], self.species[sp])
        sign = Sign(sym)
        if key in self.modulators and self.modulators[key][0] is not sign:
            raise ParseError(
                f"conflicting influence of {sp!r} on {name!r} (first given on line {self.modulators[key][1]})",
                line.number, pos + mt.start(2) + 1)
        self.modulators.setdefault(key, (sign, line.number))

    def _outflows(self, line: _Line, start: int):
        if self.outflow_spec is not None:
            raise ParseError("outflows given twice", line.number, line.indent + 1)
        self.outflow_spec = (line, start)

    def _matrix(self, line: _Line, pos: int) -> int:
        mt = re.fullmatch(r"\s*matrix\s+([SVJ])\s*:\s*", line.text)
        if not mt:
            raise ParseError("expected 'matrix S:', 'matrix V:' or 'matrix J:'",
                             line.number, line.indent + 1)
        which = mt.group(1)
        if which in self.matrices:
            raise ParseError(f"matrix {which} given twice", line.number, line.indent + 1)
        rows: List[List[QualEntry]] = []
        while pos < len(self.lines):
            row_line = self.lines[pos]
            if row_line.text.split(None, 1)[0].rstrip(":") in KEYWORDS:
                break
            rows.append(self._row(row_line, which))
            pos += 1
        if not rows:
            raise ParseError(f"matrix {which} has no rows", line.number, line.indent + 1)
        width = len(rows[0])
        for k, r in enumerate(rows):
            if len(r) != width:
                raise ParseError(f"matrix {which}: row {k + 1} has {len(r)} entries, expected {width}",
                                 self.lines[pos - len(rows) + k].number, 1)
        self.matrices[which] = (rows, line.number)
        return pos

    def _row(self, line: _Line, which: str) -> List[QualEntry]:
        out = []
        for mt in re.finditer(r"\S+", line.text):
            tok, col = mt.group(), mt.start() + 1
            if not _ENTRY.fullmatch(tok):
                raise ParseError(f"invalid matrix entry {tok!r}", line.number, col)
            entry = QualEntry.parse(tok if tok in "+-?" else _fraction(tok, line.number, col))
            if which == "V" and entry.fixed is not None:
                entry = entry.without_value()
            out.append(entry)
        return out

    # -- assembly ------------------------------------------------------

    def _finish(self) -> NetworkModel:
        if self.matrices and self.reactions:
            first = min(n for _, n in self.matrices.values())
            raise ParseError("reaction lines and matrix blocks cannot be mixed", first, 1)
        if self.matrices:
            if self.modulators:
                raise ParseError("modulate lines need reaction mode",
                                 min(n for _, n in self.modulators.values()), 1)
            return self._finish_matrices()
        if self.interaction_line is not None:
            raise ParseError("interactions line needs matrix mode", self.interaction_line, 1)
        return self._finish_reactions()

    def _outflows_set(self, names: Sequence[str]) -> FrozenSet[int]:
        if self.outflow_spec is None:
            return frozenset()
        line, start = self.outflow_spec
        toks = _names(line, start)
        words = [t for t, _ in toks]
        if words == ["all"]:
            return frozenset(range(len(names)))
        if words == ["none"]:
            return frozenset()
        if not words:
            raise ParseError("outflows needs 'all', 'none' or species names", line.number, start + 1)
        lookup = {n: k for k, n in enumerate(names)}
        out = set()
        for tok, col in toks:
            if tok not in lookup:
                raise ParseError(f"unknown species {tok!r}", line.number, col)
            out.add(lookup[tok])
        return frozenset(out)

    def _finish_reactions(self) -> NetworkModel:
        species = tuple(SpeciesId(k, n) for n, k in sorted(self.species.items(), key=lambda x: x[1]))
        inter = tuple(InteractionId(j, r.name) for j, r in enumerate(self.reactions))
        stoich: Dict[Tuple[int, int], QualEntry] = {}
        influence: Dict[Tuple[int, int], Sign] = {}
        for j, r in enumerate(self.reactions):
            left, right = dict(r.reactants), dict(r.products)
            for i in set(left) | set(right):
                a, b = left.get(i, Fraction(0)), right.get(i, Fraction(0))
                if a != b:
                    stoich[(i, j)] = QualEntry.const(b - a)
                if a and b:
                    sign = Sign.UNSIGNED if (a == b or r.reversible) else Sign.POS
                elif a:
                    sign = Sign.POS
                else:
                    sign = Sign.NEG if r.reversible else Sign.ZERO
                if sign is not Sign.ZERO:
                    influence[(i, j)] = sign
        for (j, i), (sign, _) in self.modulators.items():
            influence[(i, j)] = sign
        mods = tuple(sorted((j, i, s) for (j, i), (s, _) in self.modulators.items()))
        return NetworkModel(
            species, inter, stoich, influence,
            self._outflows_set([s.name for s in species]), DSL, tuple(self.reactions), mods,
        )

    def _finish_matrices(self) -> NetworkModel:
        keys = set(self.matrices)
        if keys == {"J"}:
            rows, at = self.matrices["J"]
            n = len(rows)
            if len(rows[0]) != n:
                raise ParseError(f"matrix J must be square, got {n}x{len(rows[0])}", at, 1)
            names = self._vertex_names(self.species, "S", n, "species", at)
            model = model_from_matrices(
                QualMatrix.build(rows), QualMatrix.build([[1 if a == b else 0 for b in range(n)]
                                                          for a in range(n)]),
                names, [f"R{k + 1}" for k in range(n)])
            return _replace(model, source_mode=JACOBIAN, outflows=self._outflows_set(names))
        if keys != {"S", "V"}:
            at = min(n for _, n in self.matrices.values())
            raise ParseError("matrix mode needs both 'matrix S:' and 'matrix V:' (or 'matrix J:' alone)",
                             at, 1)
        (s_rows, s_at), (v_rows, v_at) = self.matrices["S"], self.matrices["V"]
        n, m = len(s_rows), len(s_rows[0])
        if (len(v_rows), len(v_rows[0])) != (m, n):
            raise ParseError(f"matrix V must be {m}x{n} to match S ({n}x{m}), "
                             f"got {len(v_rows)}x{len(v_rows[0])}", v_at, 1)
        names = self._vertex_names(self.species, "S", n, "species", s_at)
        rnames = self._vertex_names(self.interactions, "R", m, "interactions", s_at)
        model = model_from_matrices(QualMatrix.build(s_rows), QualMatrix.build(v_rows), names, rnames)
        return _replace(model, outflows=self._outflows_set(names))

    @staticmethod
    def _vertex_names(table: Dict[str, int], prefix: str, count: int, kind: str, at: int) -> List[str]:
        if not table:
            return [f"{prefix}{k + 1}" for k in range(count)]
        if len(table) != count:
            raise ParseError(f"{len(table)} {kind} declared but the matrix needs {count}", at, 1)
        return [n for n, _ in sorted(table.items(), key=lambda x: x[1])]


def _replace(model: NetworkModel, **changes) -> NetworkModel:
    from dataclasses import replace
    return replace(model, **changes)


def parse_network(text: str) -> NetworkModel:
    """Parse a network document.

    Species and interactions are numbered in order of declaration.

    Raises
    ------
    ParseError
        With 1-based line and column of the offending token.
    """
    return _Parser(text).run()


def model_from_matrices(
    s: QualMatrix,
    v: QualMatrix,
    species: Optional[Sequence[str]] = None,
    interactions: Optional[Sequence[str]] = None,
    outflows: FrozenSet[int] = frozenset(),
) -> NetworkModel:
    """Wrap an explicit (S, V) pair as a :class:`NetworkModel`."""
    n, m = s.shape
    if v.shape != (m, n):
        raise ValueError(f"V must be {m}x{n} to match S ({n}x{m}), got {v.rows}x{v.cols}")
    species = list(species) if species is not None else [f"S{k + 1}" for k in range(n)]
    interactions = list(interactions) if interactions is not None else [f"R{k + 1}" for k in range(m)]
    stoich = {(i, j): s[i, j] for i in range(n) for j in range(m) if not s[i, j].is_zero}
    influence = {(i, j): v[j, i].sign for i in range(n) for j in range(m) if not v[j, i].is_zero}
    values = {(i, j): v[j, i] for i in range(n) for j in range(m)
              if v[j, i].is_fixed and not v[j, i].is_zero}
    return NetworkModel(
        tuple(SpeciesId(k, x) for k, x in enumerate(species)),
        tuple(InteractionId(k, x) for k, x in enumerate(interactions)),
        stoich, influence, frozenset(outflows), EXPLICIT, influence_values=values,
    )


# -- compilation --------------------------------------------------------------


def compile_to_matrices(model: NetworkModel) -> Tuple[QualMatrix, QualMatrix]:
    """Return ``(S, V)`` with S of shape n x m and V of shape m x n."""
    n, m = model.n, model.m
    s = QualMatrix.build(
        [[model.stoich.get((i, j), Sign.ZERO) for j in range(m)] for i in range(n)], cols=m)
    v = QualMatrix.build(
        [[model.influence_values.get((i, j)) or model.influence.get((i, j), Sign.ZERO)
          for i in range(n)] for j in range(m)], cols=n)
    return s, v


def trivial_decomposition(j: QualMatrix) -> Tuple[QualMatrix, QualMatrix]:
    """Decompose a Jacobian pattern as ``J = J . I``.

    S is ``J`` itself (declared constants keep their value, sign entries
    stay free) and V is the identity with fixed unit diagonal.
    """
    if j.rows != j.cols:
        raise ValueError(f"trivial decomposition needs a square matrix, got {j.rows}x{j.cols}")
    n = j.rows
    return j, QualMatrix.build([[1 if a == b else 0 for b in range(n)] for a in range(n)], cols=n)


# -- rendering ----------------------------------------------------------------


def _coef(c: Fraction) -> str:
    return "" if c == 1 else f"{c} "


def _side_text(side, names) -> str:
    return " + ".join(f"{_coef(c)}{names[i]}" for i, c in side)


def _matrix_text(label: str, m: QualMatrix) -> List[str]:
    return [f"matrix {label}:"] + ["  " + " ".join(str(e) for e in row) for row in m.entries]


def render(model: NetworkModel) -> str:
    """Emit a canonical document that parses back to the same matrices."""
    names = model.species_names()
    out: List[str] = []
    if names:
        out.append("species " + " ".join(names))
    if model.source_mode == DSL:
        for r in model.reactions:
            arrow = "<->" if r.reversible else "->"
            out.append(f"reaction {r.name}: {_side_text(r.reactants, names)} {arrow} "
                       f"{_side_text(r.products, names)}".rstrip())
        rnames = model.interaction_names()
        for j, i, sign in model.modulators:
            out.append(f"modulate {rnames[j]}: {names[i]} : {sign.value}")
    else:
        s, v = compile_to_matrices(model)
        if model.source_mode == JACOBIAN:
            out += _matrix_text("J", s)
        elif model.n and model.m:
            out.append("interactions " + " ".join(model.interaction_names()))
            out += _matrix_text("S", s)
            out += _matrix_text("V", v)
    if model.outflows:
        if len(model.outflows) == model.n:
            out.append("outflows all")
        else:
            out.append("outflows " + " ".join(names[i] for i in sorted(model.outflows)))
    return "\n".join(out) + "\n"
