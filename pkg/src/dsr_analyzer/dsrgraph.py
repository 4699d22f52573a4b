"""Signed, labelled bipartite multigraphs of species (S) and interaction (R) vertices."""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .qualmat import QualEntry, QualMatrix

__all__ = [
    "Direction",
    "Label",
    "DsrEdge",
    "DsrGraph",
    "INF",
    "build_sr",
    "build_dsr",
    "export_dot",
    "graph_to_dict",
    "format_label",
    "graph_to_json",
]

INF = math.inf
Label = Union[Fraction, float]  # a positive rational, or INF


class Direction(enum.Enum):
    """Which traversals an edge allows."""

    BOTH = "Both"
    RTOS = "RtoS"
    STOR = "StoR"

    @property
    def allows_s_to_r(self) -> bool:
        return self is not Direction.RTOS

    @property
    def allows_r_to_s(self) -> bool:
        return self is not Direction.STOR


_DIR_ORDER = {Direction.BOTH: 0, Direction.RTOS: 1, Direction.STOR: 2}


@dataclass(frozen=True)
class DsrEdge:
    species: int
    interaction: int
    sign: int
    label: Label
    direction: Direction = Direction.BOTH
    second_label: Optional[Label] = field(default=None, compare=False)

    def sort_key(self):
        return (self.species, self.interaction, self.sign, _DIR_ORDER[self.direction])


@dataclass(frozen=True)
class DsrGraph:
    """Bipartite multigraph with edges in canonical order."""

    species_names: Tuple[str, ...]
    interaction_names: Tuple[str, ...]
    edges: Tuple[DsrEdge, ...]
    provenance: str = ""

    @property
    def nS(self) -> int:
        return len(self.species_names)

    @property
    def nR(self) -> int:
        return len(self.interaction_names)

    def edges_between(self, i: int, j: int) -> List[int]:
        return [k for k, e in enumerate(self.edges) if e.species == i and e.interaction == j]

    def edge_name(self, k: int) -> str:
        e = self.edges[k]
        s, r = self.species_names[e.species], self.interaction_names[e.interaction]
        link = {Direction.BOTH: "-", Direction.RTOS: "<-", Direction.STOR: "->"}[e.direction]
        return f"{s}{link}{r}"


def _label(entry: QualEntry) -> Label:
    if entry.fixed is not None and entry.fixed != 0:
        return abs(entry.fixed)
    return INF


def _names(given: Optional[Sequence[str]], prefix: str, count: int) -> Tuple[str, ...]:
    if given is None:
        return tuple(f"{prefix}{k + 1}" for k in range(count))
    if len(given) != count:
        raise ValueError(f"expected {count} names, got {len(given)}")
    return tuple(given)


def build_sr(
    m: QualMatrix,
    species_names: Optional[Sequence[str]] = None,
    interaction_names: Optional[Sequence[str]] = None,
) -> DsrGraph:
    """SR graph of a single qualitative matrix (rows are species)."""
    edges = []
    for i in range(m.rows):
        for j in range(m.cols):
            e = m[i, j]
            label = _label(e) if len(e.sign.strict_signs) == 1 else INF
            for s in sorted(e.sign.strict_signs):
                edges.append(DsrEdge(i, j, s, label))
    edges.sort(key=DsrEdge.sort_key)
    return DsrGraph(_names(species_names, "S", m.rows), _names(interaction_names, "R", m.cols),
                    tuple(edges), "sr")


def build_dsr(
    a: QualMatrix,
    b: QualMatrix,
    species_names: Optional[Sequence[str]] = None,
    interaction_names: Optional[Sequence[str]] = None,
    attach_second_labels: bool = False,
    provenance: str = "dsr",
) -> DsrGraph:
    """DSR graph of the pair ``(a, b)``, both species x interactions.

    Signs realizable in both entries give undirected edges, signs only in
    ``a`` give R-to-S edges, signs only in ``b`` give S-to-R edges. Labels
    come from ``a``; edges absent from ``a`` are labelled infinity. With
    ``attach_second_labels`` the label ``b`` would assign is kept on each
    edge as metadata.
    """
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    edges = []
    for i in range(a.rows):
        for j in range(a.cols):
            ea, eb = a[i, j], b[i, j]
            sa, sb = ea.sign.strict_signs, eb.sign.strict_signs
            la = _label(ea) if len(sa) == 1 else INF
            lb = (_label(eb) if len(sb) == 1 else INF) if attach_second_labels else None
            for s in sorted(sa | sb):
                if s in sa and s in sb:
                    d, lab = Direction.BOTH, la
                elif s in sa:
                    d, lab = Direction.RTOS, la
                else:
                    d, lab = Direction.STOR, INF
                edges.append(DsrEdge(i, j, s, lab, d, lb if s in sb else None))
    edges.sort(key=DsrEdge.sort_key)
    return DsrGraph(_names(species_names, "S", a.rows), _names(interaction_names, "R", a.cols),
                    tuple(edges), provenance)


def format_label(label: Label) -> str:
    return "inf" if label == INF else str(label)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _vertex_ids(g: DsrGraph) -> Tuple[List[str], List[str]]:
    clash = set(g.species_names) & set(g.interaction_names)
    sid = [("S:" + n) if n in clash else n for n in g.species_names]
    rid = [("R:" + n) if n in clash else n for n in g.interaction_names]
    return sid, rid


def export_dot(g: DsrGraph, name: str = "DSR") -> str:
    """Render as a Graphviz digraph.

    Negative edges are dashed. Undirected edges carry ``dir=none``; directed
    ones point the way they may be traversed. Labels equal to 1 are left off.
    Output depends only on the graph, so equal graphs give identical bytes.
    """
    sid, rid = _vertex_ids(g)
    out = [f"digraph {_quote(name)} {{", "  node [fontname=\"Helvetica\"];"]
    for n, v in zip(g.species_names, sid):
        out.append(f"  {_quote(v)} [label={_quote(n)}, shape=ellipse];")
    for n, v in zip(g.interaction_names, rid):
        out.append(f"  {_quote(v)} [label={_quote(n)}, shape=box];")
    for e in g.edges:
        s, r = _quote(sid[e.species]), _quote(rid[e.interaction])
        attrs = []
        if e.direction is Direction.RTOS:
            head = f"{r} -> {s}"
        else:
            head = f"{s} -> {r}"
            if e.direction is Direction.BOTH:
                attrs.append("dir=none")
        attrs.append("style=dashed" if e.sign < 0 else "style=solid")
        if e.label != 1:
            attrs.append(f"label={_quote(format_label(e.label))}")
        out.append(f"  {head} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def graph_to_dict(g: DsrGraph) -> Dict:
    """JSON-friendly dump with every edge field."""
    def lab(x):
        return None if x is None else format_label(x)
    return {
        "species": list(g.species_names),
        "interactions": list(g.interaction_names),
        "provenance": g.provenance,
        "edges": [
            {
                "species": g.species_names[e.species],
                "interaction": g.interaction_names[e.interaction],
                "sign": e.sign,
                "label": lab(e.label),
                "direction": e.direction.value,
                **({"second_label": lab(e.second_label)} if e.second_label is not None else {}),
            }
            for e in g.edges
        ],
    }


def graph_to_json(g: DsrGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2, ensure_ascii=False) + "\n"
