"""Cycles of DSR graphs: enumeration, classification, pairwise intersection, Condition (*).

Vertices are encoded as ``(0, i)`` for species ``i`` and ``(1, j)`` for
interaction ``j``, so species sort before interactions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from .dsrgraph import INF, Direction, DsrEdge, DsrGraph, Label

__all__ = [
    "Vertex",
    "Cycle",
    "CycleClass",
    "CycleCapExceeded",
    "Intersection",
    "StarResult",
    "canonical_cycle",
    "enumerate_cycles",
    "classify",
    "s_to_r_intersection",
    "check_condition_star",
    "vertex_name",
    "DEFAULT_CYCLE_CAP",
    "DEFAULT_ECYCLE_CAP",
]

DEFAULT_CYCLE_CAP = 10**6
DEFAULT_ECYCLE_CAP = 10**4

Vertex = Tuple[int, int]
SPECIES, INTERACTION = 0, 1


class CycleCapExceeded(RuntimeError):
    def __init__(self, cap: int, partial: int):
        super().__init__(f"more than {cap} cycles (stopped after {partial})")
        self.cap = cap
        self.partial = partial


def _endpoints(e: DsrEdge) -> Tuple[Vertex, Vertex]:
    return (SPECIES, e.species), (INTERACTION, e.interaction)


def traversable(e: DsrEdge, frm: Vertex) -> bool:
    """Whether ``e`` may be walked starting from vertex ``frm``."""
    if frm[0] == SPECIES:
        return e.direction.allows_s_to_r
    return e.direction.allows_r_to_s


@dataclass(frozen=True)
class Cycle:
    """A simple alternating closed walk.

    Edge ``edge_ids[k]`` runs from ``vertices[k]`` to ``vertices[k + 1]``
    (indices mod the length), which fixes the traversal direction.
    """

    vertices: Tuple[Vertex, ...]
    edge_ids: Tuple[int, ...]
    edges: Tuple[DsrEdge, ...] = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.edge_ids)

    @property
    def key(self):
        return (len(self.edge_ids), self.vertices, self.edge_ids)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edge_ids)

    @property
    def undirected(self) -> bool:
        """True if every edge is undirected, so both orientations are legal."""
        return all(e.direction is Direction.BOTH for e in self.edges)

    def orientations(self) -> List[Dict[int, Vertex]]:
        """Legal orientations, each mapping edge id to its tail vertex."""
        n = len(self.vertices)
        forward = {k: self.vertices[p] for p, k in enumerate(self.edge_ids)}
        if not self.undirected:
            return [forward]
        backward = {k: self.vertices[(p + 1) % n] for p, k in enumerate(self.edge_ids)}
        return [forward, backward]

    def describe(self, g: DsrGraph) -> str:
        parts = [vertex_name(g, self.vertices[0])]
        for p, e in enumerate(self.edges):
            nxt = self.vertices[(p + 1) % len(self.vertices)]
            link = "-" if e.direction is Direction.BOTH else "->"
            parts.append(link + vertex_name(g, nxt))
        return "".join(parts)


def vertex_name(g: DsrGraph, v: Vertex) -> str:
    return g.species_names[v[1]] if v[0] == SPECIES else g.interaction_names[v[1]]


def canonical_cycle(g: DsrGraph, vertices: Sequence[Vertex], edge_ids: Sequence[int]) -> Cycle:
    """Rotate to start at the least vertex; reflect too if that is legal and smaller."""
    n = len(vertices)
    r = min(range(n), key=lambda p: vertices[p])
    vs = tuple(vertices[r:]) + tuple(vertices[:r])
    es = tuple(edge_ids[r:]) + tuple(edge_ids[:r])
    if all(g.edges[k].direction is Direction.BOTH for k in es):
        rv = (vs[0],) + tuple(reversed(vs[1:]))
        re_ = tuple(reversed(es))
        if (rv, re_) < (vs, es):
            vs, es = rv, re_
    return Cycle(vs, es, tuple(g.edges[k] for k in es))


def _arc_graph(g: DsrGraph) -> Tuple[nx.DiGraph, Dict[Tuple[Vertex, Vertex], List[int]]]:
    arcs: Dict[Tuple[Vertex, Vertex], List[int]] = {}
    for k, e in enumerate(g.edges):
        s, r = _endpoints(e)
        if e.direction.allows_s_to_r:
            arcs.setdefault((s, r), []).append(k)
        if e.direction.allows_r_to_s:
            arcs.setdefault((r, s), []).append(k)
    dg = nx.DiGraph()
    dg.add_nodes_from(sorted({v for arc in arcs for v in arc}))
    dg.add_edges_from(sorted(arcs))
    return dg, arcs


def enumerate_cycles(g: DsrGraph, cap: int = DEFAULT_CYCLE_CAP) -> List[Cycle]:
    """All simple direction-respecting cycles, each once, in canonical order.

    Johnson's algorithm (via networkx) runs on the graph of traversable arcs;
    each vertex cycle is then expanded over the parallel edges that realise
    its arcs. A length-2 cycle needs two distinct edges.

    Raises
    ------
    CycleCapExceeded
        When more than ``cap`` distinct cycles exist.
    """
    if cap < 1:
        raise ValueError("cycle cap must be positive")
    dg, arcs = _arc_graph(g)
    found: Dict[tuple, Cycle] = {}
    for vc in nx.simple_cycles(dg):
        n = len(vc)
        choices = [arcs[(vc[p], vc[(p + 1) % n])] for p in range(n)]
        for pick in itertools.product(*choices):
            if len(set(pick)) < n:
                continue
            c = canonical_cycle(g, vc, pick)
            if c.key not in found:
                found[c.key] = c
                if len(found) > cap:
                    raise CycleCapExceeded(cap, len(found) - 1)
    return [found[k] for k in sorted(found)]


def _prod(labels: Iterable[Label]) -> Label:
    out: Label = Fraction(1)
    for x in labels:
        if x == INF:
            return INF
        out *= x
    return out


@dataclass(frozen=True)
class CycleClass:
    sign: int
    parity: int  # (-1)^(len/2) * sign
    stoich: Label

    @property
    def is_e_cycle(self) -> bool:
        return self.parity == 1

    @property
    def is_o_cycle(self) -> bool:
        return self.parity == -1

    @property
    def is_s_cycle(self) -> bool:
        return self.stoich == 0

    @property
    def is_es_cycle(self) -> bool:
        return self.is_e_cycle and self.is_s_cycle

    @property
    def kind(self) -> str:
        return "e-cycle" if self.is_e_cycle else "o-cycle"


def classify(c: Cycle) -> CycleClass:
    """Sign, parity and stoichiometry of a cycle.

    The stoichiometry compares the label products of the two alternate edge
    sets; any infinite label makes it infinite.
    """
    sign = math.prod(e.sign for e in c.edges)
    parity = sign * (-1) ** (len(c.edges) // 2)
    labels = [e.label for e in c.edges]
    a, b = _prod(labels[0::2]), _prod(labels[1::2])
    stoich = INF if INF in (a, b) else abs(a - b)
    return CycleClass(sign, parity, stoich)


@dataclass(frozen=True)
class Intersection:
    """Result of the S-to-R intersection test.

    ``components`` lists the edge ids of each connected piece of the shared
    subgraph (only when ``holds``). ``reason`` is set otherwise.
    """

    holds: bool
    components: Tuple[Tuple[int, ...], ...] = ()
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.holds


def s_to_r_intersection(c: Cycle, d: Cycle) -> Intersection:
    """Whether two distinct cycles have S-to-R intersection.

    The orientations must agree on all shared edges for some legal choice of
    orientation of each cycle, and every connected component of the common
    subgraph must have an odd number of edges. A vertex shared without an
    incident shared edge is a component with no edges.
    """
    if c.key == d.key:
        raise ValueError("a cycle cannot be tested against itself")
    shared = c.edge_set & d.edge_set
    if not shared:
        return Intersection(False, reason="disjoint")
    compatible = any(
        all(oc[k] == od[k] for k in shared)
        for oc in c.orientations()
        for od in d.orientations()
    )
    if not compatible:
        return Intersection(False, reason="incompatible-orientation")

    common = nx.Graph()
    common.add_nodes_from(set(c.vertices) & set(d.vertices))
    for k in shared:
        e = c.edges[c.edge_ids.index(k)]
        common.add_edge(*_endpoints(e), key=k)
    edge_of = {frozenset(_endpoints(c.edges[c.edge_ids.index(k)])): k for k in shared}
    comps = []
    for nodes in nx.connected_components(common):
        sub = common.subgraph(nodes)
        comps.append(tuple(sorted(edge_of[frozenset(uv)] for uv in sub.edges)))
    comps.sort(key=lambda t: (len(t), t))
    if any(len(t) % 2 == 0 for t in comps):
        return Intersection(False, reason="even-component")
    return Intersection(True, tuple(comps))


SATISFIED = "satisfied"
VIOLATED_E_NOT_S = "violated-e-not-s"
VIOLATED_STR = "violated-str-intersection"
CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class StarResult:
    """Outcome of the Condition (*) check.

    ``witnesses`` holds the first violating cycle (e-not-s) or the first
    violating pair; ``components`` the shared edge components of that pair.
    ``bad_cycles`` lists every e-cycle that is not an s-cycle.
    """

    status: str
    witnesses: Tuple[Cycle, ...] = ()
    components: Tuple[Tuple[int, ...], ...] = ()
    bad_cycles: Tuple[Cycle, ...] = ()
    cycles: Tuple[Cycle, ...] = ()
    classes: Tuple[CycleClass, ...] = ()
    message: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status == SATISFIED

    @property
    def violated(self) -> bool:
        return self.status in (VIOLATED_E_NOT_S, VIOLATED_STR)

    @property
    def e_cycles(self) -> List[Cycle]:
        return [c for c, k in zip(self.cycles, self.classes) if k.is_e_cycle]


def check_condition_star(
    g: DsrGraph,
    cap: int = DEFAULT_CYCLE_CAP,
    ecycle_cap: int = DEFAULT_ECYCLE_CAP,
) -> StarResult:
    """Decide Condition (*): all e-cycles are s-cycles and no two e-cycles
    have S-to-R intersection.

    Exceeding either cap yields status ``cap-exceeded`` rather than an error.
    """
    try:
        cycles = enumerate_cycles(g, cap)
    except CycleCapExceeded as exc:
        return StarResult(CAP_EXCEEDED, message=str(exc))
    classes = [classify(c) for c in cycles]
    e_cycles = [c for c, k in zip(cycles, classes) if k.is_e_cycle]
    bad = tuple(c for c, k in zip(cycles, classes) if k.is_e_cycle and not k.is_s_cycle)
    base = dict(cycles=tuple(cycles), classes=tuple(classes), bad_cycles=bad)
    if bad:
        return StarResult(VIOLATED_E_NOT_S, witnesses=(bad[0],), **base)
    if len(e_cycles) > ecycle_cap:
        return StarResult(CAP_EXCEEDED, message=f"{len(e_cycles)} e-cycles exceed the pairwise cap {ecycle_cap}",
                          **base)
    for c, d in itertools.combinations(e_cycles, 2):
        hit = s_to_r_intersection(c, d)
        if hit:
            return StarResult(VIOLATED_STR, witnesses=(c, d), components=hit.components, **base)
    return StarResult(SATISFIED, **base)
