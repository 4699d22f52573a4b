"""Combine graph and minor-sign evidence into a report on the network.

The graph is always built from the pair ``(S, -V^T)``; the negation and the
transpose happen in :func:`dsr_pair` and nowhere else.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cyclecheck import (
    CAP_EXCEEDED,
    DEFAULT_CYCLE_CAP,
    DEFAULT_ECYCLE_CAP,
    SATISFIED,
    Cycle,
    CycleClass,
    StarResult,
    check_condition_star,
    classify,
    vertex_name,
)
from .dsrgraph import DsrGraph, build_dsr, format_label, graph_to_dict
from .netmodel import NetworkModel, compile_to_matrices
from .qualmat import DEFAULT_MINOR_CAP, MinorSign, QualMatrix, Sign, qual_minor_sign

__all__ = [
    "GenlemWitness",
    "GenlemResult",
    "MotifFinding",
    "AnalysisOptions",
    "Report",
    "check_genlem",
    "lint_motifs",
    "dsr_pair",
    "analyze",
    "conservation_hints",
    "report_to_dict",
    "report_to_json",
    "report_to_text",
    "REPORT_SCHEMA",
    "EXIT_CODES",
]

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"


# -- direct minor check -------------------------------------------------------


@dataclass(frozen=True)
class GenlemWitness:
    delta: Tuple[int, ...]  # species (rows of S)
    gamma: Tuple[int, ...]  # interactions (columns of S)
    s_sign: MinorSign
    v_sign: MinorSign


@dataclass(frozen=True)
class GenlemResult:
    """Outcome of checking ``S[d|g] V[g|d]`` against ``(-1)^|d|`` for all d, g.

    ``raw_status`` is what the sign computation found; ``status`` is
    downgraded from ``fails`` to ``unknown`` when the assumptions under which
    a failed sign condition implies a non-P0^(-) product do not hold.
    """

    status: str
    witness: Optional[GenlemWitness] = None
    assumptions: Dict[str, bool] = field(default_factory=dict)
    raw_status: str = ""
    pairs_checked: int = 0
    truncated_at: Optional[int] = None


def _minor_product_ok(s: MinorSign, v: MinorSign, k: int) -> bool:
    if MinorSign.ZERO in (s, v):
        return True
    if MinorSign.UNSIGNED in (s, v):
        return False
    return s.value_sign * v.value_sign == (-1) ** k


def check_genlem(
    s: QualMatrix,
    v: QualMatrix,
    cap: int = DEFAULT_MINOR_CAP,
    independent: bool = True,
) -> GenlemResult:
    """Check every pair of matched minors of S (n x m) and V (m x n).

    Minors of size above ``cap`` are not expanded; if any exist and nothing
    fails below the cap, the result is ``unknown``. Index sets are visited by
    size, then lexicographically, so the first witness is deterministic.
    """
    n, m = s.shape
    if v.shape != (m, n):
        raise ValueError(f"V must be {m}x{n} to match S ({n}x{m}), got {v.rows}x{v.cols}")
    assumptions = {
        "independent-entries": independent,
        "sign-class-S": s.is_sign_class,
        "sign-class-V": v.is_sign_class,
    }
    valid = independent and (s.is_sign_class or v.is_sign_class)
    s_rows = [frozenset(j for j in range(m) if not s[i, j].is_zero) for i in range(n)]
    v_rows = [frozenset(i for i in range(n) if not v[j, i].is_zero) for j in range(m)]
    checked = 0
    top = min(n, m)
    for k in range(1, min(top, cap) + 1):
        for delta in itertools.combinations(range(n), k):
            cols = frozenset().union(*(s_rows[i] for i in delta))
            if len(cols) < k:
                continue
            dset = frozenset(delta)
            for gamma in itertools.combinations(sorted(cols), k):
                if any(not (s_rows[i] & set(gamma)) for i in delta):
                    continue
                if any(not (v_rows[j] & dset) for j in gamma):
                    continue
                checked += 1
                ss = qual_minor_sign(s, delta, gamma, cap).sign
                if ss is MinorSign.ZERO:
                    continue
                vs = qual_minor_sign(v, gamma, delta, cap).sign
                if not _minor_product_ok(ss, vs, k):
                    w = GenlemWitness(delta, gamma, ss, vs)
                    return GenlemResult(FAILS if valid else UNKNOWN, w, assumptions, FAILS, checked)
    if top > cap:
        return GenlemResult(UNKNOWN, None, assumptions, UNKNOWN, checked, cap + 1)
    return GenlemResult(HOLDS, None, assumptions, HOLDS, checked)


def genlem_cost(n: int, m: int) -> int:
    """Number of (delta, gamma) pairs of equal size, an upper bound on the work."""
    return math.comb(n + m, n) - 1


# -- motif lints ----------------------------------------------------------------


@dataclass(frozen=True)
class MotifFinding:
    kind: str
    indices: Dict[str, int]
    text: str
    severity: str = "informational"


def lint_motifs(
    s: QualMatrix,
    v: QualMatrix,
    species: Optional[Sequence[str]] = None,
    interactions: Optional[Sequence[str]] = None,
    v_sign_class: Optional[bool] = None,
) -> List[MotifFinding]:
    """Entry patterns that by themselves rule out P0^(-) Jacobians.

    ``onereac``: an unsigned influence on a species the interaction changes,
    or an unsigned stoichiometry where an influence exists.
    ``tworeac``: ``S[j,i] != 0``, ``V[k,j]`` unsigned, ``S[l,k] != 0`` and
    ``V[i,l] != 0`` with ``j != l``, ``i != k`` (species j, l; interactions
    i, k). Only reported when V is a sign-class.
    """
    n, m = s.shape
    sp = list(species) if species is not None else [f"S{k + 1}" for k in range(n)]
    rn = list(interactions) if interactions is not None else [f"R{k + 1}" for k in range(m)]
    out: List[MotifFinding] = []
    for i in range(n):
        for j in range(m):
            if v[j, i].sign is Sign.UNSIGNED and not s[i, j].is_zero:
                out.append(MotifFinding("onereac", {"species": i, "interaction": j},
                                        f"{rn[j]} has unsigned sensitivity to {sp[i]}, "
                                        f"which it also changes (S[{sp[i]},{rn[j]}] = {s[i, j]})"))
            elif s[i, j].sign is Sign.UNSIGNED and not v[j, i].is_zero:
                out.append(MotifFinding("onereac", {"species": i, "interaction": j},
                                        f"S[{sp[i]},{rn[j]}] is unsigned while {rn[j]} "
                                        f"depends on {sp[i]} ({v[j, i]})"))
    if v_sign_class is None:
        v_sign_class = v.is_sign_class
    if not v_sign_class:
        return out
    for j in range(n):
        for i in range(m):
            if s[j, i].is_zero:
                continue
            for k in range(m):
                if k == i or v[k, j].sign is not Sign.UNSIGNED:
                    continue
                for l in range(n):
                    if l != j and not s[l, k].is_zero and not v[i, l].is_zero:
                        out.append(MotifFinding(
                            "tworeac", {"species_j": j, "interaction_i": i,
                                        "interaction_k": k, "species_l": l},
                            f"{sp[j]} and {sp[l]} with {rn[i]} and {rn[k]}: {rn[k]} has unsigned "
                            f"sensitivity to {sp[j]} and the loop {rn[i]}-{sp[j]}-{rn[k]}-{sp[l]} closes"))
    return out


# -- conservation hints ---------------------------------------------------------


def _left_null_space(rows: List[List[Fraction]], n: int, m: int) -> List[List[Fraction]]:
    """Basis of {y : y^T S = 0} by reduced row echelon form of S^T."""
    a = [[rows[i][j] for i in range(n)] for j in range(m)]  # m x n
    pivots = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, m) if a[k][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for k in range(m):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        y = [Fraction(0)] * n
        y[free] = Fraction(1)
        for row, pc in enumerate(pivots):
            y[pc] = -a[row][free]
        scale = math.lcm(*(x.denominator for x in y))
        basis.append([x * scale for x in y])
    return basis


def conservation_hints(s: QualMatrix, species: Sequence[str]) -> List[Dict[str, str]]:
    """Linear conserved quantities of a fixed S, as species -> coefficient maps.

    These are hints only; eliminating a conserved species is left to the user.
    """
    if not s.is_fixed or s.rows == 0:
        return []
    rows = [[e.fixed for e in r] for r in s.entries]
    return [
        {species[i]: str(c) for i, c in enumerate(y) if c != 0}
        for y in _left_null_space(rows, s.rows, s.cols)
    ]


# -- analysis ---------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisOptions:
    cycle_cap: int = DEFAULT_CYCLE_CAP
    ecycle_cap: int = DEFAULT_ECYCLE_CAP
    minor_cap: int = DEFAULT_MINOR_CAP
    genlem: object = "auto"  # True, False, or "auto"
    genlem_budget: int = 20000
    independent: bool = True
    lints: bool = True


EXIT_CODES = {"p0": 0, "not-p0": 2, "inconclusive": 2, "inconclusive-cap": 3}


@dataclass(frozen=True)
class Report:
    model: NetworkModel
    s: QualMatrix
    v: QualMatrix
    graph: DsrGraph
    star: StarResult
    genlem: Optional[GenlemResult]
    lints: Tuple[MotifFinding, ...]
    verdict: str
    conclusions: Dict[str, str]
    hints: Tuple[Dict[str, str], ...] = ()

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


def dsr_pair(s: QualMatrix, v: QualMatrix) -> Tuple[QualMatrix, QualMatrix]:
    """The pair ``(S, -V^T)`` whose DSR graph certifies ``S V``."""
    return s, -v.transpose()


def decide(star: StarResult, genlem: Optional[GenlemResult]) -> str:
    if star.satisfied or (genlem is not None and genlem.status == HOLDS):
        return "p0"
    if genlem is not None and genlem.status == FAILS:
        return "not-p0"
    if star.status == CAP_EXCEEDED:
        return "inconclusive-cap"
    return "inconclusive"


def _theta_text(model: NetworkModel) -> str:
    if not model.outflows:
        return "no species declared with outflows"
    names = [model.species[i].name for i in sorted(model.outflows)]
    return "declared outflows on " + ", ".join(names)


def conclusions_for(verdict: str, model: NetworkModel, star: StarResult,
                    genlem: Optional[GenlemResult]) -> Dict[str, str]:
    theta = _theta_text(model)
    if verdict == "p0":
        basis = "Condition (*) holds" if star.satisfied else "all matched minor products are correctly signed"
        return {
            "N0": f"{basis}; every Jacobian of the system without outflows is a P0^(-) matrix.",
            "Nplus": "With outflows on every species the system is injective on any rectangular "
                     "domain, so it has at most one equilibrium there.",
            "Ntheta": f"With outflows on any subset of species ({theta}), there is at most one "
                      "nondegenerate equilibrium in the relative interior of each invariant affine subset.",
        }
    doubt = "Multiple equilibria can no longer be ruled out by these methods."
    if verdict == "not-p0":
        w = genlem.witness
        sp = ", ".join(model.species[i].name for i in w.delta)
        rn = ", ".join(model.interactions[j].name for j in w.gamma)
        return {
            "N0": f"Not a P0^(-) system: the minor product at species {{{sp}}} and interactions "
                  f"{{{rn}}} can take the wrong sign. {doubt}",
            "Nplus": f"Injectivity is not established. {doubt}",
            "Ntheta": f"No uniqueness claim with outflows on a subset of species. {doubt}",
        }
    reason = ("a size cap was exceeded before Condition (*) could be decided"
              if verdict == "inconclusive-cap"
              else f"Condition (*) fails ({star.status}), and it is sufficient but not necessary")
    return {
        "N0": f"Inconclusive: {reason}. The P0^(-) property is neither established nor refuted.",
        "Nplus": f"Injectivity is not established. {doubt}",
        "Ntheta": f"No uniqueness claim with outflows on a subset of species. {doubt}",
    }


def analyze(model: NetworkModel, options: AnalysisOptions = AnalysisOptions()) -> Report:
    """Build (S, V) and the DSR graph, then run every applicable check."""
    s, v = compile_to_matrices(model)
    a, b = dsr_pair(s, v)
    graph = build_dsr(a, b, model.species_names(), model.interaction_names(),
                      provenance="S, -V^T")
    star = check_condition_star(graph, options.cycle_cap, options.ecycle_cap)
    run = options.genlem
    if run == "auto":
        run = genlem_cost(model.n, model.m) <= options.genlem_budget
    genlem = check_genlem(s, v, options.minor_cap, options.independent) if run else None
    lints = tuple(lint_motifs(s, v, model.species_names(), model.interaction_names())) \
        if options.lints else ()
    verdict = decide(star, genlem)
    return Report(model, s, v, graph, star, genlem, lints, verdict,
                  conclusions_for(verdict, model, star, genlem),
                  tuple(conservation_hints(s, model.species_names())))


# -- serialisation -------------------------------------------------------------------


def cycle_to_dict(g: DsrGraph, c: Cycle, k: Optional[CycleClass] = None) -> Dict:
    k = k or classify(c)
    n = len(c.vertices)
    return {
        "path": c.describe(g),
        "vertices": [vertex_name(g, x) for x in c.vertices],
        "edges": [
            {"from": vertex_name(g, c.vertices[p]), "to": vertex_name(g, c.vertices[(p + 1) % n]),
             "sign": e.sign, "label": format_label(e.label), "direction": e.direction.value}
            for p, e in enumerate(c.edges)
        ],
        "length": len(c),
        "sign": k.sign,
        "parity": k.kind,
        "stoich": format_label(k.stoich),
        "es_cycle": k.is_es_cycle,
    }


def _edge_names(g: DsrGraph, ids: Sequence[int]) -> List[str]:
    return [g.edge_name(k) for k in ids]


def report_to_dict(r: Report) -> Dict:
    g = r.graph
    classes = dict(zip((c.key for c in r.star.cycles), r.star.classes))
    star = {
        "status": r.star.status,
        "witnesses": [cycle_to_dict(g, c, classes.get(c.key)) for c in r.star.witnesses],
        "components": [_edge_names(g, comp) for comp in r.star.components],
        "e_not_s_cycles": [cycle_to_dict(g, c, classes.get(c.key)) for c in r.star.bad_cycles],
        "cycle_count": len(r.star.cycles),
        "e_cycle_count": sum(1 for k in r.star.classes if k.is_e_cycle),
    }
    if r.star.message:
        star["message"] = r.star.message
    if r.genlem is None:
        genlem = {"status": "skipped", "witness": None, "assumptions": {}}
    else:
        w = r.genlem.witness
        genlem = {
            "status": r.genlem.status,
            "witness": None if w is None else {
                "delta": [r.model.species[i].name for i in w.delta],
                "gamma": [r.model.interactions[j].name for j in w.gamma],
                "s_minor_sign": w.s_sign.value,
                "v_minor_sign": w.v_sign.value,
            },
            "assumptions": dict(r.genlem.assumptions),
            "pairs_checked": r.genlem.pairs_checked,
        }
    return {
        "model-summary": {
            "species": r.model.species_names(),
            "interactions": r.model.interaction_names(),
            "source_mode": r.model.source_mode,
            "outflows": [r.model.species[i].name for i in sorted(r.model.outflows)],
            "S": [[str(e) for e in row] for row in r.s.entries],
            "V": [[str(e) for e in row] for row in r.v.entries],
        },
        "dsr-graph": graph_to_dict(g),
        "star": star,
        "genlem": genlem,
        "lints": [{"kind": f.kind, "indices": dict(f.indices), "text": f.text,
                   "severity": f.severity} for f in r.lints],
        "conclusions": dict(r.conclusions),
        "verdict": r.verdict,
        "exit_code": r.exit_code,
        "conservation_hints": [dict(h) for h in r.hints],
    }


def report_to_json(r: Report) -> str:
    return json.dumps(report_to_dict(r), indent=2, ensure_ascii=False) + "\n"


def report_to_text(r: Report) -> str:
    d = report_to_dict(r)
    g = r.graph
    lines = [
        f"species: {len(d['model-summary']['species'])}  interactions: "
        f"{len(d['model-summary']['interactions'])}  edges: {len(g.edges)}",
        f"cycles: {d['star']['cycle_count']}  e-cycles: {d['star']['e_cycle_count']}",
        f"condition (*): {r.star.status}",
    ]
    if r.star.message:
        lines.append(f"  {r.star.message}")
    for w in d["star"]["witnesses"]:
        lines.append(f"  witness: {w['path']}  ({w['parity']}, stoich {w['stoich']})")
    for comp in d["star"]["components"]:
        lines.append(f"  shared component: {', '.join(comp)}")
    extra = len(d["star"]["e_not_s_cycles"]) - (1 if r.star.status == "violated-e-not-s" else 0)
    if extra > 0:
        lines.append(f"  ({extra} further e-cycles are not s-cycles)")
    gl = d["genlem"]
    lines.append(f"minor check: {gl['status']}")
    if gl.get("witness"):
        w = gl["witness"]
        lines.append(f"  at species {w['delta']} / interactions {w['gamma']}: "
                     f"S minor {w['s_minor_sign']}, V minor {w['v_minor_sign']}")
    for f in r.lints:
        lines.append(f"lint {f.kind}: {f.text}")
    for h in d["conservation_hints"]:
        lines.append("conserved: " + _linear_text(h))
    lines.append(f"verdict: {r.verdict}")
    for form in ("N0", "Nplus", "Ntheta"):
        lines.append(f"  {form}: {r.conclusions[form]}")
    return "\n".join(lines) + "\n"


def _linear_text(h: Dict[str, str]) -> str:
    out = ""
    for name, c in h.items():
        neg = c.startswith("-")
        mag = c[1:] if neg else c
        term = name if mag == "1" else f"{mag} {name}"
        out += (" - " if neg else " + ") + term if out else ("-" if neg else "") + term
    return out


_CYCLE = {
    "type": "object",
    "required": ["path", "vertices", "edges", "length", "sign", "parity", "stoich"],
    "properties": {
        "path": {"type": "string"},
        "vertices": {"type": "array", "items": {"type": "string"}},
        "edges": {"type": "array"},
        "length": {"type": "integer", "minimum": 2},
        "sign": {"enum": [-1, 1]},
        "parity": {"enum": ["e-cycle", "o-cycle"]},
        "stoich": {"type": "string"},
        "es_cycle": {"type": "boolean"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["model-summary", "dsr-graph", "star", "genlem", "lints", "conclusions",
                 "verdict", "exit_code"],
    "properties": {
        "model-summary": {
            "type": "object",
            "required": ["species", "interactions", "S", "V"],
        },
        "dsr-graph": {
            "type": "object",
            "required": ["species", "interactions", "edges"],
            "properties": {
                "edges": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["species", "interaction", "sign", "label", "direction"],
                        "properties": {
                            "sign": {"enum": [-1, 1]},
                            "label": {"type": "string"},
                            "direction": {"enum": ["Both", "RtoS", "StoR"]},
                        },
                    },
                },
            },
        },
        "star": {
            "type": "object",
            "required": ["status", "witnesses"],
            "properties": {
                "status": {"enum": ["satisfied", "violated-e-not-s",
                                    "violated-str-intersection", "cap-exceeded"]},
                "witnesses": {"type": "array", "items": _CYCLE},
                "e_not_s_cycles": {"type": "array", "items": _CYCLE},
            },
        },
        "genlem": {
            "type": "object",
            "required": ["status", "witness", "assumptions"],
            "properties": {"status": {"enum": ["holds", "fails", "unknown", "skipped"]}},
        },
        "lints": {
            "type": "array",
            "items": {"type": "object", "required": ["kind", "indices", "text"],
                      "properties": {"kind": {"enum": ["onereac", "tworeac"]}}},
        },
        "conclusions": {
            "type": "object",
            "required": ["N0", "Nplus", "Ntheta"],
            "properties": {k: {"type": "string"} for k in ("N0", "Nplus", "Ntheta")},
        },
        "verdict": {"enum": list(EXIT_CODES)},
        "exit_code": {"enum": sorted(set(EXIT_CODES.values()))},
    },
}
