"""Brute-force cross-checks on concrete matrices.

Everything here is exact and independent of the fast paths it is used to
test: determinant terms are enumerated one permutation at a time, cycles are
found by plain depth-first search, and random instances come from a seeded
:class:`random.Random`.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclecheck import (
    Cycle,
    canonical_cycle,
    check_condition_star,
    classify,
    enumerate_cycles,
    s_to_r_intersection,
)
from .dsrgraph import Direction, DsrGraph, build_dsr, build_sr
from .netmodel import compile_to_matrices, parse_network
from .qualmat import (
    ConcreteMatrix,
    QualEntry,
    QualMatrix,
    Sign,
    cauchy_binet,
    det,
    is_P0_minus,
    matmul,
    minor,
    p0_witnesses,
)
from .verdict import check_genlem, dsr_pair

__all__ = [
    "SampleSpec",
    "SignedTermSubgraph",
    "SuiteResult",
    "sample_instance",
    "permutation_parity",
    "parity_from_cycles",
    "enumerate_term_subgraphs",
    "enumerate_signed_subterms",
    "verify_prodformula",
    "verify_es_cancellation",
    "naive_cycle_enumerator",
    "random_concrete",
    "random_qual_matrix",
    "random_network",
    "SUITES",
    "run_suite",
]

TERM_CAP = 8
ES_CAP = 7
NAIVE_VERTEX_CAP = 12


@dataclass(frozen=True)
class SampleSpec:
    """Seeded recipe for drawing members of a qualitative class.

    Free magnitudes are ``Fraction(randint(1, q), q)`` with ``q`` uniform in
    ``1..max_denominator``, i.e. rationals in (0, 1].
    """

    seed: int = 0
    max_denominator: int = 1000
    zero_probability: Fraction = Fraction(1, 8)


def _magnitude(rng: random.Random, q_max: int) -> Fraction:
    q = rng.randint(1, q_max)
    return Fraction(rng.randint(1, q), q)


def sample_instance(
    m: QualMatrix,
    spec: SampleSpec = SampleSpec(),
    rng: Optional[random.Random] = None,
) -> ConcreteMatrix:
    """One concrete matrix with the weak sign pattern of ``m``.

    Fixed entries are copied. Unsigned entries are zero with probability
    ``spec.zero_probability`` and otherwise take a random sign. Pass ``rng``
    to draw a stream of samples; otherwise a fresh generator is seeded from
    ``spec.seed``.
    """
    rng = rng if rng is not None else random.Random(spec.seed)
    out = []
    for row in m.entries:
        r = []
        for e in row:
            if e.fixed is not None:
                r.append(e.fixed)
            elif e.sign is Sign.POS:
                r.append(_magnitude(rng, spec.max_denominator))
            elif e.sign is Sign.NEG:
                r.append(-_magnitude(rng, spec.max_denominator))
            else:
                if rng.random() < spec.zero_probability:
                    r.append(Fraction(0))
                else:
                    r.append(rng.choice((1, -1)) * _magnitude(rng, spec.max_denominator))
        out.append(tuple(r))
    return tuple(out)


# -- permutations ------------------------------------------------------------


def permutation_parity(perm: Sequence[int]) -> int:
    """+1 or -1, counting the transpositions needed to sort ``perm``."""
    p = list(perm)
    swaps = 0
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            swaps += 1
    return -1 if swaps % 2 else 1


def cycle_decomposition(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    """Nontrivial cycles of ``perm``."""
    seen = set()
    out = []
    for s in range(len(perm)):
        if s in seen or perm[s] == s:
            continue
        c = [s]
        seen.add(s)
        x = perm[s]
        while x != s:
            c.append(x)
            seen.add(x)
            x = perm[x]
        out.append(tuple(c))
    return out


def parity_from_cycles(perm: Sequence[int]) -> int:
    """``(-1)^(|theta| - |C|)`` over the nontrivial cycles C covering theta."""
    cycles = cycle_decomposition(perm)
    moved = sum(len(c) for c in cycles)
    return -1 if (moved - len(cycles)) % 2 else 1


# -- term subgraphs ----------------------------------------------------------------


@dataclass(frozen=True)
class SignedTermSubgraph:
    """A nonzero determinant term and its edges ``(row, col, sign)``."""

    permutation: Tuple[int, ...]
    edges: Tuple[Tuple[int, int, int], ...]
    value: Optional[Fraction]
    sign: int
    direction: Direction


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def enumerate_term_subgraphs(a: ConcreteMatrix, direction: Direction = Direction.RTOS
                             ) -> List[SignedTermSubgraph]:
    """One subgraph per permutation with a nonzero term, in lexicographic order."""
    k = len(a)
    if k > TERM_CAP:
        raise ValueError(f"{k}x{k} exceeds the term enumeration cap {TERM_CAP}")
    out = []
    for perm in itertools.permutations(range(k)):
        value = Fraction(permutation_parity(perm))
        for i, j in enumerate(perm):
            value *= a[i][j]
            if not value:
                break
        if value:
            edges = tuple((i, j, _sgn(a[i][j])) for i, j in enumerate(perm))
            out.append(SignedTermSubgraph(perm, edges, value, _sgn(value), direction))
    return out


def enumerate_signed_subterms(m: QualMatrix, direction: Direction = Direction.RTOS
                              ) -> List[SignedTermSubgraph]:
    """Signed subterms of a qualitative square matrix.

    Every permutation with no zero factor yields one subterm per choice of
    strict sign for each factor (two choices for unsigned entries). Values
    are left unset. Limited to 4x4.
    """
    k = m.rows
    if k != m.cols or k > 4:
        raise ValueError("signed subterm enumeration needs a square matrix of size <= 4")
    out = []
    for perm in itertools.permutations(range(k)):
        entries = [m[i, j] for i, j in enumerate(perm)]
        if any(e.is_zero for e in entries):
            continue
        p = permutation_parity(perm)
        for signs in itertools.product(*(sorted(e.sign.strict_signs) for e in entries)):
            edges = tuple((i, j, s) for (i, j), s in zip(enumerate(perm), signs))
            out.append(SignedTermSubgraph(perm, edges, None, p * math.prod(signs), direction))
    return out


def _components(edges: Sequence[Tuple[int, int, int]]):
    """Connected components of an edge list over S- and R-vertices.

    Returns a list of (edge list, is_cycle) where is_cycle means every vertex
    of the component has degree two.
    """
    incident: Dict[Tuple[int, int], List[int]] = {}
    for k, (i, j, _) in enumerate(edges):
        incident.setdefault((0, i), []).append(k)
        incident.setdefault((1, j), []).append(k)
    seen = set()
    out = []
    for start in range(len(edges)):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            k = stack.pop()
            comp.append(k)
            i, j, _ = edges[k]
            for v in ((0, i), (1, j)):
                for nxt in incident[v]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
        verts = {v for k in comp for v in ((0, edges[k][0]), (1, edges[k][1]))}
        degrees = [len(incident[v]) for v in verts]
        out.append(([edges[k] for k in comp], all(d == 2 for d in degrees), max(degrees)))
    return out


@dataclass(frozen=True)
class ProdCheck:
    passed: bool
    e_cycles: int
    o_cycles: int
    product_sign: int


def verify_prodformula(a: ConcreteMatrix, b: ConcreteMatrix,
                       alpha: Sequence[int], beta: Sequence[int]) -> ProdCheck:
    """Check the sign of a product of two determinant terms against the
    number of e-cycles in the union of their term subgraphs.

    The ``alpha`` term of ``a`` contributes R-to-S edges and the ``beta``
    term of ``b`` S-to-R edges; an entry used by both with the same sign is a
    single undirected edge. Every component of the union must be an isolated
    edge or a cycle, and the product must be zero or have sign
    ``(-1)^(number of e-cycles)``.
    """
    k = len(a)
    ta = permutation_parity(alpha) * math.prod(a[i][alpha[i]] for i in range(k))
    tb = permutation_parity(beta) * math.prod(b[i][beta[i]] for i in range(k))
    if ta == 0 or tb == 0:
        raise ValueError("both terms must be nonzero")
    edges = []
    for i in range(k):
        ea = (i, alpha[i], _sgn(a[i][alpha[i]]))
        eb = (i, beta[i], _sgn(b[i][beta[i]]))
        edges.append(ea)
        if eb != ea:
            edges.append(eb)
    e_count = o_count = 0
    genuine = True
    for comp, is_cycle, max_degree in _components(edges):
        if is_cycle:
            parity = math.prod(s for _, _, s in comp) * (-1) ** (len(comp) // 2)
            if parity == 1:
                e_count += 1
            else:
                o_count += 1
        elif not (len(comp) == 1 and max_degree == 1):
            genuine = False
    product = _sgn(ta * tb)
    ok = genuine and product == (-1) ** e_count
    return ProdCheck(ok, e_count, o_count, product)


def _bisecting_pairs(a: ConcreteMatrix, g: DsrGraph, c: Cycle):
    edge_index = {(e.species, e.interaction, e.sign): k for k, e in enumerate(g.edges)}
    terms = enumerate_term_subgraphs(a)
    by_edges = {frozenset(edge_index[x] for x in t.edges): t for t in terms}
    half = len(c) // 2
    cset = c.edge_set
    bisecting = [(es, t) for es, t in by_edges.items() if len(es & cset) == half]
    return by_edges, bisecting, cset


@dataclass(frozen=True)
class CancellationCheck:
    passed: bool
    es_cycles: int
    bisecting_terms: int
    determinant: Fraction
    problems: Tuple[str, ...] = ()


def verify_es_cancellation(a: ConcreteMatrix) -> CancellationCheck:
    """For every es-cycle of the SR graph of ``a``, pair up the terms that
    bisect it and check that each pair, and so their whole sum, cancels.

    The partner of a term subgraph E is ``(E - C) | (C - E)``.
    """
    k = len(a)
    if k > ES_CAP:
        raise ValueError(f"{k}x{k} exceeds the cap {ES_CAP}")
    g = build_sr(QualMatrix.from_concrete(a))
    problems = []
    es_count = bis_count = 0
    for c in enumerate_cycles(g):
        if not classify(c).is_es_cycle:
            continue
        es_count += 1
        by_edges, bisecting, cset = _bisecting_pairs(a, g, c)
        total = Fraction(0)
        for es, t in bisecting:
            bis_count += 1
            total += t.value
            partner = (es - cset) | (cset - es)
            other = by_edges.get(frozenset(partner))
            if other is None:
                problems.append(f"term {t.permutation} has no partner on cycle {c.edge_ids}")
            elif t.value + other.value != 0:
                problems.append(f"terms {t.permutation}, {other.permutation} do not cancel")
        if total != 0:
            problems.append(f"bisecting terms of cycle {c.edge_ids} sum to {total}")
    return CancellationCheck(not problems, es_count, bis_count, det(a), tuple(problems))


# -- naive cycle enumeration ---------------------------------------------------------


def naive_cycle_enumerator(g: DsrGraph) -> List[Cycle]:
    """Every direction-respecting simple cycle, by depth-first search over walks.

    Each cycle is found from its least vertex; the two orientations of an
    undirected cycle are merged by comparing canonical forms.
    """
    if g.nS + g.nR > NAIVE_VERTEX_CAP:
        raise ValueError(f"more than {NAIVE_VERTEX_CAP} vertices")
    out_arcs: Dict[Tuple[int, int], List[Tuple[int, Tuple[int, int]]]] = {}
    for k, e in enumerate(g.edges):
        s, r = (0, e.species), (1, e.interaction)
        if e.direction is not Direction.RTOS:
            out_arcs.setdefault(s, []).append((k, r))
        if e.direction is not Direction.STOR:
            out_arcs.setdefault(r, []).append((k, s))
    found = {}

    def walk(start, path_v, path_e):
        here = path_v[-1]
        for k, nxt in out_arcs.get(here, ()):
            if k in path_e:
                continue
            if nxt == start and len(path_e) >= 1:
                cyc = _naive_canonical(g, path_v, path_e + [k])
                found.setdefault(cyc.key, cyc)
            elif nxt > start and nxt not in path_v:
                walk(start, path_v + [nxt], path_e + [k])

    for v in sorted(out_arcs):
        walk(v, [v], [])
    return [found[k] for k in sorted(found)]


def _naive_canonical(g: DsrGraph, vs: List, es: List[int]) -> Cycle:
    """Least (vertices, edges) among all legal rotations and reflections."""
    n = len(vs)
    options = []
    for r in range(n):
        options.append((tuple(vs[r:] + vs[:r]), tuple(es[r:] + es[:r])))
    if all(g.edges[k].direction is Direction.BOTH for k in es):
        rv, re_ = [vs[0]] + vs[1:][::-1], es[::-1]
        for r in range(n):
            options.append((tuple(rv[r:] + rv[:r]), tuple(re_[r:] + re_[:r])))
    best_v, best_e = min(options)
    return Cycle(best_v, best_e, tuple(g.edges[k] for k in best_e))


# -- random instances ----------------------------------------------------------------


def random_concrete(rng: random.Random, rows: int, cols: int, p_zero: float = 0.3,
                    max_int: int = 3, rational: bool = True) -> ConcreteMatrix:
    def entry():
        if rng.random() < p_zero:
            return Fraction(0)
        v = Fraction(rng.randint(1, max_int))
        if rational and rng.random() < 0.3:
            v /= rng.randint(2, 5)
        return v * rng.choice((1, -1))
    return tuple(tuple(entry() for _ in range(cols)) for _ in range(rows))


def random_qual_matrix(rng: random.Random, rows: int, cols: int, p_zero: float = 0.5,
                       p_unsigned: float = 0.1, p_fixed: float = 0.0) -> QualMatrix:
    def entry():
        roll = rng.random()
        if roll < p_zero:
            return QualEntry.parse(Sign.ZERO)
        if rng.random() < p_unsigned:
            return QualEntry(Sign.UNSIGNED)
        if rng.random() < p_fixed:
            return QualEntry.const(rng.choice((1, 2, -1, -2)))
        return QualEntry(rng.choice((Sign.POS, Sign.NEG)))
    return QualMatrix.build([[entry() for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_network(rng: random.Random, max_n: int = 4, max_m: int = 4) -> Tuple[QualMatrix, QualMatrix]:
    """A random (S, V) pair: half the time from random reactions, otherwise from free patterns."""
    n, m = rng.randint(1, max_n), rng.randint(1, max_m)
    if rng.random() < 0.5:
        names = [f"X{k}" for k in range(n)]
        lines = ["species " + " ".join(names)]
        for j in range(m):
            left = rng.sample(names, rng.randint(1, min(2, n)))
            right = rng.sample(names, rng.randint(0, min(2, n)))

            def side(xs):
                return " + ".join(f"{rng.choice(('', '2 '))}{x}" for x in xs)
            arrow = rng.choice(("->", "<->"))
            lines.append(f"reaction R{j}: {side(left)} {arrow} {side(right)}")
            if rng.random() < 0.3:
                lines.append(f"modulate R{j}: {rng.choice(names)} : {rng.choice('+-?')}")
        try:
            return compile_to_matrices(parse_network("\n".join(lines)))
        except ValueError:
            pass  # conflicting modulators; fall through to a free pattern
    s = random_qual_matrix(rng, n, m, p_zero=0.55, p_unsigned=0.0, p_fixed=1.0)
    v = random_qual_matrix(rng, m, n, p_zero=0.55, p_unsigned=0.1)
    return s, v


def _random_failed_instance_pair(rng: random.Random):
    k = rng.randint(1, 3)
    a = random_qual_matrix(rng, k, k, p_zero=0.3, p_unsigned=0.15, p_fixed=0.5)
    b = random_qual_matrix(rng, k, k, p_zero=0.3, p_unsigned=0.15)
    return a, b


# -- suites ----------------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    seed: int
    cases: int
    passed: int = 0
    failures: List[str] = field(default_factory=list)
    details: Dict[str, int] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def failed(self) -> int:
        return self.cases - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, message: str = "") -> None:
        if ok:
            self.passed += 1
        elif len(self.failures) < 20:
            self.failures.append(message)

    def bump(self, key: str, by: int = 1) -> None:
        self.details[key] = self.details.get(key, 0) + by

    def to_dict(self) -> Dict:
        return {"suite": self.name, "seed": self.seed, "cases": self.cases,
                "passed": self.passed, "failed": self.failed,
                "failures": list(self.failures), "details": dict(self.details),
                "seconds": round(self.seconds, 3)}


def suite_prodformula(rng: random.Random, res: SuiteResult, size: int = 4) -> None:
    perms = list(itertools.permutations(range(size)))
    for case in range(res.cases):
        a = random_concrete(rng, size, size, p_zero=0.25)
        b = random_concrete(rng, size, size, p_zero=0.25)
        ta = [p for p in perms if all(a[i][p[i]] for i in range(size))]
        tb = [p for p in perms if all(b[i][p[i]] for i in range(size))]
        bad = None
        for al in ta:
            for be in tb:
                chk = verify_prodformula(a, b, al, be)
                res.bump("term pairs")
                if not chk.passed:
                    bad = f"case {case}: alpha={al} beta={be} a={a} b={b}"
                    break
                if chk.e_cycles == 0 and chk.product_sign < 0:
                    bad = f"case {case}: only o-cycles but negative product"
                    break
            if bad:
                break
        res.record(bad is None, bad or "")


SINGULAR_ES_INSTANCE = ((1, 0, 0, 2), (1, 1, 1, 0), (0, 1, 1, 0), (1, 0, 0, 2))


def _constrained_es_matrix(rng: random.Random, size: int = 4) -> ConcreteMatrix:
    """Random matrix whose rows r1, r2 and columns c1, c2 carry an es-cycle."""
    rows = [list(r) for r in random_concrete(rng, size, size, p_zero=0.35)]
    r1, r2 = rng.sample(range(size), 2)
    c1, c2 = rng.sample(range(size), 2)

    def nz():
        return Fraction(rng.randint(1, 4), rng.randint(1, 3)) * rng.choice((1, -1))
    a, b, c = nz(), nz(), nz()
    rows[r1][c1], rows[r1][c2], rows[r2][c1] = a, b, c
    rows[r2][c2] = b * c / a
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def suite_es_cancellation(rng: random.Random, res: SuiteResult) -> None:
    fig = tuple(tuple(Fraction(x) for x in r) for r in SINGULAR_ES_INSTANCE)
    chk = verify_es_cancellation(fig)
    res.record(chk.passed and chk.determinant == 0 and chk.es_cycles >= 1,
               f"reference instance: {chk}")
    for case in range(res.cases - 1):
        a = _constrained_es_matrix(rng)
        chk = verify_es_cancellation(a)
        res.bump("es-cycles", chk.es_cycles)
        if chk.determinant != 0:
            res.bump("nonsingular instances")
        res.record(chk.passed and chk.es_cycles >= 1, f"case {case}: {chk.problems or 'no es-cycle'} a={a}")


def suite_p0_witness(rng: random.Random, res: SuiteResult) -> None:
    tol = Fraction(1, 10**12)
    for case in range(res.cases):
        while True:
            n = rng.randint(1, 4)
            a = random_concrete(rng, n, n, p_zero=0.3)
            if not is_P0_minus(a):
                break
        w = p0_witnesses(a, tol)

        def f(lam):
            d = [lam * x + (1 - lam) * y for x, y in zip(w.d1, w.d2)]
            return det(tuple(tuple(a[i][j] - (d[i] if i == j else 0) for j in range(n))
                             for i in range(n)))
        ok = (w.det1 < 0 < w.det2 and all(x > 0 for x in w.d1 + w.d2)
              and w.lam_high - w.lam_low <= tol
              and f(w.lam_low) >= 0 >= f(w.lam_high) and 0 < w.lam < 1)
        res.record(ok, f"case {case}: a={a} witness={w}")


def suite_mainthm(rng: random.Random, res: SuiteResult, samples: int = 20) -> None:
    for case in range(res.cases):
        s, v = random_network(rng)
        a, b = dsr_pair(s, v)
        star = check_condition_star(build_dsr(a, b))
        if not star.satisfied:
            res.record(True)
            continue
        res.bump("star satisfied")
        problem = None
        gl = check_genlem(s, v)
        if gl.status == "fails":
            problem = f"case {case}: genlem fails {gl.witness} with star satisfied"
        for _ in range(samples):
            if problem:
                break
            s0, v0 = sample_instance(s, rng=rng), sample_instance(v, rng=rng)
            j = matmul(s0, v0)
            if not is_P0_minus(j):
                problem = f"case {case}: S0 V0 not P0^(-): S={s.sign_pattern()} V={v.sign_pattern()} J={j}"
            res.bump("jacobians sampled")
        res.record(problem is None, problem or "")


def _random_graph(rng: random.Random, max_vertices: int = 10) -> DsrGraph:
    ns = rng.randint(1, max_vertices - 1)
    nr = rng.randint(1, max_vertices - ns)
    density = rng.uniform(0.2, 0.7)
    a = random_qual_matrix(rng, ns, nr, p_zero=1 - density, p_unsigned=0.15, p_fixed=0.3)
    b = random_qual_matrix(rng, ns, nr, p_zero=1 - density, p_unsigned=0.15)
    return build_dsr(a, b)


def suite_cycles(rng: random.Random, res: SuiteResult) -> None:
    for case in range(res.cases):
        g = _random_graph(rng)
        fast = enumerate_cycles(g)
        slow = naive_cycle_enumerator(g)
        res.bump("cycles", len(fast))
        same = [c.key for c in fast] == [c.key for c in slow]
        res.record(same, f"case {case}: {len(fast)} vs {len(slow)} cycles")


def suite_cauchy_binet(rng: random.Random, res: SuiteResult) -> None:
    for case in range(res.cases):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        a = random_concrete(rng, n, m, p_zero=0.2)
        b = random_concrete(rng, m, n, p_zero=0.2)
        ok = True
        for k in range(1, n + 1):
            for d in itertools.combinations(range(n), k):
                try:
                    cauchy_binet(a, b, d)
                    res.bump("index sets")
                except ArithmeticError as exc:
                    ok = False
                    res.failures.append(f"case {case}: {exc}")
        res.record(ok)


def suite_permsigns(rng: random.Random, res: SuiteResult) -> None:
    for case in range(res.cases):
        perm = list(range(rng.randint(1, 9)))
        rng.shuffle(perm)
        res.record(permutation_parity(perm) == parity_from_cycles(perm), f"perm {perm}")


def _edge_lookup(g: DsrGraph):
    """Map (row, col, sign, 'A'|'B') to the graph edge realising that subentry."""
    table = {}
    for k, e in enumerate(g.edges):
        key = (e.species, e.interaction, e.sign)
        if e.direction is not Direction.STOR:
            table[key + ("A",)] = k
        if e.direction is not Direction.RTOS:
            table[key + ("B",)] = k
    return table


def suite_failed_pair(rng: random.Random, res: SuiteResult, samples: int = 10) -> None:
    """Sampled failed instances must leave a bad e-cycle or two overlapping e-cycles."""
    for case in range(res.cases):
        aq, bq = _random_failed_instance_pair(rng)
        g = build_dsr(aq, bq)
        lookup = _edge_lookup(g)
        cycles = [(c, classify(c)) for c in enumerate_cycles(g)]
        sub_a = enumerate_signed_subterms(aq)
        sub_b = enumerate_signed_subterms(bq)
        problem = None
        for _ in range(samples):
            a0, b0 = sample_instance(aq, rng=rng), sample_instance(bq, rng=rng)
            da, db = det(a0), det(b0)
            if da * db >= 0:
                continue
            res.bump("failed instances")
            ea = [frozenset(lookup[x + ("A",)] for x in t.edges) for t in sub_a if t.sign == _sgn(da)]
            for tb in (t for t in sub_b if t.sign == _sgn(db)):
                eb = frozenset(lookup[x + ("B",)] for x in tb.edges)
                chosen = [(c, k) for c, k in cycles if k.is_e_cycle
                          and any(c.edge_set <= eb | e for e in ea)]
                bad = any(not k.is_s_cycle for _, k in chosen)
                overlap = any(c.edge_set & d.edge_set
                              for (c, _), (d, _) in itertools.combinations(chosen, 2))
                if not (bad or overlap):
                    problem = f"case {case}: A={aq.sign_pattern()} B={bq.sign_pattern()}"
                    break
            if problem:
                break
        res.record(problem is None, problem or "")


def _union_cycles(g: DsrGraph, lookup, e1: SignedTermSubgraph, e2: SignedTermSubgraph) -> List[Cycle]:
    """Cycles of the union of an S-to-R term subgraph e1 and an R-to-S one e2,
    each walked in its natural orientation."""
    nxt: Dict[Tuple[int, int], List[Tuple[int, Tuple[int, int]]]] = {}
    for i, j, s in e1.edges:
        nxt.setdefault((0, i), []).append((lookup[(i, j, s, "B")], (1, j)))
    for i, j, s in e2.edges:
        nxt.setdefault((1, j), []).append((lookup[(i, j, s, "A")], (0, i)))
    cycles, seen = [], set()
    for start in sorted(v for v in nxt if v[0] == 0):
        if start in seen:
            continue
        vs, es, here = [start], [], start
        while True:
            k, to = nxt[here][0]
            if k in es:  # shared undirected edge walked back: not a cycle
                break
            es.append(k)
            if to == start:
                break
            vs.append(to)
            here = to
        seen.update(vs)
        if len(es) == len(vs) and len(es) > 1:
            cycles.append(canonical_cycle(g, vs, es))
    return cycles


def suite_str_intersection(rng: random.Random, res: SuiteResult) -> None:
    """Distinct cycles from unions sharing one S-to-R term subgraph are
    disjoint or have S-to-R intersection."""
    for case in range(res.cases):
        k = rng.randint(2, 4)
        a = random_concrete(rng, k, k, p_zero=0.3)
        b = random_concrete(rng, k, k, p_zero=0.3)
        g = build_dsr(QualMatrix.from_concrete(a), QualMatrix.from_concrete(b))
        lookup = _edge_lookup(g)
        ta = enumerate_term_subgraphs(a, Direction.RTOS)
        tb = enumerate_term_subgraphs(b, Direction.STOR)
        problem = None
        if ta and tb:
            e1 = rng.choice(tb)
            e2, e3 = rng.choice(ta), rng.choice(ta)
            for c in _union_cycles(g, lookup, e1, e2):
                for d in _union_cycles(g, lookup, e1, e3):
                    if c.key == d.key:
                        continue
                    res.bump("cycle pairs")
                    disjoint = not (set(c.vertices) & set(d.vertices))
                    if not disjoint and not s_to_r_intersection(c, d):
                        problem = f"case {case}: {c.edge_ids} / {d.edge_ids} a={a} b={b}"
        res.record(problem is None, problem or "")


SUITES: Dict[str, Tuple[Callable, int]] = {
    "prodformula": (suite_prodformula, 500),
    "es-cancellation": (suite_es_cancellation, 101),
    "p0-witness": (suite_p0_witness, 100),
    "mainthm": (suite_mainthm, 200),
    "cycles": (suite_cycles, 300),
    "cauchy-binet": (suite_cauchy_binet, 100),
    "permsigns": (suite_permsigns, 1000),
    "failed-pair": (suite_failed_pair, 200),
    "str-intersection": (suite_str_intersection, 300),
}


def run_suite(name: str, seed: int = 0, cases: Optional[int] = None) -> SuiteResult:
    """Run a named suite with its own seeded generator."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    fn, default = SUITES[name]
    res = SuiteResult(name, seed, cases if cases is not None else default)
    start = time.perf_counter()
    fn(random.Random(seed), res)
    res.seconds = time.perf_counter() - start
    return res
