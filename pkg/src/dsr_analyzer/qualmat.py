"""Qualitative and exact-rational matrix computations.

A :class:`QualMatrix` describes a qualitative class of matrices: every entry
is either a fixed rational constant or a sign set (zero, nonnegative,
nonpositive, or unsigned). Entries are treated as varying independently of
one another; every result derived from a qualitative matrix holds under that
assumption only.

Concrete matrices are plain nested tuples of :class:`fractions.Fraction`.
All arithmetic is exact.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple, Union

__all__ = [
    "Sign",
    "MinorSign",
    "QualEntry",
    "QualMatrix",
    "ConcreteMatrix",
    "MinorResult",
    "P0Check",
    "P0Witness",
    "CapExceeded",
    "to_fraction",
    "concrete",
    "det",
    "minor",
    "matmul",
    "qual_minor_sign",
    "is_P0_minus",
    "p0_witnesses",
    "cauchy_binet",
    "DEFAULT_MINOR_CAP",
    "DEFAULT_P0_CAP",
]

DEFAULT_MINOR_CAP = 8
DEFAULT_P0_CAP = 12

ConcreteMatrix = Tuple[Tuple[Fraction, ...], ...]
Number = Union[int, Fraction, str]


class CapExceeded(ValueError):
    """A size cap was exceeded; the computation was not attempted."""


class Sign(enum.Enum):
    """Sign set of a qualitative entry."""

    ZERO = "0"
    POS = "+"
    NEG = "-"
    UNSIGNED = "?"

    def __neg__(self) -> "Sign":
        return {Sign.POS: Sign.NEG, Sign.NEG: Sign.POS}.get(self, self)

    @property
    def strict_signs(self) -> frozenset:
        """Strict signs (+1/-1) realizable by an entry with this sign set."""
        return _STRICT[self]

    @classmethod
    def of(cls, value) -> "Sign":
        if value > 0:
            return cls.POS
        if value < 0:
            return cls.NEG
        return cls.ZERO


_STRICT = {
    Sign.ZERO: frozenset(),
    Sign.POS: frozenset({1}),
    Sign.NEG: frozenset({-1}),
    Sign.UNSIGNED: frozenset({1, -1}),
}


class MinorSign(enum.Enum):
    ZERO = "0"
    POS = "+"
    NEG = "-"
    UNSIGNED = "?"
    UNKNOWN = "unknown"

    @property
    def is_strict(self) -> bool:
        return self in (MinorSign.POS, MinorSign.NEG)

    @property
    def value_sign(self) -> int:
        """+1, -1 or 0 for ZERO/POS/NEG; raises for the others."""
        try:
            return {MinorSign.ZERO: 0, MinorSign.POS: 1, MinorSign.NEG: -1}[self]
        except KeyError:
            raise ValueError(f"{self} has no definite sign") from None


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; use exact rationals")
    return Fraction(x)


@dataclass(frozen=True)
class QualEntry:
    """One entry of a qualitative matrix.

    ``fixed`` holds the exact value when the entry is a declared constant.
    """

    sign: Sign
    fixed: Optional[Fraction] = None

    def __post_init__(self):
        if self.sign is Sign.ZERO and self.fixed is None:
            object.__setattr__(self, "fixed", Fraction(0))
        if self.fixed is not None:
            if Sign.of(self.fixed) is not self.sign:
                raise ValueError(
                    f"fixed value {self.fixed} inconsistent with sign {self.sign.value}"
                )

    @classmethod
    def const(cls, value: Number) -> "QualEntry":
        v = to_fraction(value)
        return cls(Sign.of(v), v)

    @classmethod
    def parse(cls, token) -> "QualEntry":
        """Read an entry from a sign symbol (``0 + - ?``) or a rational."""
        if isinstance(token, QualEntry):
            return token
        if isinstance(token, Sign):
            return ZERO if token is Sign.ZERO else cls(token)
        if isinstance(token, str) and token in ("+", "-", "?"):
            return cls(Sign(token))
        return cls.const(token)

    @property
    def is_zero(self) -> bool:
        return self.sign is Sign.ZERO

    @property
    def is_fixed(self) -> bool:
        return self.fixed is not None

    def __neg__(self) -> "QualEntry":
        return QualEntry(-self.sign, None if self.fixed is None else -self.fixed)

    def without_value(self) -> "QualEntry":
        return self if self.fixed is None or self.is_zero else QualEntry(self.sign)

    def __str__(self) -> str:
        if self.fixed is not None:
            return str(self.fixed)
        return self.sign.value


ZERO = QualEntry(Sign.ZERO, Fraction(0))


@dataclass(frozen=True)
class QualMatrix:
    """Dense grid of :class:`QualEntry`."""

    entries: Tuple[Tuple[QualEntry, ...], ...]
    cols_hint: int = 0

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix rows")
        if self.entries:
            object.__setattr__(self, "cols_hint", len(self.entries[0]))

    @classmethod
    def build(cls, rows: Iterable[Iterable], cols: int = 0) -> "QualMatrix":
        """Build from nested iterables of entries, sign symbols or rationals.

        ``cols`` is only consulted when there are no rows.
        """
        grid = tuple(tuple(QualEntry.parse(x) for x in r) for r in rows)
        return cls(grid, cols if not grid else len(grid[0]))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QualMatrix":
        return cls(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def from_concrete(cls, matrix: Sequence[Sequence[Number]]) -> "QualMatrix":
        return cls.build(([to_fraction(x) for x in r] for r in matrix))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else self.cols_hint

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: Tuple[int, int]) -> QualEntry:
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "QualMatrix":
        if not self.entries:
            return QualMatrix(tuple(() for _ in range(self.cols)), 0)
        if not self.cols:
            return QualMatrix((), self.rows)
        return QualMatrix(tuple(zip(*self.entries)), self.rows)

    def __neg__(self) -> "QualMatrix":
        return QualMatrix(tuple(tuple(-e for e in r) for r in self.entries), self.cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QualMatrix":
        return QualMatrix(
            tuple(tuple(self.entries[i][j] for j in cols) for i in rows), len(cols)
        )

    @property
    def is_fixed(self) -> bool:
        return all(e.is_fixed for r in self.entries for e in r)

    @property
    def is_sign_class(self) -> bool:
        """True when no nonzero entry is pinned to a constant.

        With independent entries such a class is closed under zeroing any
        row/column complement, which is what the sign-class property asks.
        """
        return not any(e.is_fixed and not e.is_zero for r in self.entries for e in r)

    def sign_pattern(self) -> Tuple[str, ...]:
        return tuple("".join(e.sign.value for e in r) for r in self.entries)

    def to_concrete(self) -> ConcreteMatrix:
        if not self.is_fixed:
            raise ValueError("matrix has non-fixed entries")
        return tuple(tuple(e.fixed for e in r) for r in self.entries)

    def __str__(self) -> str:
        cells = [[str(e) for e in r] for r in self.entries]
        if not cells:
            return f"[] ({self.rows}x{self.cols})"
        w = max(len(c) for r in cells for c in r)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)


# -- concrete helpers -------------------------------------------------------


def concrete(rows: Iterable[Iterable[Number]]) -> ConcreteMatrix:
    """Coerce nested numbers to a :data:`ConcreteMatrix`."""
    return tuple(tuple(to_fraction(x) for x in r) for r in rows)


def _shape(a: ConcreteMatrix) -> Tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def det(a: ConcreteMatrix) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    m = [list(r) for r in a]
    result = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        pivot = m[c][c]
        result *= pivot
        for r in range(c + 1, n):
            f = m[r][c]
            if f:
                f /= pivot
                row_r, row_c = m[r], m[c]
                for k in range(c + 1, n):
                    row_r[k] -= f * row_c[k]
    return result


def minor(a: ConcreteMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    if len(rows) != len(cols):
        raise ValueError("minor needs equally many rows and columns")
    return det(tuple(tuple(a[i][j] for j in cols) for i in rows))


def matmul(a: ConcreteMatrix, b: ConcreteMatrix) -> ConcreteMatrix:
    n, m = _shape(a)
    m2, p = _shape(b)
    if m != m2 and not (n == 0 or p == 0):
        raise ValueError(f"cannot multiply {n}x{m} by {m2}x{p}")
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(m)), Fraction(0)) for j in range(p))
        for i in range(n)
    )


# -- qualitative minors -----------------------------------------------------


class MinorResult(NamedTuple):
    sign: MinorSign
    value: Optional[Fraction] = None


def _check_indices(n: int, idx: Sequence[int], what: str) -> None:
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated {what} index")
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"{what} index {i} out of range 0..{n - 1}")


def qual_minor_sign(
    m: QualMatrix,
    rows: Sequence[int],
    cols: Sequence[int],
    cap: int = DEFAULT_MINOR_CAP,
) -> MinorResult:
    """Sign of the minor ``m[rows|cols]`` over the whole qualitative class.

    The determinant is expanded over all permutations. Terms are grouped by
    the set of non-fixed entries they multiply, so that terms differing only
    in fixed factors are summed exactly before any sign is read off. With
    independent entries, each surviving monomial's sign is realizable, which
    makes the answer exact:

    * ``ZERO`` if every monomial cancels,
    * ``POS``/``NEG`` if all surviving monomials agree (weakly signed minor),
    * ``UNSIGNED`` otherwise,
    * ``UNKNOWN`` if ``len(rows)`` exceeds ``cap``.

    The exact value is returned as well when every entry involved is fixed.
    """
    rows, cols = tuple(rows), tuple(cols)
    if len(rows) != len(cols):
        raise ValueError("minor needs equally many rows and columns")
    _check_indices(m.rows, rows, "row")
    _check_indices(m.cols, cols, "column")
    k = len(rows)
    if k == 0:
        return MinorResult(MinorSign.POS, Fraction(1))
    if k > cap:
        return MinorResult(MinorSign.UNKNOWN)

    sub = [[m.entries[i][j] for j in cols] for i in rows]
    # monomial key (tuple of non-fixed positions) -> [exact coefficient, has_unsigned]
    monomials: dict = {}

    def expand(r: int, used: int, parity: int, coeff: Fraction, free: tuple, unsigned: bool):
        if r == k:
            slot = monomials.get(free)
            if slot is None:
                monomials[free] = [parity * coeff, unsigned]
            else:
                slot[0] += parity * coeff
            return
        row = sub[r]
        # parity of the permutation is tracked by counting inversions as columns are placed
        for c in range(k):
            if used >> c & 1:
                continue
            e = row[c]
            if e.is_zero:
                continue
            inv = bin(used >> c).count("1")
            p = -parity if inv & 1 else parity
            if e.fixed is not None:
                expand(r + 1, used | 1 << c, p, coeff * e.fixed, free, unsigned)
            elif e.sign is Sign.UNSIGNED:
                expand(r + 1, used | 1 << c, p, coeff, free + ((r, c),), True)
            else:
                s = 1 if e.sign is Sign.POS else -1
                expand(r + 1, used | 1 << c, p * s, coeff, free + ((r, c),), unsigned)

    expand(0, 0, 1, Fraction(1), (), False)

    signs = set()
    for free, (coeff, unsigned) in monomials.items():
        if coeff == 0:
            continue
        if unsigned:
            return MinorResult(MinorSign.UNSIGNED)
        signs.add(1 if coeff > 0 else -1)
    if not signs:
        return MinorResult(MinorSign.ZERO, Fraction(0) if _all_fixed(sub) else None)
    if len(signs) == 2:
        return MinorResult(MinorSign.UNSIGNED)
    sign = MinorSign.POS if signs == {1} else MinorSign.NEG
    if _all_fixed(sub):
        return MinorResult(sign, monomials[()][0])
    return MinorResult(sign)


def _all_fixed(sub) -> bool:
    return all(e.is_fixed for r in sub for e in r)


# -- P0^(-) classification -------------------------------------------------


class P0Check(NamedTuple):
    holds: bool
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.holds


def _square(a: ConcreteMatrix) -> int:
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix is not square")
    return n


def _subsets_lex(n: int):
    """Nonempty subsets of range(n) in lexicographic order of sorted tuples."""
    def rec(prefix, start):
        for i in range(start, n):
            s = prefix + (i,)
            yield s
            yield from rec(s, i + 1)
    return rec((), 0)


def is_P0_minus(a: ConcreteMatrix, cap: int = DEFAULT_P0_CAP) -> P0Check:
    """Whether ``-a`` is a P0 matrix: ``(-1)^|d| a[d] >= 0`` for all principal ``d``.

    On failure the lexicographically smallest violating index set is returned.
    """
    n = _square(a)
    if n > cap:
        raise CapExceeded(f"{n}x{n} exceeds the principal-minor cap {cap}")
    for d in _subsets_lex(n):
        value = minor(a, d, d)
        if (-value if len(d) % 2 else value) < 0:
            return P0Check(False, d)
    return P0Check(True)


@dataclass(frozen=True)
class P0Witness:
    """Positive diagonals showing ``a - D`` takes determinants of both signs.

    ``det(a - D1) < 0 < det(a - D2)``; the determinant along
    ``lam*D1 + (1-lam)*D2`` changes sign inside ``[lam_low, lam_high]``.
    """

    d1: Tuple[Fraction, ...]
    d2: Tuple[Fraction, ...]
    lam: Fraction
    lam_low: Fraction
    lam_high: Fraction
    violating_set: Tuple[int, ...]
    det1: Fraction
    det2: Fraction


def _det_minus_diag(a: ConcreteMatrix, d: Sequence[Fraction]) -> Fraction:
    return det(tuple(
        tuple(a[i][j] - (d[i] if i == j else 0) for j in range(len(a)))
        for i in range(len(a))
    ))


def p0_witnesses(
    a: ConcreteMatrix,
    tol: Fraction = Fraction(1, 10**12),
    cap: int = DEFAULT_P0_CAP,
    max_halvings: int = 400,
) -> P0Witness:
    """Construct the positive diagonal witnesses for a non-P0^(-) matrix.

    Two candidates are built: ``(1/eps) I``, and the diagonal with ``eps`` on
    the violating set and ``1/eps`` elsewhere. ``eps`` starts at 1 and is
    halved until each determinant has its limiting sign, ``(-1)^n`` for the
    first and ``-(-1)^n`` for the second. They are then labelled so that
    ``det(a - D1) < 0 < det(a - D2)``, which for even ``n`` means the second
    candidate becomes ``D1``. The sign change on the segment between them is
    located by bisection on ``lam``, probing the determinant exactly.
    """
    n = _square(a)
    check = is_P0_minus(a, cap)
    if check.holds:
        raise ValueError("matrix is P0^(-); det(a - D) never changes sign")
    d0 = set(check.witness)
    limit = (-1) ** n

    def search(make, want: int):
        eps = Fraction(1)
        for _ in range(max_halvings):
            d = make(eps)
            value = _det_minus_diag(a, d)
            if value * want > 0:
                return d, value
            eps /= 2
        raise ArithmeticError("epsilon search did not terminate")

    scaled = search(lambda e: tuple(1 / e for _ in range(n)), limit)
    split = search(lambda e: tuple(e if i in d0 else 1 / e for i in range(n)), -limit)
    (d1, det1), (d2, det2) = (scaled, split) if limit < 0 else (split, scaled)

    def f(lam: Fraction) -> Fraction:
        return _det_minus_diag(a, [lam * x + (1 - lam) * y for x, y in zip(d1, d2)])

    lo, hi = Fraction(0), Fraction(1)  # f(lo) > 0 > f(hi)
    lam = None
    while hi - lo > tol:
        mid = (lo + hi) / 2
        v = f(mid)
        if v == 0:
            lam = lo = hi = mid
            break
        if v > 0:
            lo = mid
        else:
            hi = mid
    if lam is None:
        lam = (lo + hi) / 2
    return P0Witness(d1, d2, lam, lo, hi, check.witness, det1, det2)


def cauchy_binet(a: ConcreteMatrix, b: ConcreteMatrix, rows: Sequence[int]) -> Fraction:
    """``sum_g a[rows|g] * b[g|rows]``, checked against ``(ab)[rows]``.

    When ``rows`` is larger than the inner dimension the sum is empty and the
    product minor must vanish.
    """
    n, m = _shape(a)
    m2, n2 = _shape(b)
    if (m, n) != (m2, n2):
        raise ValueError(f"shapes {n}x{m} and {m2}x{n2} are not transposed")
    rows = tuple(rows)
    _check_indices(n, rows, "row")
    total = sum(
        (minor(a, rows, g) * minor(b, g, rows) for g in itertools.combinations(range(m), len(rows))),
        Fraction(0),
    )
    direct = minor(matmul(a, b), rows, rows)
    if total != direct:
        raise ArithmeticError(f"Cauchy-Binet mismatch: {total} != {direct}")
    return total
