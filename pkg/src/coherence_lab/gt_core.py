"""Gelfand-Tsetlin patterns and exact gl_n actions on irreducible modules.

A pattern is stored row by row, ``rows[k-1]`` being row ``k`` (length ``k``),
so ``rows[-1]`` is the highest weight.  Rows are non-increasing and satisfy
``rows[k][i] >= rows[k-1][i] >= rows[k][i+1]``.

The raising and lowering operators use the classical Gelfand-Tsetlin
formulas in the unnormalised basis, with ``l_{k,i} = lambda_{k,i} - i + 1``::

    E_{k,k+1} xi = - sum_i  prod_j (l_ki - l_{k+1,j}) / prod_{j!=i} (l_ki - l_kj)  xi[+d_ki]
    E_{k+1,k} xi =   sum_i  prod_j (l_ki - l_{k-1,j}) / prod_{j!=i} (l_ki - l_kj)  xi[-d_ki]

All coefficients are rational, so the matrices are exact.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterator, Sequence

from .sparse import OperatorMatrix

HighestWeight = tuple[int, ...]
WeightVector = tuple[int, ...]


class GTPattern(tuple):
    """Immutable Gelfand-Tsetlin pattern; a tuple of rows (row 1 first)."""

    __slots__ = ()

    def __new__(cls, rows: Sequence[Sequence[int]]):
        return super().__new__(cls, tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def top(self) -> tuple[int, ...]:
        return self[-1]

    def sort_key(self) -> tuple[int, ...]:
        """Row-major reading from the top row down."""
        return tuple(x for row in reversed(self) for x in row)

    def is_valid(self) -> bool:
        for k, row in enumerate(self):
            if len(row) != k + 1:
                return False
            if any(row[i] < row[i + 1] for i in range(k)):
                return False
            if k:
                below = self[k - 1]
                if any(not (row[i] >= below[i] >= row[i + 1]) for i in range(k)):
                    return False
        return True

    def __repr__(self):
        return "GT" + "/".join(",".join(map(str, r)) for r in reversed(self))

    def pretty(self) -> str:
        n = len(self)
        lines = []
        for k in range(n, 0, -1):
            lines.append(" " * (n - k) * 2 + "   ".join(f"{x:>1}" for x in self[k - 1]))
        return "\n".join(lines)


def check_highest_weight(lam: Sequence[int]) -> HighestWeight:
    lam = tuple(int(x) for x in lam)
    if len(lam) < 2:
        raise ValueError(f"highest weight needs n >= 2 entries, got {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"highest weight must be non-increasing, got {lam}")
    return lam


def _rows_below(row: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All rows of length len(row)-1 interlacing with ``row``."""
    k = len(row) - 1
    if k == 0:
        yield ()
        return

    def rec(i, acc):
        if i == k:
            yield tuple(acc)
            return
        for x in range(row[i + 1], row[i] + 1):
            acc.append(x)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


@lru_cache(maxsize=None)
def _enumerate(lam: HighestWeight) -> tuple[GTPattern, ...]:
    out = []

    def rec(rows):
        if len(rows[0]) == 1:
            out.append(GTPattern(rows))
            return
        for r in _rows_below(rows[0]):
            rec([r] + rows)

    rec([lam])
    out.sort(key=GTPattern.sort_key)
    return tuple(out)


def enumerate_patterns(lam: Sequence[int]) -> list[GTPattern]:
    """All GT patterns with top row ``lam``, in row-major lexicographic order."""
    return list(_enumerate(check_highest_weight(lam)))


def weyl_dimension(lam: Sequence[int]) -> int:
    """Weyl product formula; independent of pattern enumeration."""
    lam = check_highest_weight(lam)
    n = len(lam)
    num = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            num *= Fraction(lam[i] - lam[j] + j - i, j - i)
    assert num.denominator == 1
    return int(num)


def pattern_weight(p: GTPattern) -> WeightVector:
    sums = [0] + [sum(row) for row in p]
    return tuple(sums[k] - sums[k - 1] for k in range(1, len(sums)))


def extremal_pattern(lam: Sequence[int], sigma: Sequence[int]) -> GTPattern:
    """Pattern of the extremal vector of weight ``(lam[sigma(1)], ..., lam[sigma(n)])``.

    ``sigma`` lists the images ``sigma(1), ..., sigma(n)`` (1-based).  Row ``k``
    holds ``lam[sigma(1)], ..., lam[sigma(k)]`` sorted into non-increasing order.
    """
    lam = check_highest_weight(lam)
    n = len(lam)
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    rows = [tuple(sorted((lam[s - 1] for s in sigma[:k]), reverse=True)) for k in range(1, n + 1)]
    return GTPattern(rows)


def lowest_pattern(lam: Sequence[int]) -> GTPattern:
    n = len(lam)
    return extremal_pattern(lam, tuple(range(n, 0, -1)))


def highest_pattern(lam: Sequence[int]) -> GTPattern:
    return extremal_pattern(lam, tuple(range(1, len(lam) + 1)))


def all_permutations(n: int) -> list[tuple[int, ...]]:
    """S_n as 1-based image tuples, in lexicographic order."""
    return list(permutations(range(1, n + 1)))


def _delta(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i - 1] = 1
    return v


def _root(n: int, i: int, j: int) -> WeightVector:
    v = _delta(n, i)
    v[j - 1] -= 1
    return tuple(v)


def _l(row: tuple[int, ...], i: int) -> int:
    # l_{k,i} with 0-based i
    return row[i] - i


def _denominator(row: tuple[int, ...], i: int) -> int:
    d = 1
    li = _l(row, i)
    for j in range(len(row)):
        if j != i:
            d *= li - _l(row, j)
    if d == 0:
        raise ArithmeticError(f"vanishing Gelfand-Tsetlin denominator in row {row} at {i}")
    return d


def _replace(p: GTPattern, k: int, i: int, delta: int) -> GTPattern:
    rows = list(p)
    row = list(rows[k - 1])
    row[i] += delta
    rows[k - 1] = tuple(row)
    return GTPattern(rows)


@lru_cache(maxsize=None)
def _raising(lam: HighestWeight, k: int) -> OperatorMatrix:
    n = len(lam)
    cols = {}
    for p in _enumerate(lam):
        row, above = p[k - 1], p[k]
        img = {}
        for i in range(k):
            q = _replace(p, k, i, 1)
            if not q.is_valid():
                continue
            li = _l(row, i)
            num = 1
            for j in range(k + 1):
                num *= li - _l(above, j)
            if num:
                img[q] = Fraction(-num, _denominator(row, i))
        cols[p] = img
    return OperatorMatrix(cols, _root(n, k, k + 1))


@lru_cache(maxsize=None)
def _lowering(lam: HighestWeight, k: int) -> OperatorMatrix:
    n = len(lam)
    cols = {}
    for p in _enumerate(lam):
        row = p[k - 1]
        below = p[k - 2] if k >= 2 else ()
        img = {}
        for i in range(k):
            q = _replace(p, k, i, -1)
            if not q.is_valid():
                continue
            li = _l(row, i)
            num = 1
            for j in range(k - 1):
                num *= li - _l(below, j)
            if num:
                img[q] = Fraction(num, _denominator(row, i))
        cols[p] = img
    return OperatorMatrix(cols, _root(n, k + 1, k))


@lru_cache(maxsize=None)
def _diagonal(lam: HighestWeight, k: int) -> OperatorMatrix:
    n = len(lam)
    cols = {}
    for p in _enumerate(lam):
        c = pattern_weight(p)[k - 1]
        if c:
            cols[p] = {p: Fraction(c)}
    return OperatorMatrix(cols, (0,) * n)


def generator_action(g: str, k: int, lam: Sequence[int]) -> OperatorMatrix:
    """Matrix of ``e_k``, ``f_k`` (``1 <= k < n``) or ``E_kk`` (``g = "h"``) on V_lam."""
    lam = check_highest_weight(lam)
    n = len(lam)
    if g in ("e", "f"):
        if not 1 <= k <= n - 1:
            raise ValueError(f"index k={k} out of range for {g} with n={n}")
        return _raising(lam, k) if g == "e" else _lowering(lam, k)
    if g in ("h", "E"):
        if not 1 <= k <= n:
            raise ValueError(f"index k={k} out of range for E_kk with n={n}")
        return _diagonal(lam, k)
    raise ValueError(f"unknown generator {g!r}")


@lru_cache(maxsize=None)
def _matrix_unit(lam: HighestWeight, i: int, j: int) -> OperatorMatrix:
    if i == j:
        return _diagonal(lam, i)
    if j == i + 1:
        return _raising(lam, i)
    if i == j + 1:
        return _lowering(lam, j)
    if i < j:
        return _matrix_unit(lam, i, i + 1).commutator(_matrix_unit(lam, i + 1, j))
    return _matrix_unit(lam, i, i - 1).commutator(_matrix_unit(lam, i - 1, j))


def matrix_unit_action(i: int, j: int, lam: Sequence[int]) -> OperatorMatrix:
    """Matrix of ``E_{i,j}`` on ``V_lam`` in the GT basis."""
    lam = check_highest_weight(lam)
    n = len(lam)
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"matrix unit E_({i},{j}) out of range for n={n}")
    return _matrix_unit(lam, i, j)


def character(lam: Sequence[int]) -> dict[WeightVector, int]:
    return dict(sorted(Counter(pattern_weight(p) for p in enumerate_patterns(lam)).items()))


def commutation_defect(mats, n: int) -> list[tuple]:
    """Pairs of indices where ``[E_ij, E_kl] != d_jk E_il - d_li E_kj`` fails.

    ``mats`` maps ``(i, j)`` to an :class:`OperatorMatrix`.
    """
    bad = []
    units = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for a, (i, j) in enumerate(units):
        for (k, l) in units[a + 1:]:
            lhs = mats[i, j].commutator(mats[k, l])
            rhs = OperatorMatrix.zero(lhs.weight_shift)
            if j == k:
                rhs = rhs + mats[i, l]
            if l == i:
                rhs = rhs - mats[k, j]
            if lhs.columns != rhs.columns:
                bad.append(((i, j), (k, l)))
    return bad


def partitions_in_box(n: int, max_entry: int, last_zero: bool = False) -> list[HighestWeight]:
    """Non-increasing n-tuples with entries in ``[0, max_entry]``."""
    out = []

    def rec(acc, cap):
        if len(acc) == n:
            if not last_zero or acc[-1] == 0:
                out.append(tuple(acc))
            return
        for x in range(cap, -1, -1):
            rec(acc + [x], x)

    rec([], max_entry)
    return sorted(out)


def partitions_of_size(n: int, size: int) -> list[HighestWeight]:
    """Partitions of ``size`` with at most ``n - 1`` nonzero parts, padded to length n."""
    out = []

    def rec(acc, remaining, cap):
        if len(acc) == n - 1:
            if remaining == 0:
                out.append(tuple(acc) + (0,))
            return
        for x in range(min(cap, remaining), -1, -1):
            rec(acc + [x], remaining - x, x)

    rec([], size, size)
    return sorted(out, reverse=True)
