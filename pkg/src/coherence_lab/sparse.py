"""Sparse exact linear algebra over Q.

Vectors are plain ``dict`` objects mapping a hashable, totally ordered basis
label to a nonzero :class:`~fractions.Fraction`.  Zero entries are never
stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Iterator, Mapping, Optional

Label = Hashable
Vector = Dict[Label, Fraction]


class ResourceLimitExceeded(RuntimeError):
    """Raised when an elimination stores more entries than its cap allows."""

    def __init__(self, message: str, partial: Optional[dict] = None):
        super().__init__(message)
        self.partial = partial or {}


def frac_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"rational must be a string, got {s!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {s!r}") from None


def add_into(target: Vector, other: Mapping[Label, Fraction], scale: Fraction = Fraction(1)) -> None:
    """``target += scale * other`` in place, dropping cancelled entries."""
    if not scale:
        return
    for label, value in other.items():
        new = target.get(label, 0) + scale * value
        if new:
            target[label] = new
        else:
            target.pop(label, None)


def scaled(vec: Mapping[Label, Fraction], scale: Fraction) -> Vector:
    if not scale:
        return {}
    return {label: value * scale for label, value in vec.items()}


def vectors_equal(u: Mapping, v: Mapping) -> bool:
    return dict(u) == dict(v)


class OperatorMatrix:
    """A sparse linear map stored column by column.

    ``columns[src]`` is the image of the basis vector ``src``.  The map is
    homogeneous: every image of a vector of weight ``w`` has weight
    ``w + weight_shift`` and every z-degree moves by ``degree_shift``.
    """

    __slots__ = ("columns", "weight_shift", "degree_shift")

    def __init__(self, columns: Mapping[Label, Mapping[Label, Fraction]], weight_shift, degree_shift: int = 0):
        self.columns = {src: dict(img) for src, img in columns.items() if img}
        self.weight_shift = tuple(weight_shift)
        self.degree_shift = degree_shift

    @classmethod
    def zero(cls, weight_shift, degree_shift: int = 0) -> "OperatorMatrix":
        return cls({}, weight_shift, degree_shift)

    def apply(self, vec: Mapping[Label, Fraction]) -> Vector:
        out: Vector = {}
        for label, value in vec.items():
            col = self.columns.get(label)
            if col:
                add_into(out, col, value)
        return out

    def image(self, label: Label) -> Mapping[Label, Fraction]:
        return self.columns.get(label, {})

    def compose(self, other: "OperatorMatrix") -> "OperatorMatrix":
        """Matrix of ``self . other`` (apply ``other`` first)."""
        cols = {src: self.apply(img) for src, img in other.columns.items()}
        shift = tuple(a + b for a, b in zip(self.weight_shift, other.weight_shift))
        return OperatorMatrix(cols, shift, self.degree_shift + other.degree_shift)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        cols = {src: dict(img) for src, img in self.columns.items()}
        for src, img in other.columns.items():
            col = cols.setdefault(src, {})
            add_into(col, img)
        return OperatorMatrix(cols, self.weight_shift or other.weight_shift, self.degree_shift)

    def scale(self, c: Fraction) -> "OperatorMatrix":
        return OperatorMatrix({s: scaled(img, c) for s, img in self.columns.items()},
                              self.weight_shift, self.degree_shift)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + other.scale(Fraction(-1))

    def commutator(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self.compose(other) - other.compose(self)

    def is_zero(self) -> bool:
        return not any(self.columns.values())

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.columns == other.columns

    def entries(self) -> Iterator[tuple[Label, Label, Fraction]]:
        """Triplets ``(row, col, value)`` in sorted order."""
        for src in sorted(self.columns):
            img = self.columns[src]
            for dst in sorted(img):
                yield dst, src, img[dst]

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns.values())

    def pretty(self, fmt: Callable[[Label], str] = str) -> str:
        lines = [f"OperatorMatrix(weight_shift={self.weight_shift}, degree_shift={self.degree_shift})"]
        for dst, src, val in self.entries():
            lines.append(f"  {fmt(dst)} <- {fmt(src)} : {val}")
        return "\n".join(lines)


class Echelon:
    """Semi-echelon basis of a subspace of Q^(labels).

    Each stored row has pivot equal to its smallest label, with pivot
    coefficient 1, and pivots are distinct.  :meth:`rref` returns the unique
    reduced echelon basis, so two spans are equal iff their ``rref`` agree.
    """

    def __init__(self, max_entries: Optional[int] = None):
        self.rows: Dict[Label, Vector] = {}
        self.max_entries = max_entries
        self._entries = 0

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[Label, Fraction]) -> Vector:
        """Remainder of ``vec`` after eliminating every pivot label."""
        v = dict(vec)
        rows = self.rows
        while True:
            hits = [label for label in v if label in rows]
            if not hits:
                return v
            p = min(hits)
            add_into(v, rows[p], -v[p])

    def insert(self, vec: Mapping[Label, Fraction]) -> bool:
        """Add ``vec`` to the span; return True iff the span grew."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        c = v[p]
        if c != 1:
            v = scaled(v, 1 / c)
        self.rows[p] = v
        self._entries += len(v)
        if self.max_entries is not None and self._entries > self.max_entries:
            raise ResourceLimitExceeded(
                f"echelon storage exceeded {self.max_entries} entries",
                {"rows": len(self.rows), "entries": self._entries},
            )
        return True

    def contains(self, vec: Mapping[Label, Fraction]) -> bool:
        return not self.reduce(vec)

    def rref(self) -> list[Vector]:
        pivots = sorted(self.rows)
        rows = {p: dict(self.rows[p]) for p in pivots}
        for p in reversed(pivots):
            row = rows[p]
            for q in pivots:
                if q >= p:
                    break
                other = rows[q]
                c = other.get(p)
                if c:
                    add_into(other, row, -c)
        return [rows[p] for p in pivots]


def rank(vectors: Iterable[Mapping[Label, Fraction]]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return len(ech)


class TrackedEchelon:
    """Echelon basis that remembers how each row was formed from the inputs.

    ``rows[p]`` is a reduced vector with pivot ``p`` and ``combos[p]`` holds the
    coefficients (keyed by input index) with ``rows[p] = sum c_t * input_t``.
    """

    def __init__(self):
        self.rows: Dict[Label, Vector] = {}
        self.combos: Dict[Label, Vector] = {}
        self.count = 0

    def _reduce(self, vec, combo):
        v = dict(vec)
        rows = self.rows
        while True:
            hits = [label for label in v if label in rows]
            if not hits:
                return v, combo
            p = min(hits)
            c = -v[p]
            add_into(v, rows[p], c)
            add_into(combo, self.combos[p], c)

    def insert(self, vec: Mapping[Label, Fraction]) -> Optional[Vector]:
        """Register input number ``self.count``.

        Returns None when the vector was independent, otherwise a dependency
        ``{t: c_t}`` with ``sum c_t input_t = 0`` involving the new input.
        """
        idx = self.count
        self.count += 1
        v, combo = self._reduce(vec, {idx: Fraction(1)})
        if not v:
            return combo
        p = min(v)
        c = v[p]
        if c != 1:
            v = scaled(v, 1 / c)
            combo = scaled(combo, 1 / c)
        self.rows[p] = v
        self.combos[p] = combo
        return None

    def coordinates(self, vec: Mapping[Label, Fraction]) -> Optional[Vector]:
        """Coefficients ``{t: c_t}`` with ``vec = sum c_t input_t``, or None."""
        v, combo = self._reduce(vec, {})
        if v:
            return None
        return scaled(combo, Fraction(-1))


def coordinates_in(basis: list, vec: Mapping[Label, Fraction]) -> Optional[Vector]:
    tr = TrackedEchelon()
    for b in basis:
        tr.insert(b)
    return tr.coordinates(vec)


def kernel_basis(vectors: list) -> list[Vector]:
    """Basis of ``{c : sum c_t vectors[t] = 0}`` as sparse coefficient maps."""
    tr = TrackedEchelon()
    out = []
    for v in vectors:
        dep = tr.insert(v)
        if dep is not None:
            out.append(dep)
    return out
