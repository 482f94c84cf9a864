"""Subspaces of tensor products closed under a finite set of operators.

A :class:`WeightGradedSubspace` keeps one echelon basis per weight.  The
reduced echelon form is canonical, so two subspaces are equal exactly when their
per-weight ``rref`` lists agree, regardless of how they were generated.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

from .gt_core import all_permutations
from .polynomial import ONE
from .sparse import Echelon, ResourceLimitExceeded, Vector, frac_str, kernel_basis
from .tensor import TensorAmbient, TensorOperator


class WeightGradedSubspace:
    def __init__(self, ambient: TensorAmbient):
        self.ambient = ambient
        self.spaces: dict[tuple[int, ...], Echelon] = {}

    # -- construction -----------------------------------------------------------

    def _space(self, weight) -> Echelon:
        ech = self.spaces.get(weight)
        if ech is None:
            ech = self.spaces[weight] = Echelon()
        return ech

    def insert(self, vec: Vector) -> Optional[Vector]:
        """Add ``vec``; return the reduced remainder if the span grew."""
        if not vec:
            return None
        ech = self._space(self.ambient.vector_weight(vec))
        rem = ech.reduce(vec)
        if not rem:
            return None
        ech.insert(rem)
        return rem

    @classmethod
    def from_vectors(cls, ambient, vectors: Iterable[Vector]) -> "WeightGradedSubspace":
        s = cls(ambient)
        for v in vectors:
            s.insert(v)
        return s

    # -- queries ----------------------------------------------------------------

    def dimension(self) -> int:
        return sum(len(e) for e in self.spaces.values())

    def __len__(self):
        return self.dimension()

    def weights(self) -> list:
        return sorted(w for w, e in self.spaces.items() if len(e))

    def character(self) -> dict:
        return {w: len(self.spaces[w]) for w in self.weights()}

    def rref(self) -> dict:
        return {w: self.spaces[w].rref() for w in self.weights()}

    def basis(self) -> list[Vector]:
        out = []
        for w in self.weights():
            out.extend(self.spaces[w].rref())
        return out

    def contains(self, vec: Vector) -> bool:
        if not vec:
            return True
        w = self.ambient.vector_weight(vec)
        ech = self.spaces.get(w)
        return ech is not None and ech.contains(vec)

    def weight_dimension(self, weight) -> int:
        ech = self.spaces.get(tuple(weight))
        return len(ech) if ech else 0

    def issubset(self, other: "WeightGradedSubspace") -> bool:
        return all(other.contains(v) for v in self.basis())

    def __eq__(self, other):
        if not isinstance(other, WeightGradedSubspace):
            return NotImplemented
        return self.rref() == other.rref()

    def degree_character(self, degree: str = "iwahori") -> dict:
        """Map ``(weight, degree) -> multiplicity``.

        The subspace must be spanned by degree-homogeneous vectors; then every
        canonical basis row is homogeneous and the count is read off the rows.
        """
        fn = _degree_fn(self.ambient, degree)
        counts = Counter()
        for w in self.weights():
            for row in self.spaces[w].rref():
                degs = {fn(lab) for lab in row}
                if len(degs) != 1:
                    raise ValueError(f"subspace is not homogeneous for the {degree} grading at weight {w}")
                counts[(w, degs.pop())] += 1
        return dict(sorted(counts.items()))

    def graded_pieces(self, degree: str = "iwahori") -> dict:
        """Homogeneous canonical basis rows grouped by ``(weight, degree)``."""
        fn = _degree_fn(self.ambient, degree)
        out: dict = {}
        for w in self.weights():
            for row in self.spaces[w].rref():
                out.setdefault((w, fn(min(row))), []).append(row)
        return out

    # -- dumps ------------------------------------------------------------------

    def to_json(self) -> dict:
        weights = []
        for w, rows in self.rref().items():
            weights.append({"weight": list(w),
                            "basis": [[[list(lab), frac_str(v)] for lab, v in sorted(row.items())]
                                      for row in rows]})
        return {"dimension": self.dimension(), "weights": weights}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"

    def character_tsv(self, degree: Optional[str] = None) -> str:
        lines = []
        if degree is None:
            lines.append("weight\tmultiplicity")
            for w, c in self.character().items():
                lines.append(f"{','.join(map(str, w))}\t{c}")
        else:
            lines.append(f"weight\t{degree}_degree\tmultiplicity")
            for (w, d), c in self.degree_character(degree).items():
                lines.append(f"{','.join(map(str, w))}\t{d}\t{c}")
        return "\n".join(lines) + "\n"


def _degree_fn(ambient: TensorAmbient, degree: str) -> Callable:
    if degree == "iwahori":
        return ambient.iwahori_degree
    if degree == "z":
        return ambient.z_degree
    raise ValueError(f"unknown grading {degree!r}")


def sum_spaces(a: WeightGradedSubspace, b: WeightGradedSubspace) -> WeightGradedSubspace:
    if a.ambient is not b.ambient and a.ambient.modules != b.ambient.modules:
        raise ValueError("subspaces live in different ambient spaces")
    return WeightGradedSubspace.from_vectors(a.ambient, a.basis() + b.basis())


def intersection_dimension(a: WeightGradedSubspace, b: WeightGradedSubspace) -> int:
    return a.dimension() + b.dimension() - sum_spaces(a, b).dimension()


# -- closure -----------------------------------------------------------------------


def closure(ambient: TensorAmbient, seeds: Iterable[Vector], operators: Sequence[TensorOperator],
            max_entries: Optional[int] = None) -> WeightGradedSubspace:
    """Smallest subspace containing ``seeds`` and stable under ``operators``.

    Work list is FIFO; every vector that enlarges the span of its weight is
    queued once and hit by every operator in order.
    """
    for op in operators:
        if not op.is_numeric():
            raise ValueError(f"operator {op.name} still depends on eps; specialize it first")
    space = WeightGradedSubspace(ambient)
    queue: deque = deque()
    stored = 0

    def push(v):
        nonlocal stored
        w = ambient.vector_weight(v)
        ech = space._space(w)
        rem = ech.reduce(v)
        if not rem:
            return
        ech.insert(rem)
        stored += len(rem)
        if max_entries is not None and stored > max_entries:
            raise ResourceLimitExceeded(
                f"closure stored more than {max_entries} entries",
                {"dimension_so_far": space.dimension(), "entries": stored,
                 "character_so_far": {",".join(map(str, k)): v for k, v in space.character().items()}})
        queue.append(rem)

    for s in seeds:
        if s:
            push(s)
    while queue:
        v = queue.popleft()
        for op in operators:
            w = op.apply(v)
            if w:
                push(w)
    return space


def current_operators(ambient: TensorAmbient) -> list[TensorOperator]:
    """All ``E_{i,j} z^k`` acting diagonally, except the degree-zero Cartan part."""
    n = ambient.n
    N = max(m.N for m in ambient.modules)
    ops = []
    for k in range(N):
        for i, j in product(range(1, n + 1), repeat=2):
            if i == j and k == 0:
                continue
            shift = [0] * n
            shift[i - 1] += 1
            shift[j - 1] -= 1
            terms = [(f, ONE, m.action(i, j, k)) for f, m in enumerate(ambient.modules)]
            op = TensorOperator(terms, tuple(shift), f"E{i}{j}z{k}")
            if not op.is_zero():
                ops.append(op)
    return ops


def conjecture_seeds(ambient: TensorAmbient) -> list[tuple[tuple[int, ...], Vector, tuple[int, ...]]]:
    """``(sigma, w(sigma), weight)`` for every sigma, in lexicographic order of sigma."""
    from .current_modules import extremal_vector

    out = []
    for sigma in all_permutations(ambient.n):
        vec = ambient.tensor([extremal_vector(m, sigma) for m in ambient.modules])
        out.append((sigma, vec, ambient.vector_weight(vec)))
    return out


def kk_closure(ambient: TensorAmbient, seed: Vector, operators, max_entries: Optional[int] = None):
    return closure(ambient, [seed], operators, max_entries=max_entries)


def conjecture_closure(ambient: TensorAmbient, operators, max_entries: Optional[int] = None):
    seeds = [v for _, v, _ in conjecture_seeds(ambient)]
    return closure(ambient, seeds, operators, max_entries=max_entries)


def one_seed_closures(ambient: TensorAmbient, operators, max_entries: Optional[int] = None) -> list:
    return [(sigma, kk_closure(ambient, v, operators, max_entries))
            for sigma, v, _ in conjecture_seeds(ambient)]


def is_stable(space: WeightGradedSubspace, operators) -> bool:
    for v in space.basis():
        for op in operators:
            if not space.contains(op.apply(v)):
                return False
    return True


def joint_kernel(space: WeightGradedSubspace, operators) -> list[Vector]:
    """Basis of the vectors of ``space`` killed by every operator."""
    out = []
    for w in space.weights():
        rows = space.spaces[w].rref()
        images = []
        for row in rows:
            img = {}
            for t, op in enumerate(operators):
                for lab, v in op.apply(row).items():
                    img[(t,) + lab] = v
            images.append(img)
        for combo in kernel_basis(images):
            vec: Vector = {}
            for idx, c in combo.items():
                for lab, v in rows[idx].items():
                    nv = vec.get(lab, 0) + c * v
                    if nv:
                        vec[lab] = nv
                    else:
                        vec.pop(lab, None)
            out.append(vec)
    return out
