"""Tensor products of graded current modules and operators acting on them.

A tensor basis label is a tuple of per-factor basis indices.  Each factor
carries a component label ``c`` in ``Z/nZ``; a loop element acts on that factor
through its ``c``-th component.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .polynomial import EpsPolynomial, ZERO
from .sparse import OperatorMatrix, Vector, add_into

TensorLabel = tuple[int, ...]


class TensorAmbient:
    """Bookkeeping for ``M_0 (x) ... (x) M_{r-1}`` with factor components."""

    def __init__(self, modules: Sequence, components: Optional[Sequence[int]] = None):
        if not modules:
            raise ValueError("tensor product of no modules")
        n = modules[0].n
        if any(m.n != n for m in modules):
            raise ValueError("rank mismatch among tensor factors")
        self.modules = list(modules)
        self.n = n
        self.components = list(range(len(modules))) if components is None else list(components)
        if len(self.components) != len(self.modules):
            raise ValueError("one component label per factor is required")
        self._wt_cache: dict = {}

    @property
    def arity(self) -> int:
        return len(self.modules)

    def dimension(self) -> int:
        d = 1
        for m in self.modules:
            d *= m.dim
        return d

    def weight(self, label: TensorLabel) -> tuple[int, ...]:
        w = self._wt_cache.get(label)
        if w is None:
            acc = [0] * self.n
            for m, x in zip(self.modules, label):
                for i, c in enumerate(m.weights[x]):
                    acc[i] += c
            w = tuple(acc)
            self._wt_cache[label] = w
        return w

    def z_degree(self, label: TensorLabel) -> int:
        return sum(m.z_degrees[x] for m, x in zip(self.modules, label))

    def iwahori_degree(self, label: TensorLabel) -> int:
        """Grading for which every degree-k element of the eps=0 algebra is homogeneous.

        Factor ``f`` at component ``c`` contributes its z-degree plus the sum of
        its weight coordinates with (1-based) index greater than ``c``.
        """
        d = 0
        for m, x, c in zip(self.modules, label, self.components):
            d += m.z_degrees[x] + sum(m.weights[x][c:])
        return d

    def vector_weight(self, vec: Mapping) -> tuple[int, ...]:
        weights = {self.weight(lab) for lab in vec}
        if len(weights) != 1:
            raise ValueError(f"vector is not weight-homogeneous: weights {sorted(weights)}")
        return weights.pop()

    def tensor(self, vectors: Sequence[Mapping[int, Fraction]]) -> Vector:
        """Pure tensor of per-factor vectors."""
        out: Vector = {(): Fraction(1)}
        for v in vectors:
            nxt: Vector = {}
            for lab, a in out.items():
                for x, b in v.items():
                    nxt[lab + (x,)] = a * b
            out = nxt
        return out

    def basis_vector(self, label: TensorLabel) -> Vector:
        return {tuple(label): Fraction(1)}


class TensorOperator:
    """``sum_t coeff_t * (id (x) .. (x) M_t (x) .. (x) id)`` with eps-polynomial coefficients.

    ``terms`` is a list of ``(factor, EpsPolynomial, OperatorMatrix)``.  The
    operator is weight-homogeneous with shift ``weight_shift``.
    """

    def __init__(self, terms, weight_shift, name: str = ""):
        self.terms = [(f, c, m) for f, c, m in terms if c and not m.is_zero()]
        self.weight_shift = tuple(weight_shift)
        self.name = name

    def is_zero(self) -> bool:
        return not self.terms

    def specialize(self, eps) -> "TensorOperator":
        """Numeric operator with every coefficient evaluated at ``eps``."""
        terms = []
        for f, c, m in self.terms:
            v = c(eps)
            if v:
                terms.append((f, EpsPolynomial.const(v), m))
        return TensorOperator(terms, self.weight_shift, self.name)

    def is_numeric(self) -> bool:
        return all(c.is_constant() for _, c, _ in self.terms)

    def apply(self, vec: Mapping[TensorLabel, Fraction]) -> Vector:
        """Action on a rational vector; coefficients must be constants."""
        out: Vector = {}
        for f, c, m in self.terms:
            if not c.is_constant():
                raise ValueError("apply() needs a specialized operator; use apply_poly()")
            scale = c.constant
            cols = m.columns
            for lab, val in vec.items():
                col = cols.get(lab[f])
                if not col:
                    continue
                head, tail = lab[:f], lab[f + 1:]
                sv = scale * val
                for dst, a in col.items():
                    key = head + (dst,) + tail
                    new = out.get(key, 0) + sv * a
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
        return out

    def apply_poly(self, vec: Mapping[TensorLabel, EpsPolynomial]) -> dict:
        """Action on a vector with eps-polynomial entries."""
        out: dict = {}
        for f, c, m in self.terms:
            cols = m.columns
            for lab, val in vec.items():
                col = cols.get(lab[f])
                if not col:
                    continue
                head, tail = lab[:f], lab[f + 1:]
                cv = c * val
                for dst, a in col.items():
                    key = head + (dst,) + tail
                    new = out.get(key, ZERO) + cv * a
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
        return out

    def __repr__(self):
        return f"TensorOperator({self.name or '?'}, {len(self.terms)} terms, shift={self.weight_shift})"


def diagonal_operator(ambient: TensorAmbient, matrices_per_factor: Iterable[tuple[int, OperatorMatrix]],
                      weight_shift, name: str = "") -> TensorOperator:
    """Operator acting by the given matrices on the given factors with coefficient 1."""
    one = EpsPolynomial.const(1)
    return TensorOperator([(f, one, m) for f, m in matrices_per_factor], weight_shift, name)


def poly_vector_at(vec: Mapping[TensorLabel, EpsPolynomial], eps) -> Vector:
    out: Vector = {}
    for lab, p in vec.items():
        v = p(eps)
        if v:
            out[lab] = v
    return out


def rational_to_poly(vec: Mapping[TensorLabel, Fraction]) -> dict:
    return {lab: EpsPolynomial.const(v) for lab, v in vec.items() if v}


def vector_sum(vectors: Iterable[Mapping]) -> Vector:
    out: Vector = {}
    for v in vectors:
        add_into(out, v)
    return out
