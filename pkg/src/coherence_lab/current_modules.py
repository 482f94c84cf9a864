"""Finite-dimensional graded cyclic modules over the current algebra gl_n[z].

Basis vectors are the integers ``0 .. dim-1``; each carries a weight, a
z-degree and a display name.  ``actions[(i, j, k)]`` is the matrix of
``E_{i,j} z^k``; missing keys act as zero, and so does every ``k >= N``.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import gt_core
from .sparse import (Echelon, OperatorMatrix, TrackedEchelon, Vector, frac_str, parse_frac,
                     scaled)

MODULE_FORMAT = "coherence-lab-module"
MODULE_FORMAT_VERSION = 1


class ModuleValidationError(ValueError):
    pass


def _root(n, i, j):
    v = [0] * n
    v[i - 1] += 1
    v[j - 1] -= 1
    return tuple(v)


class GradedCurrentModule:
    def __init__(self, n: int, N: int, weights, z_degrees, actions: Mapping, cyclic_index: int,
                 names=None, meta=None, graded: bool = True, validate: bool = True):
        self.n = int(n)
        self.N = int(N)
        self.weights = [tuple(int(c) for c in w) for w in weights]
        self.z_degrees = [int(d) for d in z_degrees]
        self.names = list(names) if names is not None else [f"b{t}" for t in range(len(self.weights))]
        self.cyclic_index = int(cyclic_index)
        self.meta = dict(meta or {})
        self.graded = bool(graded)
        self.actions: dict[tuple[int, int, int], OperatorMatrix] = {}
        for key, mat in actions.items():
            i, j, k = key
            if not mat.is_zero():
                self.actions[(i, j, k)] = OperatorMatrix(mat.columns, _root(self.n, i, j), k)
        if validate:
            self.validate()

    # -- basic accessors ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.weights)

    def action(self, i: int, j: int, k: int = 0) -> OperatorMatrix:
        if k >= self.N:
            return OperatorMatrix.zero(_root(self.n, i, j), k)
        return self.actions.get((i, j, k)) or OperatorMatrix.zero(_root(self.n, i, j), k)

    def action_keys(self):
        n = self.n
        return [(i, j, k) for k in range(self.N) for i in range(1, n + 1) for j in range(1, n + 1)]

    def cyclic_vector(self) -> Vector:
        return {self.cyclic_index: Fraction(1)}

    def cyclic_weight(self) -> tuple[int, ...]:
        return self.weights[self.cyclic_index]

    def top_weight(self) -> tuple[int, ...]:
        """Dominant weight in the orbit of the cyclic vector's weight."""
        return tuple(sorted(self.cyclic_weight(), reverse=True))

    def character(self) -> dict:
        return dict(sorted(Counter(self.weights).items()))

    def graded_character(self) -> dict:
        return dict(sorted(Counter(zip(self.weights, self.z_degrees)).items()))

    def __eq__(self, other):
        if not isinstance(other, GradedCurrentModule):
            return NotImplemented
        return (self.n, self.N, self.weights, self.z_degrees, self.names, self.cyclic_index,
                self.meta, self.graded, self.actions) == (
            other.n, other.N, other.weights, other.z_degrees, other.names, other.cyclic_index,
            other.meta, other.graded, other.actions)

    def __repr__(self):
        return f"GradedCurrentModule(n={self.n}, N={self.N}, dim={self.dim}, {self.meta.get('kind', '?')})"

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        n, d = self.n, self.dim
        if n < 2:
            raise ModuleValidationError("rank must be at least 2")
        if self.N < 1:
            raise ModuleValidationError("truncation N must be at least 1")
        if len(self.z_degrees) != d or len(self.names) != d:
            raise ModuleValidationError("basis metadata lengths disagree")
        if any(len(w) != n for w in self.weights):
            raise ModuleValidationError("basis weight of wrong length")
        if not 0 <= self.cyclic_index < d:
            raise ModuleValidationError("cyclic index out of range")
        for (i, j, k), mat in self.actions.items():
            if not (1 <= i <= n and 1 <= j <= n and 0 <= k < self.N):
                raise ModuleValidationError(f"action key {(i, j, k)} out of range")
            shift = _root(n, i, j)
            for src, img in mat.columns.items():
                if not 0 <= src < d:
                    raise ModuleValidationError(f"E({i},{j})z^{k}: source {src} out of range")
                for dst in img:
                    if not 0 <= dst < d:
                        raise ModuleValidationError(f"E({i},{j})z^{k}: target {dst} out of range")
                    want = tuple(a + b for a, b in zip(self.weights[src], shift))
                    if self.weights[dst] != want:
                        raise ModuleValidationError(
                            f"E({i},{j})z^{k} maps {src} to {dst} of the wrong weight")
                    if self.graded and self.z_degrees[dst] != self.z_degrees[src] + k:
                        raise ModuleValidationError(
                            f"E({i},{j})z^{k} maps {src} to {dst} of the wrong z-degree")
        bad = self.bracket_defects(first_only=True)
        if bad:
            raise ModuleValidationError(f"bracket relation fails for {bad[0]}")
        if len(self.span_closure([self.cyclic_vector()])) != d:
            raise ModuleValidationError("module is not cyclic from its cyclic vector")

    def bracket_defects(self, first_only: bool = False) -> list:
        keys = self.action_keys()
        bad = []
        for a, x in enumerate(keys):
            for y in keys[a:]:
                (i, j, p), (k, l, q) = x, y
                lhs = self.action(*x).commutator(self.action(*y))
                s = p + q
                if s < self.N:
                    rhs = OperatorMatrix.zero(lhs.weight_shift)
                    if j == k:
                        rhs = rhs + self.action(i, l, s)
                    if l == i:
                        rhs = rhs - self.action(k, j, s)
                    ok = lhs.columns == rhs.columns
                else:
                    # the truncated ideal must act trivially; ungraded modules are exempt
                    ok = lhs.is_zero() or not self.graded
                if not ok:
                    bad.append((x, y))
                    if first_only:
                        return bad
        return bad

    # -- internal closures --------------------------------------------------

    def span_closure(self, seeds, keys=None) -> Echelon:
        """Span of ``seeds`` closed under the actions listed in ``keys`` (default: all)."""
        mats = [self.actions[key] for key in (keys if keys is not None else sorted(self.actions))
                if key in self.actions]
        ech = Echelon()
        queue = deque()
        for s in seeds:
            if ech.insert(s):
                queue.append(dict(s))
        while queue:
            v = queue.popleft()
            for m in mats:
                w = m.apply(v)
                if w and ech.insert(w):
                    queue.append(w)
        return ech

    def raising_keys(self):
        return [key for key in sorted(self.actions) if key[0] < key[1]]

    def degree_zero_keys(self):
        return [key for key in sorted(self.actions) if key[2] == 0 and key[0] != key[1]]

    # -- persistence --------------------------------------------------------

    def to_json(self) -> dict:
        actions = []
        for key in sorted(self.actions):
            i, j, k = key
            entries = [[dst, src, frac_str(v)] for dst, src, v in self.actions[key].entries()]
            actions.append({"i": i, "j": j, "k": k, "entries": entries})
        basis = [{"name": nm, "weight": list(w), "z_degree": zd}
                 for nm, w, zd in zip(self.names, self.weights, self.z_degrees)]
        return {
            "format": MODULE_FORMAT,
            "version": MODULE_FORMAT_VERSION,
            "n": self.n,
            "N": self.N,
            "graded": self.graded,
            "basis": basis,
            "cyclic_index": self.cyclic_index,
            "meta": self.meta,
            "actions": actions,
        }

    @classmethod
    def from_json(cls, data: dict, validate: bool = True) -> "GradedCurrentModule":
        try:
            if data.get("format") != MODULE_FORMAT:
                raise ModuleValidationError(f"unknown format tag {data.get('format')!r}")
            if data.get("version") != MODULE_FORMAT_VERSION:
                raise ModuleValidationError(f"unsupported module format version {data.get('version')!r}")
            n, N = int(data["n"]), int(data["N"])
            basis = data["basis"]
            actions = {}
            for rec in data["actions"]:
                key = (int(rec["i"]), int(rec["j"]), int(rec["k"]))
                if key in actions:
                    raise ModuleValidationError(f"duplicate action {key}")
                cols: dict = {}
                for dst, src, val in rec["entries"]:
                    v = parse_frac(val)
                    if v == 0:
                        raise ModuleValidationError("stored zero entry")
                    cols.setdefault(int(src), {})[int(dst)] = v
                actions[key] = OperatorMatrix(cols, _root(n, key[0], key[1]), key[2])
            return cls(n, N, [b["weight"] for b in basis], [b["z_degree"] for b in basis], actions,
                       data["cyclic_index"], names=[b["name"] for b in basis], meta=data.get("meta", {}),
                       graded=data.get("graded", True), validate=validate)
        except ModuleValidationError:
            raise
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ModuleValidationError(f"malformed module file: {exc}") from exc


def dumps_module(m: GradedCurrentModule) -> str:
    return json.dumps(m.to_json(), indent=1, sort_keys=True) + "\n"


def save_module(m: GradedCurrentModule, path) -> None:
    Path(path).write_text(dumps_module(m), encoding="utf-8")


def load_module(path, validate: bool = True) -> GradedCurrentModule:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModuleValidationError(f"malformed module file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ModuleValidationError(f"malformed module file {path}: top level is not an object")
    return GradedCurrentModule.from_json(data, validate=validate)


# -- constructors -------------------------------------------------------------


def _gt_actions(lam, N: int, scale_k=lambda k: 0 if k else 1):
    pats = gt_core.enumerate_patterns(lam)
    index = {p: t for t, p in enumerate(pats)}
    n = len(lam)
    actions = {}
    for i, j in product(range(1, n + 1), repeat=2):
        base = gt_core.matrix_unit_action(i, j, lam)
        cols = {index[s]: {index[d]: v for d, v in img.items()} for s, img in base.columns.items()}
        for k in range(N):
            c = Fraction(scale_k(k))
            if c:
                actions[(i, j, k)] = OperatorMatrix({s: scaled(img, c) for s, img in cols.items()},
                                                    base.weight_shift, k)
    return pats, index, actions


def finite_module(lam: Sequence[int], validate: bool = True) -> GradedCurrentModule:
    """V_lam with z acting trivially; cyclic vector is the lowest-weight pattern."""
    lam = gt_core.check_highest_weight(lam)
    pats, index, actions = _gt_actions(lam, 1)
    low = index[gt_core.lowest_pattern(lam)]
    return GradedCurrentModule(len(lam), 1, [gt_core.pattern_weight(p) for p in pats], [0] * len(pats),
                               actions, low, names=[repr(p) for p in pats],
                               meta={"kind": "finite", "highest_weight": list(lam)}, validate=validate)


def evaluation_module(lam: Sequence[int], c, N: int = 1, validate: bool = True) -> GradedCurrentModule:
    """V_lam with ``x z^k`` acting as ``c^k x`` (ungraded unless ``c == 0``)."""
    lam = gt_core.check_highest_weight(lam)
    c = Fraction(c)
    pats, index, actions = _gt_actions(lam, N, lambda k: c ** k)
    low = index[gt_core.lowest_pattern(lam)]
    return GradedCurrentModule(len(lam), N, [gt_core.pattern_weight(p) for p in pats], [0] * len(pats),
                               actions, low, names=[repr(p) for p in pats],
                               meta={"kind": "evaluation", "highest_weight": list(lam), "point": str(c)},
                               graded=(c == 0), validate=validate)


def fusion_module(inputs: Sequence, validate: bool = True) -> GradedCurrentModule:
    """Associated graded of the cyclic current module inside a tensor product of evaluation modules.

    ``inputs`` is a list of ``(highest_weight, point)`` with distinct points.
    The filtration level of a vector is the least total z-degree of a word
    reaching it from the tensor product of lowest-weight vectors.
    """
    from .tensor import TensorAmbient, TensorOperator
    from .polynomial import EpsPolynomial

    if not inputs:
        raise ValueError("fusion of an empty list")
    lams = [gt_core.check_highest_weight(l) for l, _ in inputs]
    points = [Fraction(c) for _, c in inputs]
    if len(set(points)) != len(points):
        raise ValueError(f"fusion points must be pairwise distinct, got {[str(p) for p in points]}")
    n = len(lams[0])
    if any(len(l) != n for l in lams):
        raise ValueError("rank mismatch among fusion inputs")
    R = len(points)
    factors = [finite_module(l, validate=False) for l in lams]
    amb = TensorAmbient(factors)

    def op(i, j, k):
        terms = [(f, EpsPolynomial.const(points[f] ** k), factors[f].action(i, j, 0)) for f in range(R)]
        return TensorOperator(terms, _root(n, i, j))

    pairs = list(product(range(1, n + 1), repeat=2))
    deg0_ops = [op(i, j, 0) for i, j in pairs if i != j]
    seed = amb.tensor([m.cyclic_vector() for m in factors])

    ech = Echelon()
    basis: list[Vector] = []
    degrees: list[int] = []

    def close_degree_zero(start, d):
        queue = deque(start)
        while queue:
            v = queue.popleft()
            for g in deg0_ops:
                w = g.apply(v)
                if w and ech.insert(w):
                    basis.append(w)
                    degrees.append(d)
                    queue.append(w)

    ech.insert(seed)
    basis.append(seed)
    degrees.append(0)
    close_degree_zero([seed], 0)
    d = 0
    while True:
        d += 1
        new = []
        for k in range(1, min(d, R - 1) + 1):
            gk = [op(i, j, k) for i, j in pairs]
            sources = [b for b, e in zip(list(basis), list(degrees)) if e == d - k]
            for v in sources:
                for g in gk:
                    w = g.apply(v)
                    if w and ech.insert(w):
                        basis.append(w)
                        degrees.append(d)
                        new.append(w)
        if not new:
            break
        close_degree_zero(new, d)
    top = max(degrees)
    N = top + 1

    tracker = TrackedEchelon()
    for b in basis:
        tracker.insert(b)
    weights = [amb.vector_weight(b) for b in basis]
    actions = {}
    for k in range(N):
        for i, j in pairs:
            g = op(i, j, k)
            cols = {}
            for t, b in enumerate(basis):
                coords = tracker.coordinates(g.apply(b))
                if coords is None:
                    raise ArithmeticError("fusion filtration is not stable under the action")
                lvl = degrees[t] + k
                img = {}
                for s, val in coords.items():
                    if degrees[s] > lvl:
                        raise ArithmeticError("action raised the filtration level by more than k")
                    if degrees[s] == lvl:
                        img[s] = val
                if img:
                    cols[t] = img
            if cols:
                actions[(i, j, k)] = OperatorMatrix(cols, _root(n, i, j), k)
    names = []
    seen = Counter()
    for w, dd in zip(weights, degrees):
        names.append(f"d{dd}:" + ",".join(map(str, w)) + f"#{seen[(w, dd)]}")
        seen[(w, dd)] += 1
    meta = {"kind": "fusion",
            "inputs": [{"highest_weight": list(l), "point": str(c)} for l, c in zip(lams, points)]}
    return GradedCurrentModule(n, N, weights, degrees, actions, 0, names=names, meta=meta,
                               validate=validate)


def with_action_zeroed(m: GradedCurrentModule, key) -> GradedCurrentModule:
    """Copy of ``m`` with one action matrix replaced by zero (not validated)."""
    actions = {k: v for k, v in m.actions.items() if k != tuple(key)}
    meta = dict(m.meta, corrupted=list(key))
    return GradedCurrentModule(m.n, m.N, m.weights, m.z_degrees, actions, m.cyclic_index,
                               names=m.names, meta=meta, graded=m.graded, validate=False)


def trivial_module(n: int) -> GradedCurrentModule:
    return finite_module((0,) * n)


# -- queries -----------------------------------------------------------------


def cartan_component(modules: Sequence[GradedCurrentModule], max_entries: Optional[int] = None):
    """Current-algebra span of the tensor product of cyclic vectors."""
    from .subspace_engine import closure, current_operators
    from .tensor import TensorAmbient

    amb = TensorAmbient(modules)
    seed = amb.tensor([m.cyclic_vector() for m in modules])
    return closure(amb, [seed], current_operators(amb), max_entries=max_entries)


def demazure_presentation_check(m: GradedCurrentModule) -> dict:
    """Necessary conditions for ``m`` to be a spherical Demazure-type input."""
    v = m.cyclic_vector()
    lower_kill = all(not m.action(i, j, k).apply(v) for (i, j, k) in m.action_keys() if i > j)
    diag_kill = all(not m.action(i, i, k).apply(v) for i in range(1, m.n + 1) for k in range(1, m.N))
    raising_span = len(m.span_closure([v], m.raising_keys()))
    wt = m.cyclic_weight()
    antidominant = all(wt[a] <= wt[a + 1] for a in range(m.n - 1))
    report = {
        "lowering_current_kills_v": lower_kill,
        "z_cartan_current_kills_v": diag_kill,
        "raising_current_cyclic": raising_span == m.dim,
        "cyclic_weight": list(wt),
        "cyclic_weight_antidominant": antidominant,
        "dim": m.dim,
        "graded": m.graded,
        "graded_character": graded_character_table(m),
    }
    report["passed"] = bool(lower_kill and diag_kill and raising_span == m.dim and antidominant and m.graded)
    return report


def graded_character_table(m: GradedCurrentModule) -> list:
    return [[list(w), d, c] for (w, d), c in m.graded_character().items()]


def extremal_vector(m: GradedCurrentModule, sigma: Sequence[int]) -> Vector:
    """Extremal vector of weight ``sigma(lambda)`` in the degree-0 subrepresentation generated by v."""
    lam = m.top_weight()
    n = m.n
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    target = tuple(lam[s - 1] for s in sigma)
    sub = m.span_closure([m.cyclic_vector()], m.degree_zero_keys())
    hits = [row for row in sub.rref() if m.weights[min(row)] == target]
    if len(hits) != 1:
        raise ValueError(f"weight {target} space of the degree-0 part has dimension {len(hits)}, expected 1")
    row = hits[0]
    lead = row[min(row)]
    return scaled(row, 1 / lead)
