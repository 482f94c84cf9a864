"""The eps-family D(eps) and its flat limit D(0).

D(eps) is stored as a lattice over the local ring ``R = Q[eps]`` localized at
``eps = 0``: a vector may be rescaled by any polynomial with nonzero constant
term.  Lowest-eps parts do not change under such rescaling, and they only
depend on the Q(eps)-span, so the limit is the same as for the plain
polynomial span, while membership in the lattice stays decidable.
"""

from __future__ import annotations

from collections import Counter, deque
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .polynomial import EPS, ONE, EpsPolynomial, poly_gcd
from .sparse import Echelon, ResourceLimitExceeded, TrackedEchelon, Vector
from .subspace_engine import WeightGradedSubspace, closure, is_stable
from .tensor import TensorAmbient, TensorOperator, poly_vector_at, rational_to_poly

PolyVector = dict


def valuation(vec: Mapping) -> int:
    return min(p.valuation for p in vec.values())


def _normalize(vec: PolyVector) -> PolyVector:
    """Divide out the unit part of the content and make the leading entry's lowest coefficient 1."""
    if not vec:
        return vec
    g = None
    for p in vec.values():
        g = p if g is None else poly_gcd(g, p)
        if g.is_constant():
            break
    unit = g.unit_part() if g is not None else ONE
    lead = vec[min(vec)]
    if not unit.is_constant():
        vec = {lab: p.exact_div(unit) for lab, p in vec.items()}
        lead = vec[min(vec)]
    c = lead.lowest_coefficient()
    if c != 1:
        inv = 1 / c
        vec = {lab: p * inv for lab, p in vec.items()}
    return vec


def _combine(u: EpsPolynomial, v: PolyVector, c: EpsPolynomial, row: PolyVector) -> PolyVector:
    """``u * v - c * row``."""
    out = {}
    for lab, p in v.items():
        q = u * p
        if q:
            out[lab] = q
    for lab, p in row.items():
        q = out.get(lab, EpsPolynomial()) - c * p
        if q:
            out[lab] = q
        else:
            out.pop(lab, None)
    return out


class PolyEchelon:
    """Triangular R-basis: one row per pivot label (its smallest label)."""

    def __init__(self):
        self.rows: dict = {}
        self.entries = 0

    def __len__(self):
        return len(self.rows)

    def insert(self, vec: PolyVector) -> bool:
        """Replace the lattice L by ``L + R vec``; True iff it grew."""
        v = _normalize(dict(vec))
        grew = False
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                self.rows[p] = v
                self.entries += len(v)
                return True
            s, t = row[p].valuation, v[p].valuation
            if t < s:
                self.rows[p] = v
                self.entries += len(v) - len(row)
                grew = True
                v, row = row, v
                s, t = t, s
            u = row[p].unit_part()
            w = v[p].unit_part()
            v = _normalize(_combine(u, v, w * EPS ** (t - s), row))
        return grew

    def contains(self, vec: PolyVector) -> bool:
        v = dict(vec)
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                return False
            s, t = row[p].valuation, v[p].valuation
            if t < s:
                return False
            v = _combine(row[p].unit_part(), v, v[p].unit_part() * EPS ** (t - s), row)
        return True

    def basis(self) -> list[PolyVector]:
        return [self.rows[p] for p in sorted(self.rows)]


class PolyLattice:
    def __init__(self, ambient: TensorAmbient):
        self.ambient = ambient
        self.spaces: dict = {}

    def _space(self, w) -> PolyEchelon:
        e = self.spaces.get(w)
        if e is None:
            e = self.spaces[w] = PolyEchelon()
        return e

    def insert(self, vec: PolyVector) -> bool:
        if not vec:
            return False
        return self._space(self.ambient.vector_weight(vec)).insert(vec)

    def contains(self, vec: PolyVector) -> bool:
        if not vec:
            return True
        e = self.spaces.get(self.ambient.vector_weight(vec))
        return e is not None and e.contains(vec)

    def weights(self) -> list:
        return sorted(w for w, e in self.spaces.items() if len(e))

    def entries(self) -> int:
        return sum(e.entries for e in self.spaces.values())

    def to_json(self) -> dict:
        out = []
        for w in self.weights():
            rows = []
            for row in self.spaces[w].basis():
                rows.append({"valuation": valuation(row),
                             "entries": [[list(lab), p.to_json()] for lab, p in sorted(row.items())]})
            out.append({"weight": list(w), "basis": rows})
        return {"generic_rank": generic_rank(self), "weights": out}


def generic_rank(L: PolyLattice) -> int:
    return sum(len(e) for e in L.spaces.values())


def generate_D_eps(ambient: TensorAmbient, seed: PolyVector, operators: Sequence[TensorOperator],
                   max_entries: Optional[int] = None) -> PolyLattice:
    """R-span of the orbit of ``seed`` under the algebra generated by ``operators``."""
    L = PolyLattice(ambient)
    queue: deque = deque()
    if seed and L.insert(seed):
        queue.append(dict(seed))
    while queue:
        v = queue.popleft()
        for op in operators:
            w = op.apply_poly(v)
            if w and L.insert(w):
                queue.append(w)
                if max_entries is not None and L.entries() > max_entries:
                    raise ResourceLimitExceeded(
                        f"lattice stored more than {max_entries} entries",
                        {"generic_rank_so_far": generic_rank(L), "entries": L.entries()})
    return L


def saturate_weight(basis: Sequence[PolyVector]) -> tuple[list[PolyVector], list[int]]:
    """Valuation saturation of one weight space.

    Returns a basis of the same Q(eps)-span whose values at ``eps = 0`` are
    independent, together with the level diagnostic of each vector.
    """
    B = [dict(b) for b in basis]
    levels = [0] * len(B)
    while True:
        tr = TrackedEchelon()
        dep = None
        for idx, b in enumerate(B):
            d = tr.insert(poly_vector_at(b, 0))
            if d is not None:
                dep = (idx, d)
                break
        if dep is None:
            return B, levels
        idx, combo = dep
        P: PolyVector = {}
        for t, c in combo.items():
            for lab, p in B[t].items():
                q = P.get(lab, EpsPolynomial()) + p * c
                if q:
                    P[lab] = q
                else:
                    P.pop(lab, None)
        if not P:
            raise ArithmeticError("lattice basis is dependent over Q(eps)")
        v = valuation(P)
        if v < 1:
            raise ArithmeticError("dependency at eps=0 did not vanish at eps=0")
        B[idx] = {lab: p.shift_down(v) for lab, p in P.items()}
        levels[idx] = v + max(levels[t] for t in combo)


class LimitSpace:
    """D(0) together with the lattice it came from and the level diagnostics."""

    def __init__(self, space: WeightGradedSubspace, lattice: PolyLattice, levels: dict):
        self.space = space
        self.lattice = lattice
        self.levels = levels

    def level_counts(self) -> dict:
        c = Counter()
        for lv in self.levels.values():
            c.update(lv)
        return dict(sorted(c.items()))

    def to_json(self) -> dict:
        data = self.space.to_json()
        data["levels"] = [{"weight": list(w), "levels": lv} for w, lv in sorted(self.levels.items())]
        return data


def saturate_at_zero(L: PolyLattice) -> LimitSpace:
    space = WeightGradedSubspace(L.ambient)
    levels = {}
    for w in L.weights():
        B, lv = saturate_weight(L.spaces[w].basis())
        for b in B:
            space.insert(poly_vector_at(b, 0))
        levels[w] = sorted(lv)
    if space.dimension() != generic_rank(L):
        raise ArithmeticError("limit dimension differs from generic rank")
    return LimitSpace(space, L, levels)


def symbolic_operators(ambient: TensorAmbient) -> list[TensorOperator]:
    from .contraction_algebra import assemble, derived_family

    N = max(m.N for m in ambient.modules)
    ops = [assemble(x, ambient) for x in derived_family(ambient.n, N, None)]
    return [op for op in ops if not op.is_zero()]


def limit_module(modules, max_entries: Optional[int] = None, check_stable: bool = True) -> LimitSpace:
    """``D(0)`` for the tensor product of ``modules`` (factor b at component b)."""
    from .contraction_algebra import derived_operators

    amb = modules if isinstance(modules, TensorAmbient) else TensorAmbient(modules)
    seed = rational_to_poly(amb.tensor([m.cyclic_vector() for m in amb.modules]))
    L = generate_D_eps(amb, seed, symbolic_operators(amb), max_entries=max_entries)
    lim = saturate_at_zero(L)
    if check_stable and not is_stable(lim.space, derived_operators(amb, 0)):
        raise ArithmeticError("D(0) is not stable under the eps=0 operators")
    return lim


# -- admissibility -----------------------------------------------------------------


def _twisted_matrices(m, b: int, eps0: Fraction):
    out = []
    for (i, j, k) in m.raising_keys():
        base = m.action(i, j, k)
        if i <= b < j:
            out.append(((i, j, k), base.scale(eps0) + m.action(i, j, k + 1)))
        else:
            out.append(((i, j, k), base))
    # keys whose own matrix is zero can still have a nonzero twisted image
    for i in range(1, m.n + 1):
        for j in range(i + 1, m.n + 1):
            if not (i <= b < j):
                continue
            for k in range(m.N):
                if (i, j, k) not in m.actions and (i, j, k + 1) in m.actions:
                    out.append(((i, j, k), m.action(i, j, k + 1)))
    return sorted(out, key=lambda kv: kv[0])


def _word_closure(seed: Vector, mats):
    """Closure with, for every new basis vector, a word reaching it from the seed."""
    ech = Echelon()
    vecs, words = [], []
    ech.insert(seed)
    vecs.append(dict(seed))
    words.append(())
    pos = 0
    while pos < len(vecs):
        v, word = vecs[pos], words[pos]
        for t, (_, mat) in enumerate(mats):
            w = mat.apply(v)
            if w and ech.insert(w):
                vecs.append(w)
                words.append(word + (t,))
        pos += 1
    return vecs, words


def _initial_graded_character(m, vecs) -> dict:
    """Character of the associated graded for the filtration by lowest z-degree."""
    order = {lab: (m.z_degrees[lab], lab) for lab in range(m.dim)}
    ech = Echelon()
    for v in vecs:
        ech.insert({order[lab]: c for lab, c in v.items()})
    counts = Counter()
    for p in ech.rows:
        counts[(m.weights[p[1]], p[0])] += 1
    return dict(sorted(counts.items()))


def b_admissibility_evidence(m, b: int, eps0=Fraction(1)) -> dict:
    """Compare the raising-current closure of v with its sh_b-twisted counterpart.

    Besides dimensions and characters, tries to build the intertwiner ``f``
    with ``f(x v) = sh_b(x) v`` on a word basis and checks ``f x = sh_b(x) f``
    for every raising generator ``x`` together with invertibility.
    """
    eps0 = Fraction(eps0)
    if eps0 == 0:
        raise ValueError("eps0 must be nonzero")
    if not 1 <= b <= m.n - 1:
        raise ValueError(f"need 1 <= b <= n-1, got {b}")
    raising = [(key, m.action(*key)) for key in m.raising_keys()]
    twisted = _twisted_matrices(m, b, eps0)
    # align generator lists on the same keys
    keys = sorted({k for k, _ in raising} | {k for k, _ in twisted})
    rmap, tmap = dict(raising), dict(twisted)
    from .sparse import OperatorMatrix

    def get(mp, key):
        return mp.get(key) or OperatorMatrix.zero((0,) * m.n)

    orig = [(k, get(rmap, k)) for k in keys]
    tw = [(k, get(tmap, k)) for k in keys]
    v = m.cyclic_vector()
    ovecs, owords = _word_closure(v, orig)
    tvecs, _ = _word_closure(v, tw)

    def char(vecs):
        ech = Echelon()
        for x in vecs:
            ech.insert(x)
        return dict(sorted(Counter(m.weights[p] for p in ech.rows).items()))

    report = {
        "b": b,
        "eps0": str(eps0),
        "module_dim": m.dim,
        "raising_closure_dim": len(ovecs),
        "twisted_closure_dim": len(tvecs),
    }
    oc, tc = char(ovecs), char(tvecs)
    report["weight_characters_equal"] = oc == tc
    og, tg = _initial_graded_character(m, ovecs), _initial_graded_character(m, tvecs)
    report["graded_characters_equal"] = og == tg
    report["raising_graded_character"] = [[list(w), d, c] for (w, d), c in og.items()]
    report["twisted_graded_character"] = [[list(w), d, c] for (w, d), c in tg.items()]

    cert = False
    if len(ovecs) == m.dim:
        images = []
        for word in owords:
            x = dict(v)
            for t in word:
                x = tw[t][1].apply(x)
            images.append(x)
        tr = TrackedEchelon()
        for x in ovecs:
            tr.insert(x)
        ind = TrackedEchelon()
        invertible = all(ind.insert(x) is None for x in images)

        def f(vec):
            coords = tr.coordinates(vec)
            out: Vector = {}
            for s, c in coords.items():
                for lab, a in images[s].items():
                    nv = out.get(lab, 0) + c * a
                    if nv:
                        out[lab] = nv
                    else:
                        out.pop(lab, None)
            return out

        intertwines = all(f(orig[t][1].apply(x)) == tw[t][1].apply(images[s])
                          for s, x in enumerate(ovecs) for t in range(len(keys)))
        cert = bool(invertible and intertwines)
        report["intertwiner_invertible"] = invertible
        report["intertwiner_commutes"] = intertwines
    report["intertwiner_certificate"] = cert
    report["raising_spans_module"] = len(ovecs) == m.dim
    report["twisted_spans_module"] = len(tvecs) == m.dim
    report["consistent"] = bool(len(ovecs) == len(tvecs) == m.dim and oc == tc and og == tg and cert)
    report["flagged"] = not report["consistent"]
    return report
