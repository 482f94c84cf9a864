"""The eps-parametric subalgebras of (+)_b gl_n[z] and their action on tensor products.

Internally everything uses one convention: components are labelled
``b = 0..n-1`` and the factor at component ``b`` carries the lowest-weight
cyclic vector.  For ``i < j`` the generator built from ``E_{i,j} z^k`` is
multiplied by ``(z + eps)`` exactly on the components ``i <= b < j``; the
generator built from ``E_{j,i} z^k`` is multiplied on the complementary
components.  Other presentations are reached through :class:`Labeling`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence, Union

from .polynomial import EPS, ONE, ZERO, EpsPolynomial
from .sparse import Echelon, Vector

Term = tuple[int, int, int, int]  # (component b, i, j, z-power k)
EpsLike = Union[None, int, Fraction, EpsPolynomial]


def _as_poly(c) -> EpsPolynomial:
    return c if isinstance(c, EpsPolynomial) else EpsPolynomial.const(c)


def _eps_value(eps: EpsLike) -> EpsPolynomial:
    """``None`` means the formal variable."""
    return EPS if eps is None else _as_poly(eps)


class LoopElement:
    """Finite sum of ``coeff * E_{i,j} z^k`` placed on component ``b``."""

    __slots__ = ("n", "terms", "name")

    def __init__(self, n: int, terms: Mapping[Term, EpsPolynomial] = (), name: str = ""):
        self.n = n
        clean = {}
        for key, c in dict(terms).items():
            c = _as_poly(c)
            if c:
                b, i, j, k = key
                if not (0 <= b < n and 1 <= i <= n and 1 <= j <= n and k >= 0):
                    raise ValueError(f"bad loop term {key} for n={n}")
                clean[key] = c
        self.terms = clean
        self.name = name

    @classmethod
    def unit(cls, n, b, i, j, k=0, coeff=ONE, name=""):
        return cls(n, {(b, i, j, k): coeff}, name)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, ZERO) + c
        return LoopElement(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "LoopElement":
        c = _as_poly(c)
        return LoopElement(self.n, {key: v * c for key, v in self.terms.items()}, self.name)

    def __eq__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((k, v.coeffs) for k, v in self.terms.items())))

    def bracket(self, other: "LoopElement", N: Optional[int] = None) -> "LoopElement":
        """Componentwise commutator; terms with z-power ``>= N`` are dropped."""
        out: dict = {}
        for (b, i, j, p), c in self.terms.items():
            for (b2, k, l, q), d in other.terms.items():
                if b != b2:
                    continue
                s = p + q
                if N is not None and s >= N:
                    continue
                cd = c * d
                if j == k:
                    key = (b, i, l, s)
                    out[key] = out.get(key, ZERO) + cd
                if l == i:
                    key = (b, k, j, s)
                    out[key] = out.get(key, ZERO) - cd
        return LoopElement(self.n, out)

    def truncate(self, N: int) -> "LoopElement":
        return LoopElement(self.n, {key: c for key, c in self.terms.items() if key[3] < N}, self.name)

    def specialize(self, eps) -> "LoopElement":
        return LoopElement(self.n, {key: EpsPolynomial.const(c(eps)) for key, c in self.terms.items()},
                           self.name)

    def is_numeric(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    def weight_shift(self) -> tuple[int, ...]:
        roots = {(i, j) for (_, i, j, _) in self.terms}
        shifts = set()
        for i, j in roots:
            v = [0] * self.n
            v[i - 1] += 1
            v[j - 1] -= 1
            shifts.add(tuple(v))
        if len(shifts) > 1:
            raise ValueError(f"loop element {self.name or self} is not weight-homogeneous")
        return shifts.pop() if shifts else (0,) * self.n

    def component(self, b: int) -> dict:
        return {(i, j, k): c for (bb, i, j, k), c in self.terms.items() if bb == b}

    def as_vector(self) -> Vector:
        """Rational coordinate vector keyed by term; coefficients must be constants."""
        out = {}
        for key, c in self.terms.items():
            if not c.is_constant():
                raise ValueError("as_vector() needs numeric coefficients")
            out[key] = c.constant
        return out

    @classmethod
    def from_vector(cls, n: int, vec: Mapping[Term, Fraction], name: str = "") -> "LoopElement":
        return cls(n, {key: EpsPolynomial.const(v) for key, v in vec.items()}, name)

    def __repr__(self):
        return f"LoopElement({self})"

    def __str__(self):
        parts = []
        for b in range(self.n):
            comp = self.component(b)
            if not comp:
                parts.append("0")
                continue
            pieces = []
            for (i, j, k) in sorted(comp):
                c = comp[(i, j, k)]
                zs = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
                cs = "" if c == 1 else f"({c})"
                pieces.append(f"{cs}E{i}{j}{zs}")
            parts.append(" + ".join(pieces))
        return (self.name + "=" if self.name else "") + "(" + ", ".join(parts) + ")"


# -- labelings -----------------------------------------------------------------


@dataclass(frozen=True)
class Labeling:
    """Relabeling of a presentation: component permutation plus optional index flip.

    An external term ``(b, i, j, k)`` corresponds to the internal term
    ``(perm(b), phi(i), phi(j), k)`` with ``phi(i) = n + 1 - i`` when ``flip``.
    ``perm`` is ``"identity"`` or ``"negate"`` (``b -> -b mod n``).
    """

    name: str
    perm: str = "identity"
    flip: bool = False

    def component(self, b: int, n: int) -> int:
        return (-b) % n if self.perm == "negate" else b

    def component_inverse(self, b: int, n: int) -> int:
        return self.component(b, n)  # both permutations are involutions

    def index(self, i: int, n: int) -> int:
        return n + 1 - i if self.flip else i

    def to_internal(self, x: LoopElement) -> LoopElement:
        n = x.n
        return LoopElement(n, {(self.component(b, n), self.index(i, n), self.index(j, n), k): c
                               for (b, i, j, k), c in x.terms.items()}, x.name)

    def to_external(self, x: LoopElement) -> LoopElement:
        n = x.n
        return LoopElement(n, {(self.component_inverse(b, n), self.index(i, n), self.index(j, n), k): c
                               for (b, i, j, k), c in x.terms.items()}, x.name)

    def weight_to_external(self, w: Sequence[int]) -> tuple[int, ...]:
        return tuple(reversed(w)) if self.flip else tuple(w)

    def lambdas_to_internal(self, lams: Sequence) -> list:
        n = len(lams)
        out = [None] * n
        for b, lam in enumerate(lams):
            out[self.component(b, n)] = lam
        return out

    def lambdas_to_external(self, lams: Sequence) -> list:
        n = len(lams)
        return [lams[self.component(b, n)] for b in range(n)]


PRESETS = {
    "main-body": Labeling("main-body"),
    "sec7": Labeling("sec7", flip=True),
    "appendix": Labeling("appendix", perm="negate", flip=True),
}


def get_labeling(name: str) -> Labeling:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown labeling preset {name!r}; choose from {sorted(PRESETS)}") from None


# -- polynomials in z and eps, for the quiver maps ------------------------------


class ZEpsPoly:
    """Polynomial in z with coefficients in Q[eps]; ``coeffs[k]`` multiplies ``z^k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, EpsPolynomial] = ()):
        self.coeffs = {k: _as_poly(c) for k, c in dict(coeffs).items() if _as_poly(c)}

    @classmethod
    def const(cls, c):
        return cls({0: _as_poly(c)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return ZEpsPoly(out)

    def __mul__(self, other):
        out: dict = {}
        for a, c in self.coeffs.items():
            for b, d in other.coeffs.items():
                out[a + b] = out.get(a + b, ZERO) + c * d
        return ZEpsPoly(out)

    def __eq__(self, other):
        if not isinstance(other, ZEpsPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})z^{k}" for k, c in sorted(self.coeffs.items()))


def z_plus_eps(eps: EpsLike = None) -> ZEpsPoly:
    return ZEpsPoly({0: _eps_value(eps), 1: ONE})


def psi_maps(n: int, eps: EpsLike = None) -> list[list[list[ZEpsPoly]]]:
    """The maps psi_b, b = 0..n-1: identity except ``w_{b+1} -> (z + eps) w_{b+1}``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    for b in range(n):
        mat = [[ZEpsPoly() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            mat[i][i] = z_plus_eps(eps) if i == b else ZEpsPoly.const(1)
        out.append(mat)
    return out


def mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][t] * b[t][j] for t in range(n)), ZEpsPoly()) for j in range(n)] for i in range(n)]


def psi_composition(n: int, eps: EpsLike = None):
    maps = psi_maps(n, eps)
    acc = maps[0]
    for b in range(1, n):
        acc = mat_mul(maps[b], acc)
    return acc


def psi_composition_check(n: int, eps: EpsLike = None) -> bool:
    comp = psi_composition(n, eps)
    ze = z_plus_eps(eps)
    return all(comp[i][j] == (ze if i == j else ZEpsPoly()) for i in range(n) for j in range(n))


# -- generator families ----------------------------------------------------------


def _marked_upper(i: int, j: int, b: int) -> bool:
    return i <= b < j


def _marked_lower(i: int, j: int, b: int) -> bool:
    # generator E_{j,i} with i < j
    return not (i <= b < j)


def _marked_element(n, row, col, k, marked, eps: EpsLike, name) -> LoopElement:
    e = _eps_value(eps)
    terms: dict = {}
    for b in range(n):
        if marked(b):
            terms[(b, row, col, k)] = e
            terms[(b, row, col, k + 1)] = ONE
        else:
            terms[(b, row, col, k)] = ONE
    return LoopElement(n, terms, name)


def a_eps_generators(n: int, N: int, eps: EpsLike = None) -> list[LoopElement]:
    """Spanning family of the eps-algebra, z-powers ``k < N`` of each generator.

    Elements are not truncated: a marked component of ``E z^k`` contributes
    ``eps E z^k + E z^{k+1}`` even when ``k + 1 = N``; truncation happens when
    an element is assembled on concrete modules.
    """
    if n < 2 or N < 1:
        raise ValueError("need n >= 2 and N >= 1")
    out = []
    for k in range(N):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out.append(_marked_element(n, i, j, k, lambda b: _marked_upper(i, j, b), eps, f"U{i}{j}z{k}"))
                out.append(_marked_element(n, j, i, k, lambda b: _marked_lower(i, j, b), eps, f"L{j}{i}z{k}"))
        for i in range(1, n + 1):
            out.append(LoopElement(n, {(b, i, i, k): ONE for b in range(n)}, f"H{i}z{k}"))
    return out


def generator_kind(x: LoopElement) -> str:
    return {"U": "upper", "L": "lower", "H": "diagonal"}.get(x.name[:1], "other")


def i1_generators(n: int, eps: EpsLike = None) -> list[LoopElement]:
    """The n^2 degree-zero generators with ``z`` set to zero."""
    return [x.truncate(1) for x in a_eps_generators(n, 1, eps)]


def endomorphism_check(x: LoopElement, eps: EpsLike = None) -> bool:
    """Does ``A_{b+1} psi_b = psi_b A_b`` hold for every b (indices mod n)?"""
    n = x.n
    maps = psi_maps(n, eps)

    def matrix(b):
        mat = [[ZEpsPoly() for _ in range(n)] for _ in range(n)]
        for (i, j, k), c in x.component(b).items():
            mat[i - 1][j - 1] = mat[i - 1][j - 1] + ZEpsPoly({k: c})
        return mat

    for b in range(n):
        lhs = mat_mul(matrix((b + 1) % n), maps[b])
        rhs = mat_mul(maps[b], matrix(b))
        if any(lhs[i][j] != rhs[i][j] for i in range(n) for j in range(n)):
            return False
    return True


def appendix_F_operators(n: int) -> list[LoopElement]:
    """``[F_0, F_1, ..., F_{n-1}]`` in the appendix presentation (degree zero)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    ops = [LoopElement(n, {(a, 1, n, 0): ONE for a in range(1, n)}, "F0")]
    for b in range(1, n):
        ops.append(LoopElement(n, {(a, b + 1, b, 0): ONE for a in range(n) if a != b}, f"F{b}"))
    return ops


def sh_twist(x: LoopElement, b: int, eps: EpsLike = None) -> LoopElement:
    """Apply ``E_{i,j} z^k -> eps E_{i,j} z^k + E_{i,j} z^{k+1}`` (for ``i <= b < j``) termwise."""
    n = x.n
    if not 1 <= b <= n - 1:
        raise ValueError(f"sh_b needs 1 <= b <= n-1, got b={b}")
    e = _eps_value(eps)
    out: dict = {}
    for (c, i, j, k), coeff in x.terms.items():
        if i >= j:
            raise ValueError("sh_b is defined on the raising current part only")
        if i <= b < j:
            out[(c, i, j, k)] = out.get((c, i, j, k), ZERO) + coeff * e
            out[(c, i, j, k + 1)] = out.get((c, i, j, k + 1), ZERO) + coeff
        else:
            out[(c, i, j, k)] = out.get((c, i, j, k), ZERO) + coeff
    return LoopElement(n, out, x.name)


def sh_bracket_check(n: int, N: int, eps: EpsLike = None) -> list:
    """Pairs of raising basis elements on which sh_b fails to respect the bracket."""
    basis = [LoopElement.unit(n, 0, i, j, k) for k in range(N)
             for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    bad = []
    for b in range(1, n):
        for a, x in enumerate(basis):
            for y in basis[a + 1:]:
                lhs = sh_twist(x.bracket(y), b, eps)
                rhs = sh_twist(x, b, eps).bracket(sh_twist(y, b, eps))
                if lhs != rhs:
                    bad.append((b, str(x), str(y)))
    return bad


def upper_generators_as_shifts(n: int, N: int, eps: EpsLike = None) -> bool:
    """Each upper generator equals ``(x, sh_1 x, ..., sh_{n-1} x)`` for its ``x``."""
    for g in a_eps_generators(n, N, eps):
        if generator_kind(g) != "upper":
            continue
        (i, j, k) = min(key[1:] for key in g.terms)
        x = LoopElement.unit(n, 0, i, j, k)
        want = LoopElement.unit(n, 0, i, j, k)
        for b in range(1, n):
            tw = sh_twist(x, b, eps)
            want = want + LoopElement(n, {(b, ii, jj, kk): c for (_, ii, jj, kk), c in tw.terms.items()})
        if want != g:
            return False
    return True


def rotate(x: LoopElement, shift: int = 1) -> LoopElement:
    """Component shift ``b -> b + s`` composed with the index rotation ``i -> i + s`` (mod n)."""
    n = x.n

    def r(i):
        return (i - 1 + shift) % n + 1

    return LoopElement(n, {((b + shift) % n, r(i), r(j), k): c for (b, i, j, k), c in x.terms.items()}, x.name)


def _proportional(x: LoopElement, y: LoopElement) -> Optional[EpsPolynomial]:
    """The constant c with ``x = c * y``, or None."""
    if set(x.terms) != set(y.terms) or not x.terms:
        return None
    key = min(x.terms)
    a, b = x.terms[key], y.terms[key]
    if any(x.terms[k] * b != y.terms[k] * a for k in x.terms):
        return None
    q, r = a.divmod(b)
    if r or not q.is_constant():
        return None
    return q


def rotation_permutation(n: int, eps: EpsLike = None, shift: int = 1) -> Optional[list[int]]:
    """Index map ``t -> s`` with ``rotate(G_t) ~ G_s`` up to a constant, or None."""
    gens = i1_generators(n, eps)
    perm = []
    for g in gens:
        rg = rotate(g, shift)
        hit = [s for s, h in enumerate(gens) if _proportional(rg, h) is not None]
        if len(hit) != 1:
            return None
        perm.append(hit[0])
    if sorted(perm) != list(range(len(gens))):
        return None
    return perm


def rotation_conjugation_check(n: int, eps: EpsLike = None) -> bool:
    return rotation_permutation(n, eps) is not None


# -- Lie spans -------------------------------------------------------------------


def span_echelon(elements: Iterable[LoopElement]) -> Echelon:
    ech = Echelon()
    for x in elements:
        ech.insert(x.as_vector())
    return ech


def bracket_closed(elements: Sequence[LoopElement], N: Optional[int] = None) -> bool:
    ech = span_echelon(elements)
    for a, x in enumerate(elements):
        for y in elements[a + 1:]:
            if not ech.contains(x.bracket(y, N).as_vector()):
                return False
    return True


def lie_closure(elements: Sequence[LoopElement], N: Optional[int] = None) -> list[LoopElement]:
    """Basis of the Lie subalgebra generated by numeric ``elements`` (truncated at N)."""
    n = elements[0].n if elements else 2
    ech = Echelon()
    basis: list[LoopElement] = []
    for x in elements:
        if ech.insert(x.as_vector()):
            basis.append(x)
    pos = 0
    while pos < len(basis):
        x = basis[pos]
        for y in list(basis[:pos + 1]):
            z = x.bracket(y, N)
            if not z.is_zero() and ech.insert(z.as_vector()):
                basis.append(z)
        pos += 1
    return [LoopElement.from_vector(n, row) for row in ech.rref()]


def lower_part_commutes(n: int) -> bool:
    lows = [x for x in i1_generators(n, 0) if generator_kind(x) == "lower"]
    return all(x.bracket(y, 1).is_zero() for x in lows for y in lows)


def borel_part_closed(n: int) -> bool:
    gens = [x for x in i1_generators(n, 0) if generator_kind(x) in ("upper", "diagonal")]
    return bracket_closed(gens, 1)


def i1_span_dimension(n: int, eps) -> int:
    return len(span_echelon(i1_generators(n, eps)))


def appendix_generation_check(n: int) -> bool:
    """The appendix operators together with the diagonals Lie-generate the eps=0 degree-zero algebra."""
    lab = PRESETS["appendix"]
    fs = [lab.to_internal(f) for f in appendix_F_operators(n)]
    gens = i1_generators(n, 0)
    diag = [g for g in gens if generator_kind(g) == "diagonal"]
    target = span_echelon(gens)
    if not all(target.contains(f.as_vector()) for f in fs):
        return False
    closed = lie_closure(fs + diag, 1)
    span = span_echelon(closed)
    nil = [g for g in gens if generator_kind(g) != "diagonal"]
    return len(span) == len(target) and all(span.contains(g.as_vector()) for g in nil)


def iwahori_quotient_check(n: int) -> bool:
    """The eps=0 degree-zero algebra is isomorphic to ``I / zI``.

    ``I / zI`` has basis ``E_{i,j}`` (``i <= j``) and ``z E_{j,i}`` (``i < j``);
    the map sends the upper and diagonal generators to ``E_{i,j}`` and the
    lower generator built on ``E_{j,i}`` to ``z E_{j,i}``.
    """
    gens = i1_generators(n, 0)
    images = {}
    for g in gens:
        (_, i, j, _) = min(g.terms)
        kind = generator_kind(g)
        images[g.name] = LoopElement.unit(n, 0, i, j, 1 if kind == "lower" else 0)

    def reduce_quotient(x: LoopElement) -> LoopElement:
        keep = {}
        for (b, i, j, k), c in x.terms.items():
            if (i <= j and k == 0) or (i > j and k == 1):
                keep[(b, i, j, k)] = c
        return LoopElement(n, keep)

    tr_basis = [g.as_vector() for g in gens]
    from .sparse import TrackedEchelon
    tr = TrackedEchelon()
    for v in tr_basis:
        tr.insert(v)
    for a, x in enumerate(gens):
        for y in gens[a:]:
            br = x.bracket(y, 1)
            coords = tr.coordinates(br.as_vector())
            if coords is None:
                return False
            lhs = LoopElement(n)
            for t, c in coords.items():
                lhs = lhs + images[gens[t].name].scale(c)
            rhs = reduce_quotient(images[x.name].bracket(images[y.name]))
            if lhs != rhs:
                return False
    return True


# -- assembly ----------------------------------------------------------------------


def assemble(x: LoopElement, ambient, name: Optional[str] = None):
    """Operator on ``ambient`` (a :class:`~coherence_lab.tensor.TensorAmbient`)."""
    from .tensor import TensorOperator

    if ambient.n != x.n:
        raise ValueError(f"loop element rank {x.n} does not match modules of rank {ambient.n}")
    if max(ambient.components) >= x.n:
        raise ValueError("factor component outside Z/nZ")
    terms = []
    for f, (m, c) in enumerate(zip(ambient.modules, ambient.components)):
        for (b, i, j, k), coeff in sorted(x.terms.items()):
            if b == c and k < m.N:
                terms.append((f, coeff, m.action(i, j, k)))
    return TensorOperator(terms, x.weight_shift(), name or x.name)


def derived_family(n: int, N: int, eps: EpsLike = 0) -> list[LoopElement]:
    """Closure operator set: the generator family at ``eps``, minus the degree-zero diagonals
    (which act by scalars on weight vectors)."""
    out = []
    for x in a_eps_generators(n, N, None):
        if generator_kind(x) == "diagonal" and min(k for (_, _, _, k) in x.terms) == 0:
            continue
        out.append(x if eps is None else x.specialize(eps))
    return out


def derived_operators(ambient, eps: EpsLike = 0) -> list:
    N = max(m.N for m in ambient.modules)
    ops = [assemble(x, ambient) for x in derived_family(ambient.n, N, eps)]
    return [op for op in ops if not op.is_zero()]


def appendix_operators(ambient) -> list:
    """The appendix operators applied literally: component ``b`` acts on factor ``b``."""
    ops = [assemble(f, ambient) for f in appendix_F_operators(ambient.n)]
    return [op for op in ops if not op.is_zero()]


def operator_preset(name: str, ambient) -> list:
    if name == "derived":
        return derived_operators(ambient, 0)
    if name == "appendix":
        return appendix_operators(ambient)
    raise ValueError(f"unknown operator preset {name!r}; choose 'derived' or 'appendix'")


def operator_table(ops) -> list:
    """Serializable listing of assembled operators (sparse triplets per factor)."""
    from .sparse import frac_str

    out = []
    for op in ops:
        terms = []
        for f, c, m in op.terms:
            terms.append({"factor": f, "coeff": c.to_json(),
                          "entries": [[dst, src, frac_str(v)] for dst, src, v in m.entries()]})
        out.append({"name": op.name, "weight_shift": list(op.weight_shift), "terms": terms})
    return out
