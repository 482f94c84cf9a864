"""Univariate polynomials in the contraction parameter ``eps`` over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def _strip(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


class EpsPolynomial:
    """Immutable polynomial ``sum c_r eps^r`` with exact rational coefficients.

    ``coeffs[r]`` is the coefficient of ``eps**r``; trailing zeros are stripped,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        self.coeffs = _strip([Fraction(c) for c in coeffs])
        self._hash = None

    @classmethod
    def const(cls, c: Scalar) -> "EpsPolynomial":
        return cls((c,))

    @classmethod
    def eps(cls, power: int = 1) -> "EpsPolynomial":
        return cls([0] * power + [1])

    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> "EpsPolynomial":
        p = cls.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    # -- predicates -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def constant(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def valuation(self) -> int:
        """Lowest power of eps with a nonzero coefficient."""
        for r, c in enumerate(self.coeffs):
            if c:
                return r
        raise ValueError("valuation of the zero polynomial")

    def lowest_coefficient(self) -> Fraction:
        return self.coeffs[self.valuation]

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, EpsPolynomial):
            other = EpsPolynomial.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for r, c in enumerate(b):
            out[r] += c
        return EpsPolynomial._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self):
        return EpsPolynomial._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, EpsPolynomial):
            other = EpsPolynomial.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, EpsPolynomial):
            c = Fraction(other)
            if c == 0:
                return EpsPolynomial._raw(())
            return EpsPolynomial._raw(tuple(x * c for x in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return EpsPolynomial._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for r, x in enumerate(a):
            if x:
                for s, y in enumerate(b):
                    if y:
                        out[r + s] += x * y
        return EpsPolynomial._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = EpsPolynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "EpsPolynomial") -> tuple["EpsPolynomial", "EpsPolynomial"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for pos in range(len(rem) - 1, dq - 1, -1):
            c = rem[pos]
            if c:
                q = c / lead
                quot[pos - dq] = q
                for s, y in enumerate(other.coeffs):
                    rem[pos - dq + s] -= q * y
        return EpsPolynomial(quot), EpsPolynomial(rem[:dq] if dq > 0 else [])

    def exact_div(self, other: "EpsPolynomial") -> "EpsPolynomial":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def shift_down(self, v: int) -> "EpsPolynomial":
        """Divide by ``eps**v``; the low coefficients must vanish."""
        if any(self.coeffs[:v]):
            raise ArithmeticError(f"eps^{v} does not divide {self}")
        return EpsPolynomial._raw(self.coeffs[v:])

    def monic(self) -> "EpsPolynomial":
        return self * (1 / self.coeffs[-1])

    def unit_part(self) -> "EpsPolynomial":
        """The factor coprime to eps: ``self / eps**valuation``."""
        return EpsPolynomial._raw(self.coeffs[self.valuation:])

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "EpsPolynomial":
        return EpsPolynomial([r * c for r, c in enumerate(self.coeffs)][1:])

    # -- comparison / display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, EpsPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"EpsPolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for r, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if r == 0 else ("eps" if r == 1 else f"eps^{r}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "EpsPolynomial":
        return cls(Fraction(c) for c in data)


ZERO = EpsPolynomial()
ONE = EpsPolynomial.const(1)
EPS = EpsPolynomial.eps()


def poly_gcd(a: EpsPolynomial, b: EpsPolynomial) -> EpsPolynomial:
    """Monic gcd over Q (zero if both inputs vanish)."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic() if a else a


def content(polys: Iterable[EpsPolynomial]) -> EpsPolynomial:
    g = ZERO
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_constant() and g:
            return ONE
    return g
