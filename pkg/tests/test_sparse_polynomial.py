from fractions import Fraction

import pytest

from coherence_lab.polynomial import EPS, ONE, EpsPolynomial, poly_gcd
from coherence_lab.sparse import (Echelon, OperatorMatrix, ResourceLimitExceeded, TrackedEchelon,
                                  frac_str, kernel_basis, parse_frac, rank)


def test_polynomial_basics():
    p = EpsPolynomial([0, 2, 1])
    assert p.valuation == 1 and p.degree == 2
    assert p(Fraction(1)) == 3
    q, r = p.divmod(EPS)
    assert r == EpsPolynomial() and q == EpsPolynomial([2, 1])
    assert p.shift_down(1) == EpsPolynomial([2, 1])
    assert (EPS + 1) ** 2 == EpsPolynomial([1, 2, 1])
    assert EpsPolynomial.from_json(p.to_json()) == p
    assert EpsPolynomial([0, 0]) == EpsPolynomial()


def test_unit_part_and_gcd():
    p = EpsPolynomial([0, 0, 3, 3])  # 3 eps^2 (1 + eps)
    assert p.unit_part()(0) != 0
    assert p.unit_part().valuation == 0
    g = poly_gcd(EpsPolynomial([1, 2, 1]), EpsPolynomial([1, 1]))
    assert g.monic() == EpsPolynomial([1, 1])


def test_frac_round_trip():
    for s in ("0", "3", "-7/4"):
        assert frac_str(parse_frac(s)) == s
    with pytest.raises(ValueError):
        parse_frac("1/0")


def test_echelon_canonical():
    vecs = [{1: Fraction(2), 3: Fraction(1)}, {1: Fraction(1), 2: Fraction(1)}, {2: Fraction(2), 3: Fraction(-1)}]
    a, b = Echelon(), Echelon()
    for v in vecs:
        a.insert(v)
    for v in reversed(vecs):
        b.insert(v)
    assert a.rref() == b.rref()
    assert rank(vecs) == 2
    assert a.contains({1: 3, 2: 1, 3: 1})
    assert not a.contains({3: 1})


def test_echelon_cap():
    e = Echelon(max_entries=2)
    e.insert({1: 1, 2: 1})
    with pytest.raises(ResourceLimitExceeded):
        e.insert({2: 1, 3: 1, 4: 1})


def test_tracked_echelon_dependency():
    t = TrackedEchelon()
    assert t.insert({1: Fraction(1)}) is None
    assert t.insert({2: Fraction(1)}) is None
    dep = t.insert({1: Fraction(2), 2: Fraction(3)})
    assert dep == {2: 1, 0: -2, 1: -3}
    assert t.coordinates({1: Fraction(1), 2: Fraction(1)}) == {0: 1, 1: 1}
    assert t.coordinates({5: Fraction(1)}) is None


def test_kernel_basis():
    ker = kernel_basis([{1: Fraction(1)}, {1: Fraction(2)}, {2: Fraction(1)}])
    assert len(ker) == 1
    (c,) = ker
    assert c[0] * 1 + c[1] * 2 == 0 and 2 not in c


def test_operator_matrix_algebra():
    a = OperatorMatrix({0: {1: Fraction(1)}}, (1, -1))
    b = OperatorMatrix({1: {0: Fraction(1)}}, (-1, 1))
    h = a.commutator(b)
    assert h.apply({0: 1}) == {0: -1} and h.apply({1: 1}) == {1: 1}
    assert (a - a).is_zero() and a.scale(2).apply({0: 1}) == {1: 2}
