"""Randomized checks of algebraic invariants (hypothesis)."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from coherence_lab.contraction_algebra import a_eps_generators, endomorphism_check, sh_bracket_check
from coherence_lab.epsilon_limit import PolyEchelon
from coherence_lab.gt_core import enumerate_patterns, matrix_unit_action, weyl_dimension
from coherence_lab.polynomial import EpsPolynomial
from coherence_lab.sparse import Echelon
from coherence_lab.subspace_engine import closure
from coherence_lab.contraction_algebra import derived_operators
from coherence_lab.current_modules import finite_module
from coherence_lab.tensor import TensorAmbient


@st.composite
def highest_weights(draw, n_max=3, top=3):
    n = draw(st.integers(2, n_max))
    parts = sorted(draw(st.lists(st.integers(0, top), min_size=n, max_size=n)), reverse=True)
    return tuple(parts)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=25, deadline=None)
@given(highest_weights(), st.data())
def test_matrix_units_satisfy_gl_relations(lam, data):
    n = len(lam)
    idx = st.integers(1, n)
    i, j, k, l = (data.draw(idx) for _ in range(4))
    a, b = matrix_unit_action(i, j, lam), matrix_unit_action(k, l, lam)
    lhs = a.commutator(b)
    rhs = (matrix_unit_action(i, l, lam) if j == k else None)
    zero = a.scale(0)
    expected = (rhs if rhs is not None else zero) - (matrix_unit_action(k, j, lam) if l == i else zero)
    assert (lhs - expected).is_zero()


@settings(max_examples=40, deadline=None)
@given(highest_weights(n_max=4))
def test_pattern_count(lam):
    assert len(enumerate_patterns(lam)) == weyl_dimension(lam)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 5), rationals, max_size=4), max_size=6), st.randoms())
def test_echelon_independent_of_insertion_order(vecs, rnd):
    vecs = [{k: v for k, v in vec.items() if v} for vec in vecs]
    a, b = Echelon(), Echelon()
    for v in vecs:
        a.insert(v)
    shuffled = list(vecs)
    rnd.shuffle(shuffled)
    for v in shuffled:
        b.insert(v)
    assert a.rref() == b.rref()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.lists(rationals, max_size=3), min_size=1, max_size=3), min_size=1, max_size=3))
def test_poly_echelon_contains_inserted(coeff_lists):
    e = PolyEchelon()
    vecs = [{lab: EpsPolynomial(c) for lab, c in enumerate(cs) if EpsPolynomial(c)} for cs in coeff_lists]
    vecs = [v for v in vecs if v]
    for v in vecs:
        e.insert(v)
    assert all(e.contains(v) for v in vecs)


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 3), rationals)
def test_generators_intertwine_at_any_eps(n, eps):
    assert all(endomorphism_check(x, eps) for x in a_eps_generators(n, 2, eps))
    assert sh_bracket_check(n, 2, eps) == []


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 3).flatmap(
    lambda n: st.lists(highest_weights(n_max=n, top=2).filter(lambda l: len(l) == n), min_size=1, max_size=n)))
def test_closure_idempotent(lams):
    amb = TensorAmbient([finite_module(l) for l in lams])
    ops = derived_operators(amb, 0)
    seeds = [amb.tensor([m.cyclic_vector() for m in amb.modules])]
    once = closure(amb, seeds, ops)
    twice = closure(amb, once.basis(), ops)
    assert once.to_json() == twice.to_json()
