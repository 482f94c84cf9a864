from fractions import Fraction
from math import comb

import pytest

from coherence_lab.contraction_algebra import a_eps_generators, assemble, derived_operators
from coherence_lab.current_modules import finite_module, fusion_module, trivial_module
from coherence_lab.epsilon_limit import (PolyEchelon, b_admissibility_evidence, generate_D_eps, generic_rank,
                                         limit_module, saturate_weight, symbolic_operators, valuation)
from coherence_lab.polynomial import EPS, ONE, EpsPolynomial
from coherence_lab.reference_diagrams import diagram, picture
from coherence_lab.sparse import ResourceLimitExceeded
from coherence_lab.subspace_engine import (WeightGradedSubspace, closure, conjecture_closure, current_operators,
                                           intersection_dimension, is_stable, joint_kernel, one_seed_closures,
                                           sum_spaces)
from coherence_lab.tensor import TensorAmbient, rational_to_poly


def _lowest_part(v):
    r = valuation(v)
    out = {}
    for lab, p in v.items():
        c = p.coeffs[r] if len(p.coeffs) > r else 0
        if c:
            out[lab] = c
    return r, out


def _power(m, e, k):
    x = m.cyclic_vector()
    for _ in range(k):
        x = e.apply(x)
    return x


def test_rank_one_orbit_lowest_parts():
    a, b = finite_module((2, 0)), finite_module((3, 0))
    amb = TensorAmbient([a, b])
    u = assemble({x.name: x for x in a_eps_generators(2, 1, None)}["U12z0"], amb)
    v = rational_to_poly(amb.tensor([a.cyclic_vector(), b.cyclic_vector()]))
    for m in range(6):
        p = min(m, 2)
        r, low = _lowest_part(v)
        assert r == max(0, m - 2)
        exp = amb.tensor([_power(a, a.action(1, 2), p), _power(b, b.action(1, 2), m - p)])
        assert low == {k: c * comb(m, m - p) for k, c in exp.items()}
        v = u.apply_poly(v)
    assert not v


def test_rank_one_limit_picture():
    lim = limit_module([finite_module((2, 0)), finite_module((3, 0))])
    assert lim.space.dimension() == 6
    assert picture(lim.space.degree_character("iwahori"), 5) == diagram("rank1_2_3")
    lim = limit_module([finite_module((4, 0)), finite_module((1, 0))])
    assert picture(lim.space.degree_character("iwahori"), 5) == diagram("rank1_4_1")


def test_trivial_second_factor_is_eps_free():
    lim = limit_module([finite_module((2, 0)), trivial_module(2)])
    assert lim.space.dimension() == 3
    assert lim.level_counts() == {0: 3}


def test_zero_seed_gives_empty_lattice():
    amb = TensorAmbient([finite_module((2, 0)), finite_module((3, 0))])
    L = generate_D_eps(amb, {}, symbolic_operators(amb))
    assert generic_rank(L) == 0 and L.weights() == []


def test_lattice_cap():
    amb = TensorAmbient([finite_module((2, 1, 0)), finite_module((2, 1, 0))])
    seed = rational_to_poly(amb.tensor([m.cyclic_vector() for m in amb.modules]))
    with pytest.raises(ResourceLimitExceeded) as info:
        generate_D_eps(amb, seed, symbolic_operators(amb), max_entries=5)
    assert "generic_rank_so_far" in info.value.partial


def test_poly_echelon_membership():
    e = PolyEchelon()
    assert e.insert({1: ONE, 2: EPS})
    assert not e.insert({1: EPS, 2: EPS * EPS})  # eps times the first vector
    assert e.contains({1: ONE + EPS, 2: EPS + EPS * EPS})
    # eps^-1 (eps e1) is not an R-combination unless saturated
    assert e.insert({1: EPS})
    assert len(e.basis()) == 2


def test_saturation_levels():
    B, levels = saturate_weight([{1: ONE, 2: ONE}, {1: ONE, 2: ONE + EPS}])
    assert levels == [0, 1]
    vals = [{k: p(0) for k, p in b.items() if p(0)} for b in B]
    assert vals == [{1: 1, 2: 1}, {2: 1}]


def test_limit_matches_cartan_for_fundamentals():
    lim = limit_module([finite_module((1, 0, 0)), finite_module((1, 1, 0)), finite_module((1, 0, 0))])
    assert lim.space.dimension() == 15
    assert is_stable(lim.space, derived_operators(lim.space.ambient, 0))


def test_weight_graded_subspace_ops():
    amb = TensorAmbient([finite_module((1, 0)), finite_module((1, 0))])
    basis = [amb.basis_vector(lab) for lab in [(0, 0), (0, 1), (1, 0), (1, 1)]]
    a = WeightGradedSubspace.from_vectors(amb, basis[:2])
    b = WeightGradedSubspace.from_vectors(amb, basis[1:3])
    assert a.dimension() == b.dimension() == 2
    assert sum_spaces(a, b).dimension() == 3
    assert intersection_dimension(a, b) == 1
    assert a.contains(basis[1]) and not a.contains(basis[2])
    assert a.to_json() == WeightGradedSubspace.from_vectors(amb, reversed(basis[:2])).to_json()


def test_closure_and_socle_examples():
    amb = TensorAmbient([finite_module((1, 0)), finite_module((1, 0))])
    seed = amb.tensor([m.cyclic_vector() for m in amb.modules])
    full = closure(amb, [seed], current_operators(amb))
    assert full.dimension() == 3
    assert closure(amb, [], current_operators(amb)).dimension() == 0
    raising = [op for op in current_operators(amb) if op.name == "E12z0"]
    assert len(joint_kernel(full, raising)) == 1
    with pytest.raises(ResourceLimitExceeded):
        closure(amb, [seed], current_operators(amb), max_entries=1)


def test_symbolic_operator_rejected_by_closure():
    amb = TensorAmbient([finite_module((1, 0)), finite_module((1, 0))])
    with pytest.raises(ValueError):
        closure(amb, [], symbolic_operators(amb))


def test_one_seed_closures_cover_conjecture():
    amb = TensorAmbient([finite_module((1, 0, 0)), finite_module((1, 1, 0)), finite_module((1, 0, 0))])
    ops = derived_operators(amb, 0)
    S = conjecture_closure(amb, ops)
    parts = one_seed_closures(amb, ops)
    total = parts[0][1]
    for _, sp in parts[1:]:
        total = sum_spaces(total, sp)
    assert total.to_json() == S.to_json()
    assert [sp.dimension() for _, sp in parts] == [3, 6, 10, 8, 5, 3]


def test_admissibility_evidence():
    m = fusion_module([((2, 0), 0), ((1, 0), 1)])
    ev = b_admissibility_evidence(m, 1)
    assert ev["consistent"] and not ev["flagged"]
    assert ev["raising_closure_dim"] == ev["twisted_closure_dim"] == 6
    assert b_admissibility_evidence(finite_module((2, 1, 0)), 1)["consistent"]


@pytest.mark.parametrize("key,dim", [((1, 2, 0), 2), ((1, 2, 1), 4)])
def test_corrupted_module_flagged(key, dim):
    from coherence_lab.current_modules import with_action_zeroed

    bad = with_action_zeroed(fusion_module([((2, 0), 0), ((1, 0), 1)]), key)
    ev = b_admissibility_evidence(bad, 1)
    assert ev["flagged"] and ev["raising_closure_dim"] == dim
