from fractions import Fraction

import pytest

from coherence_lab.contraction_algebra import (PRESETS, LoopElement, a_eps_generators, appendix_F_operators,
                                               appendix_generation_check, borel_part_closed, bracket_closed,
                                               endomorphism_check, get_labeling, i1_generators, i1_span_dimension,
                                               iwahori_quotient_check, lower_part_commutes, psi_composition_check,
                                               rotation_conjugation_check, sh_bracket_check,
                                               upper_generators_as_shifts)
from coherence_lab.polynomial import EPS, ONE


def test_generator_names_and_marking_n2():
    gens = {x.name: x for x in a_eps_generators(2, 2, None)}
    assert {"U12z0", "L21z0", "H1z0", "H2z0", "U12z1"} <= set(gens)
    # upper E12 carries (z + eps) on component 1 only
    assert gens["U12z0"].terms == {(0, 1, 2, 0): ONE, (1, 1, 2, 0): EPS, (1, 1, 2, 1): ONE}
    assert gens["L21z0"].terms == {(0, 2, 1, 0): EPS, (0, 2, 1, 1): ONE, (1, 2, 1, 0): ONE}


def test_eps_zero_n2_generators():
    gens = {x.name: x.specialize(0).truncate(1) for x in a_eps_generators(2, 1, None)}
    assert gens["U12z0"].terms == {(0, 1, 2, 0): 1}
    assert gens["L21z0"].terms == {(1, 2, 1, 0): 1}


def test_i1_n3_element():
    x = {g.name: g for g in i1_generators(3, 1)}["U12z0"]
    assert x.truncate(1).terms == {(0, 1, 2, 0): 1, (1, 1, 2, 0): 1, (2, 1, 2, 0): 1}
    y = {g.name: g for g in i1_generators(3, None)}["U12z0"]
    assert y.truncate(1).terms == {(0, 1, 2, 0): 1, (1, 1, 2, 0): EPS, (2, 1, 2, 0): 1}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_structural_checks(n):
    assert psi_composition_check(n)
    assert sh_bracket_check(n, 2) == []
    assert rotation_conjugation_check(n)
    assert lower_part_commutes(n)
    assert borel_part_closed(n)
    assert appendix_generation_check(n)
    assert iwahori_quotient_check(n)
    assert upper_generators_as_shifts(n, 2)


@pytest.mark.parametrize("eps", [Fraction(1), Fraction(-3, 2), Fraction(0)])
def test_i1_span_dimension(eps):
    assert i1_span_dimension(3, eps) == 9


@pytest.mark.parametrize("eps", [Fraction(1), Fraction(2, 7), None])
def test_generators_are_endomorphisms(eps):
    for x in a_eps_generators(3, 2, eps):
        assert endomorphism_check(x, eps), x.name
    assert bracket_closed(i1_generators(3, eps), 1) if eps is not None else True


def test_unmarked_element_is_not_an_endomorphism():
    bad = LoopElement(3, {(b, 1, 2, 0): 1 for b in range(3)})
    assert not endomorphism_check(bad, None)


def test_appendix_operators_n2():
    F0, F1 = appendix_F_operators(2)
    assert F0.terms == {(1, 1, 2, 0): 1}
    assert F1.terms == {(0, 2, 1, 0): 1}


def test_bracket_examples():
    a = LoopElement.unit(2, 0, 1, 2)
    b = LoopElement.unit(2, 0, 2, 1)
    h = a.bracket(b)
    assert h.terms == {(0, 1, 1, 0): 1, (0, 2, 2, 0): -1}
    assert a.bracket(LoopElement.unit(2, 1, 2, 1)).is_zero()
    assert LoopElement.unit(2, 0, 1, 2, 1).bracket(LoopElement.unit(2, 0, 2, 1, 1), N=2).is_zero()
    assert bracket_closed(i1_generators(2, Fraction(1)), N=1)


def test_labelings():
    assert set(PRESETS) == {"main-body", "sec7", "appendix"}
    lab = get_labeling("sec7")
    lams = [(1, 0, 0), (1, 1, 0)]
    assert lab.lambdas_to_external(lab.lambdas_to_internal(lams)) == lams
    x = LoopElement.unit(3, 0, 1, 2)
    assert lab.to_external(lab.to_internal(x)).terms == x.terms
    with pytest.raises(ValueError):
        get_labeling("nope")
