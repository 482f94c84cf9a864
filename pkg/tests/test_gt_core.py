from fractions import Fraction

import pytest

from coherence_lab import gt_core
from coherence_lab.gt_core import (GTPattern, character, enumerate_patterns, extremal_pattern,
                                   generator_action, matrix_unit_action, pattern_weight,
                                   weyl_dimension)


@pytest.mark.parametrize("lam,count", [((1, 0), 2), ((3, 1, 0), 15), ((0, 0, 0), 1), ((2, 0), 3),
                                       ((5, 0), 6), ((2, 1, 1, 0), 15)])
def test_pattern_counts(lam, count):
    pats = enumerate_patterns(lam)
    assert len(pats) == count == weyl_dimension(lam)
    assert pats == sorted(pats, key=lambda p: p.sort_key())
    assert all(p.is_valid() for p in pats)


def test_rejects_non_monotone():
    with pytest.raises(ValueError):
        enumerate_patterns((0, 1))
    with pytest.raises(ValueError):
        weyl_dimension((1, 2, 0))


def test_pattern_weight_examples():
    assert pattern_weight(GTPattern(((1,), (1, 0)))) == (1, 0)
    assert pattern_weight(GTPattern(((0,), (1, 0)))) == (0, 1)
    for p in enumerate_patterns((3, 1, 0)):
        assert sum(pattern_weight(p)) == 4


def test_extremal_patterns():
    lam = (3, 1, 0)
    assert pattern_weight(extremal_pattern(lam, (1, 2, 3))) == lam
    assert pattern_weight(extremal_pattern(lam, (2, 1, 3))) == (1, 3, 0)
    flat = (2, 2, 2)
    pats = {extremal_pattern(flat, s) for s in gt_core.all_permutations(3)}
    assert len(pats) == 1


def test_generator_examples():
    f = generator_action("f", 1, (1, 0))
    top, low = GTPattern(((1,), (1, 0))), GTPattern(((0,), (1, 0)))
    assert f.apply({top: Fraction(1)}) == {low: 1}
    assert f.apply({low: Fraction(1)}) == {}
    lam = (2, 0)
    hi = gt_core.highest_pattern(lam)
    f = generator_action("f", 1, lam)
    v = {hi: Fraction(1)}
    assert f.apply(f.apply(v))
    assert not f.apply(f.apply(f.apply(v)))
    lam = (2, 1, 0)
    for k in (1, 2):
        assert not generator_action("e", k, lam).apply({gt_core.highest_pattern(lam): 1})
        assert not generator_action("f", k, lam).apply({gt_core.lowest_pattern(lam): 1})


def test_generator_index_errors():
    with pytest.raises(ValueError):
        generator_action("e", 2, (1, 0))
    with pytest.raises(ValueError):
        matrix_unit_action(0, 1, (1, 0))


def test_diagonal_acts_by_weight():
    lam = (2, 1, 0)
    for k in (1, 2, 3):
        h = generator_action("E", k, lam)
        assert h == matrix_unit_action(k, k, lam)
        for p in enumerate_patterns(lam):
            assert h.apply({p: 1}) == ({p: pattern_weight(p)[k - 1]} if pattern_weight(p)[k - 1] else {})


def test_matrix_units():
    lam = (1, 0, 0)
    e13 = matrix_unit_action(1, 3, lam)
    src = [p for p in enumerate_patterns(lam) if pattern_weight(p) == (0, 0, 1)][0]
    dst = [p for p in enumerate_patterns(lam) if pattern_weight(p) == (1, 0, 0)][0]
    assert set(e13.apply({src: 1})) == {dst}
    lam = (1, 1, 0)
    assert matrix_unit_action(1, 2, lam).commutator(matrix_unit_action(2, 3, lam)) == matrix_unit_action(1, 3, lam)


def test_character_examples():
    assert character((1, 0, 0)) == {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1}
    c = character((3, 1, 0))
    assert c[(3, 1, 0)] == 1 and c[(2, 1, 1)] == 2 and sum(c.values()) == 15
    assert character((4, 0)) == {(4 - m, m): 1 for m in range(5)}


def test_weight_shifts_declared():
    lam = (2, 1, 0)
    for i in range(1, 4):
        for j in range(1, 4):
            mat = matrix_unit_action(i, j, lam)
            for src, col in mat.columns.items():
                for dst in col:
                    shift = tuple(a - b for a, b in zip(pattern_weight(dst), pattern_weight(src)))
                    assert shift == mat.weight_shift


def test_partition_helpers():
    assert gt_core.partitions_of_size(3, 2) == [(2, 0, 0), (1, 1, 0)]
    assert len(gt_core.partitions_in_box(2, 3)) == 10
    assert all(p[-1] == 0 for p in gt_core.partitions_in_box(3, 2, last_zero=True))
