import json
from collections import Counter
from fractions import Fraction

import pytest

from coherence_lab.current_modules import (ModuleValidationError, cartan_component, demazure_presentation_check,
                                           dumps_module, evaluation_module, extremal_vector, finite_module,
                                           fusion_module, load_module, save_module, trivial_module,
                                           with_action_zeroed)


def test_finite_module_shape():
    m = finite_module((2, 1, 0))
    assert m.dim == 8 and m.N == 1 and m.graded
    assert m.weights[m.cyclic_index] == (0, 1, 2)
    assert m.top_weight() == (2, 1, 0)
    assert sum(m.character().values()) == 8


def test_evaluation_module_at_half():
    m = evaluation_module((1, 0), Fraction(1, 2), N=3)
    assert not m.graded
    e0, e1, e2 = (dict(((d, s), v) for d, s, v in m.action(1, 2, k).entries()) for k in range(3))
    assert e1 == {k: v / 2 for k, v in e0.items()}
    assert e2 == {k: v / 4 for k, v in e0.items()}
    assert not demazure_presentation_check(m)["passed"]
    assert demazure_presentation_check(evaluation_module((1, 0), 0, N=2))["passed"]


def test_fusion_graded_dimensions():
    m = fusion_module([((1, 0), 0), ((1, 0), 1)])
    assert m.dim == 4
    assert Counter(m.z_degrees) == {0: 3, 1: 1}
    assert demazure_presentation_check(m)["passed"]
    m = fusion_module([((2, 0), 0), ((1, 0), 1)])
    assert Counter(m.z_degrees) == {0: 4, 1: 2}


def test_fusion_rejects_repeated_points():
    with pytest.raises(ValueError):
        fusion_module([((1, 0), 0), ((1, 0), 0)])


def test_save_load_round_trip(tmp_path):
    m = finite_module((2, 1, 0))
    path = tmp_path / "m.json"
    save_module(m, path)
    back = load_module(path)
    assert dumps_module(back) == dumps_module(m)
    assert path.read_text() == dumps_module(m)


def test_broken_bracket_rejected(tmp_path):
    data = json.loads(dumps_module(finite_module((2, 1, 0))))
    for act in data["actions"]:
        if (act["i"], act["j"]) == (1, 2):
            dst, src, val = act["entries"][0]
            act["entries"][0] = [dst, src, str(Fraction(val) * 2)]
            break
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ModuleValidationError):
        load_module(path)
    load_module(path, validate=False)


def test_wrong_weight_shift_rejected(tmp_path):
    data = json.loads(dumps_module(finite_module((1, 0))))
    data["basis"][0]["weight"] = [5, 5]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ModuleValidationError):
        load_module(path)


def test_cartan_component_dims():
    v21 = fusion_module([((2, 0), 0), ((1, 0), 1)])
    assert cartan_component([v21]).dimension() == 6
    assert cartan_component([v21, v21]).dimension() == 15
    assert cartan_component([finite_module((1, 0)), finite_module((1, 0))]).dimension() == 3
    assert cartan_component([finite_module((2, 0)), trivial_module(2)]).dimension() == 3


def test_demazure_presentation_on_fusion_modules():
    for inputs in ([((1, 0), 0)], [((2, 0), 0), ((1, 0), 1)], [((1, 0), 0), ((1, 0), 1), ((1, 0), 2)],
                   [((1, 0, 0), 0), ((1, 1, 0), 1)]):
        rep = demazure_presentation_check(fusion_module(inputs))
        assert rep["passed"], inputs


def test_zeroed_action_drops_cyclicity():
    m = fusion_module([((2, 0), 0), ((1, 0), 1)])
    bad = with_action_zeroed(m, (1, 2, 0))
    assert not demazure_presentation_check(bad)["raising_current_cyclic"]
    assert bad.meta["corrupted"] == [1, 2, 0]


def test_extremal_vectors():
    m = finite_module((2, 1, 0))
    assert m.weights[min(extremal_vector(m, (1, 2, 3)))] == (2, 1, 0)
    assert m.weights[min(extremal_vector(m, (3, 2, 1)))] == (0, 1, 2)
    with pytest.raises(ValueError):
        extremal_vector(m, (1, 1, 2))
