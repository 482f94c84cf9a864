"""Acceptance criteria 1-6, one printed pass/fail line each.

All comparisons are exact (tolerance 0); each runtime bound is asserted.
"""

import time
from pathlib import Path

import pytest

from coherence_lab.config import load_config
from coherence_lab.experiments import example_config, run
from coherence_lab.gt_core import weyl_dimension

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def _report(capsys, number, title, ok, seconds, bound, detail=""):
    status = "PASS" if ok else "FAIL"
    with capsys.disabled():
        print(f"\n[criterion {number}] {status} {title}: tolerance 0, runtime {seconds:.2f}s "
              f"(bound {bound}s){', ' + detail if detail else ''}")


def _sum_lambdas(lams):
    return tuple(sum(col) for col in zip(*lams))


def test_criterion_1_rank_one_closed_form(capsys):
    report, secs = _timed(lambda: run(example_config("sec7.1")))
    recs = report["records"]
    bad = []
    for r in recs:
        (a, _), (b, _) = r["lambdas"]
        want = a + b + 1
        dims = [s["dim"] for s in r["one_seed"]]
        ok = (r["dim_S"] == want and r["dim_D0"] == want and r["checks"]["S_equals_D0"]
              and sorted(dims) == sorted([a + 1, b + 1]) and r["one_seed_intersection_dim"] == 1)
        if not ok:
            bad.append(r["instance"])
    ok = len(recs) == 49 and not bad and report["complete"] and secs < 60
    _report(capsys, 1, "sl2 grid 0<=l0,l1<=6, dim S = dim D(0) = l0+l1+1, one-seed dims l0+1, l1+1, "
            "intersection 1", ok, secs, 60, f"{len(recs)} instances, {len(bad)} failures")
    assert len(recs) == 49 and not bad
    assert secs < 60


def test_criterion_2_gl3_example(capsys):
    report, secs = _timed(lambda: run(example_config("sec7.2")))
    (r,) = report["records"]
    weyl = weyl_dimension((3, 1, 0))
    ok = (weyl == 15 and r["dim_S"] == r["dim_D0"] == weyl and r["checks"]["S_equals_D0"]
          and r["checks"]["boxed_in_every_one_seed_closure"] and r["boxed_weight_degree_space_dim"] == 1
          and r["checks"]["one_seed_closures_sum_to_S"] and report["passed"] and secs < 10)
    _report(capsys, 2, "n=3 (w1,w2,w1), dim S = dim D(0) = 15, boxed vector in every one-seed closure",
            ok, secs, 10, f"dim S {r['dim_S']}, dim D(0) {r['dim_D0']}, boxed graded space dim "
            f"{r['boxed_weight_degree_space_dim']}")
    assert r["dim_S"] == r["dim_D0"] == weyl == 15
    assert r["checks"]["S_equals_D0"]
    assert r["checks"]["boxed_in_every_one_seed_closure"]
    assert r["boxed_weight_degree_space_dim"] == 1
    assert report["passed"]
    assert secs < 10


@pytest.fixture(scope="module")
def sweeps():
    out, secs = {}, 0.0
    for name in ("sweep_sl2.toml", "sweep_sl3.toml"):
        rep, s = _timed(lambda: run(load_config(CONFIGS / name)))
        out[name] = rep
        secs += s
    return out, secs


def test_criterion_3_conjecture_sweep(capsys, sweeps):
    reports, secs = sweeps
    recs = [r for rep in reports.values() for r in rep["records"]]
    bad = [r["instance"] for r in recs if r["dim_S"] != weyl_dimension(_sum_lambdas(r["lambdas"]))]
    counter = sum(len(rep["summary"]["counterexamples"]) for rep in reports.values())
    complete = all(rep["complete"] for rep in reports.values())
    ok = not bad and counter == 0 and complete and secs < 1800
    _report(capsys, 3, "dim S = weyl(sum of lambdas), n=2 entries<=3 and n=3 total<=4", ok, secs, 1800,
            f"{len(recs)} instances, {len(bad)} counterexamples")
    assert complete and not bad and counter == 0
    assert secs < 1800


def test_criterion_4_degeneration(capsys, sweeps):
    reports, secs = sweeps
    recs = [r for rep in reports.values() for r in rep["records"]]
    keys = ("dim_D0_equals_generic_rank", "dim_D0_equals_cartan", "characters_D0_cartan_equal", "S_subset_D0")
    bad = [r["instance"] for r in recs
           if not (r["dim_D0"] == r["generic_rank"] == r["dim_cartan"] and all(r["checks"][k] for k in keys))]
    ok = not bad and secs < 1800
    _report(capsys, 4, "dim D(0) = generic rank = Cartan, equal characters, S inside D(0)", ok, secs, 1800,
            f"{len(recs)} instances, {len(bad)} failures")
    assert not bad


def test_criterion_5_affine_examples(capsys):
    def go():
        return {name: run(example_config(name))["records"][0] for name in ("sec7.3a", "sec7.3b", "sec7.4")}

    recs, secs = _timed(go)
    a, b, c = recs["sec7.3a"], recs["sec7.3b"], recs["sec7.4"]
    inputs_ok = all(p["passed"] for r in recs.values() for p in r["presentation"])
    diagrams_ok = all(v for r in recs.values() for k, v in r["checks"].items() if k.startswith(("input_diagram", "diagram")))
    ok = (a["dim_D0"] == 15 and b["dim_D0"] == 18 and c["dim_D0"] == 15 and c["dim_S"] == 14
          and c["checks"]["S_subset_D0"] and not c["S_equals_D0"] and inputs_ok and diagrams_ok and secs < 300)
    _report(capsys, 5, "affine sl2 examples, dim D(0) 15 and 18, non-example dim D(0) 15 with dim S 14", ok,
            secs, 300, f"D(0) dims {a['dim_D0']}, {b['dim_D0']}, {c['dim_D0']}; S dim {c['dim_S']}")
    assert (a["dim_D0"], b["dim_D0"], c["dim_D0"], c["dim_S"]) == (15, 18, 15, 14)
    assert c["checks"]["S_subset_D0"] and not c["S_equals_D0"]
    assert diagrams_ok and inputs_ok
    assert secs < 300


def test_criterion_6_property_suites(capsys):
    report, secs = _timed(lambda: run(load_config(CONFIGS / "suites.toml")))
    failed = [r["instance"] for r in report["records"] if not r["passed"]]
    ok = report["passed"] and not failed and secs < 600
    _report(capsys, 6, "property suites", ok, secs, 600,
            f"{len(report['records'])} suites, failed: {', '.join(failed) or 'none'}")
    assert not failed and report["passed"]
    assert secs < 600
