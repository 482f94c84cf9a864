"""Affine Demazure-type input modules for the sl_2 examples, as checked-in data.

Each module is a fusion product whose z-graded character matches a
transcribed diagram.  ``rebuild()`` regenerates the JSON files under
``coherence_lab/data``; the test-suite compares them byte for byte.
"""

from __future__ import annotations

import itertools
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .current_modules import (GradedCurrentModule, demazure_presentation_check, dumps_module,
                              fusion_module, load_module)
from .reference_diagrams import diagram, diagram_dimension, module_picture

# diagram name -> (data file, fusion inputs)
CANDIDATES: dict[str, tuple[str, list]] = {
    "V2*V1": ("fusion_v2_v1.json", [((2, 0), 0), ((1, 0), 1)]),
    "W(2)": ("fusion_w2.json", [((1, 0), 0), ((1, 0), 1)]),
    "W(3)": ("fusion_w3.json", [((1, 0), 0), ((1, 0), 1), ((1, 0), 2)]),
    "V3*V1": ("fusion_v3_v1.json", [((3, 0), 0), ((1, 0), 1)]),
}

ALTERNATIVE_POINTS = ([0, 3, -1], [5, -2, 7])


def data_dir() -> Path:
    return Path(str(resources.files("coherence_lab") / "data"))


def build(name: str, points: Optional[Sequence] = None) -> GradedCurrentModule:
    _, inputs = CANDIDATES[name]
    if points is not None:
        inputs = [(lam, c) for (lam, _), c in zip(inputs, points)]
    m = fusion_module(inputs)
    m.meta["diagram"] = name
    return m


def matches_diagram(m: GradedCurrentModule, name: str) -> bool:
    return module_picture(m) == diagram(name)


def point_independent(name: str) -> bool:
    """Graded character unchanged under other choices of distinct points."""
    ref = build(name).graded_character()
    return all(build(name, pts).graded_character() == ref for pts in ALTERNATIVE_POINTS)


def search(name: str, max_inputs: int = 3, max_entry: int = 4) -> list:
    """All sorted lists of sl_2 fusion inputs (a, 0) whose diagram equals ``name``."""
    target = diagram(name)
    dim = diagram_dimension(name)
    hits = []
    for r in range(1, max_inputs + 1):
        for lams in itertools.combinations_with_replacement(range(max_entry, 0, -1), r):
            size = 1
            for a in lams:
                size *= a + 1
            if size != dim:
                continue
            inputs = [((a, 0), p) for p, a in enumerate(lams)]
            if module_picture(fusion_module(inputs)) == target:
                hits.append(inputs)
    return hits


def load(name: str) -> GradedCurrentModule:
    fname, _ = CANDIDATES[name]
    return load_module(data_dir() / fname)


def certify(name: str) -> dict:
    m = load(name)
    report = demazure_presentation_check(m)
    return {"diagram": name, "presentation_passed": report["passed"],
            "diagram_match": matches_diagram(m, name), "dim": m.dim}


def rebuild(out_dir: Optional[Path] = None) -> list[Path]:
    out_dir = Path(out_dir) if out_dir is not None else data_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (fname, _) in sorted(CANDIDATES.items()):
        m = build(name)
        if not matches_diagram(m, name):
            raise ValueError(f"fusion candidate for {name} does not match its diagram")
        if not demazure_presentation_check(m)["passed"]:
            raise ValueError(f"fusion candidate for {name} fails the presentation check")
        path = out_dir / fname
        path.write_text(dumps_module(m), encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in rebuild():
        print(p)
