"""Transcribed weight/degree diagrams used as regression targets.

sl_2 diagrams are stored as rows from top to bottom; each row maps a column
(1 = lowest h-weight) to the number of dots.  The bottom row is degree 0.
Columns are converted from weights by ``col = (h + H) / 2 + 1`` with
``h = mu_2 - mu_1`` and ``H`` the top value of ``h`` in the ambient.
"""

from __future__ import annotations

from collections import Counter
from typing import Mapping

# name -> (grading, rows top to bottom)
SL2_DIAGRAMS: dict[str, tuple[str, list[dict[int, int]]]] = {
    # rank-one Iwahori modules, finite inputs
    "rank1_2_3": ("iwahori", [{4: 1, 5: 1, 6: 1}, {3: 1}, {2: 1}, {1: 1}]),
    "rank1_4_1": ("iwahori", [{2: 1, 3: 1, 4: 1, 5: 1, 6: 1}, {1: 1}]),
    # z-graded input modules
    "V2*V1": ("z", [{2: 1, 3: 1}, {1: 1, 2: 1, 3: 1, 4: 1}]),
    "W(2)": ("z", [{2: 1}, {1: 1, 2: 1, 3: 1}]),
    "W(3)": ("z", [{2: 1, 3: 1}, {2: 1, 3: 1}, {1: 1, 2: 1, 3: 1, 4: 1}]),
    "V3*V1": ("z", [{2: 1, 3: 1, 4: 1}, {1: 1, 2: 1, 3: 1, 4: 1, 5: 1}]),
    # Cartan components (z-degree) and their Iwahori degenerations
    "cartan_3x5": ("z", [{3: 1, 4: 1, 5: 1}, {2: 1, 3: 1, 4: 1, 5: 1, 6: 1},
                         {1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1, 7: 1}]),
    "iwahori_3x5": ("iwahori", [{4: 1, 5: 2, 6: 1}, {3: 2, 4: 2, 5: 1, 6: 1, 7: 1},
                                {2: 1, 3: 1}, {2: 1}, {1: 1}]),
    "cartan_2x3x3": ("z", [{3: 1, 4: 1}, {2: 1, 3: 2, 4: 2, 5: 1}, {2: 1, 3: 1, 4: 1, 5: 1},
                           {1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 1}]),
    "iwahori_2x3x3": ("iwahori", [{4: 1}, {3: 2, 4: 2, 5: 2}, {2: 1, 3: 2, 4: 2, 5: 1, 6: 1},
                                  {2: 1, 3: 1}, {2: 1}, {1: 1}]),
    # extremal closure of the non-example
    "iwahori_14": ("iwahori", [{3: 1, 4: 2, 5: 1, 6: 1}, {2: 1, 3: 2, 4: 1, 5: 1, 6: 1, 7: 1},
                               {2: 1}, {1: 1}]),
}

# gl_3 example with inputs (w1, w2, w1): vectors per row label, written in the
# index-flipped labels v_a (x) v_bc (x) v_d; only the weights matter here.
SL3_LEVEL_DIAGRAM: dict[int, list[str]] = {
    0: ["1,12,1", "2,12,1", "3,12,1"],
    1: ["2,12,2", "2,13,1", "1,13,1", "3,12,2", "3,12,3", "3,13,1", "2,23,1", "3,23,1"],
    2: ["2,23,2", "3,13,3", "3,23,2", "3,23,3"],
}
SL3_BOXED = "3,12,1"


def diagram(name: str) -> dict[int, dict[int, int]]:
    """``{degree: {column: multiplicity}}`` with the bottom row at degree 0."""
    try:
        _, rows = SL2_DIAGRAMS[name]
    except KeyError:
        raise KeyError(f"unknown diagram {name!r}; known: {sorted(SL2_DIAGRAMS)}") from None
    top = len(rows) - 1
    return {top - r: dict(sorted(row.items())) for r, row in enumerate(rows)}


def diagram_grading(name: str) -> str:
    return SL2_DIAGRAMS[name][0]


def diagram_dimension(name: str) -> int:
    return sum(sum(r.values()) for r in SL2_DIAGRAMS[name][1])


def picture(character: Mapping, H: int) -> dict[int, dict[int, int]]:
    """Turn a ``{(weight, degree): mult}`` map for sl_2 weights into diagram form."""
    if not character:
        return {}
    low = min(d for (_, d) in character)
    rows: dict[int, Counter] = {}
    for (w, d), c in character.items():
        h = w[1] - w[0]
        if (h + H) % 2:
            raise ValueError(f"weight {w} has the wrong parity for top weight {H}")
        rows.setdefault(d - low, Counter())[(h + H) // 2 + 1] += c
    return {d: dict(sorted(r.items())) for d, r in sorted(rows.items())}


def module_picture(m) -> dict[int, dict[int, int]]:
    """Diagram of an sl_2 graded current module by z-degree."""
    H = max(w[1] - w[0] for w in m.weights)
    return picture(m.graded_character(), H)


def _main_body_weight(labels: str) -> tuple:
    """Weight of ``v_a v_bc ...`` written in index-flipped labels, flipped back."""
    w = [0, 0, 0]
    for ch in labels.replace(",", ""):
        w[int(ch) - 1] += 1
    return tuple(reversed(w))


def sl3_level_character() -> dict:
    """``{(weight, label): mult}`` in main-body weights."""
    out = Counter()
    for label, vecs in SL3_LEVEL_DIAGRAM.items():
        for v in vecs:
            out[(_main_body_weight(v), label)] += 1
    return dict(sorted(out.items()))


def sl3_boxed_weight() -> tuple:
    return _main_body_weight(SL3_BOXED)


def sl3_boxed_factor_weights() -> list:
    """Main-body weight of each tensor factor of the boxed vector."""
    return [_main_body_weight(part) for part in SL3_BOXED.split(",")]
