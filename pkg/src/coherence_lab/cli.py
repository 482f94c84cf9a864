"""Command line entry point ``coherence-lab``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import ENGINE_VERSION, SCHEMA_VERSION
from .config import EXPERIMENTS, ConfigError, from_dict, load_config
from .contraction_algebra import PRESETS
from .experiments import EXAMPLES, dumps_report, example_config, report_tsv, run


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS), help="labeling preset of the input data")
    p.add_argument("--operators", choices=("derived", "appendix"), dest="operator_preset",
                   help="operator set used by the closure")
    p.add_argument("--max-entries", type=int, help="cap on stored sparse entries per closure")
    p.add_argument("--workers", type=int, help="worker processes for sweeps")
    p.add_argument("--timings", action="store_true", default=None,
                   help="include wall-clock timings (reports are then no longer reproducible)")
    p.add_argument("--out", help="write the JSON report here and a TSV table next to it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coherence-lab", description=__doc__)
    parser.add_argument("--version", action="version",
                        version=f"coherence-lab engine {ENGINE_VERSION}, report schema {SCHEMA_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config (TOML)")
    p.add_argument("config")
    p.add_argument("--experiment", choices=EXPERIMENTS, help="override the experiment kind")
    p.add_argument("--n", type=int, help="override the rank")
    _add_common(p)

    p = sub.add_parser("suite", help="run the property suites")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--fault", choices=("gt_coefficient",), help="inject a fault to exercise failure paths")
    _add_common(p)

    p = sub.add_parser("example", help="rerun a worked example")
    p.add_argument("name", choices=EXAMPLES)
    _add_common(p)

    p = sub.add_parser("check-module", help="validate a module file and run the presentation check")
    p.add_argument("path")
    return parser


def _overrides(args) -> dict:
    out = {"labeling": args.preset, "operator_preset": args.operator_preset,
           "max_entries": args.max_entries, "workers": args.workers, "timings": args.timings,
           "out": args.out}
    for key in ("experiment", "n"):
        if hasattr(args, key):
            out[key] = getattr(args, key)
    return {k: v for k, v in out.items() if v is not None}


def _emit(report: dict, out: Optional[str]) -> None:
    text = dumps_report(report)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        path.with_suffix(".tsv").write_text(report_tsv(report), encoding="utf-8")
    else:
        sys.stdout.write(text)
    s = report["summary"]
    status = "PASS" if report["passed"] else ("INCOMPLETE" if not report["complete"] else "FAIL")
    print(f"{report['experiment']}: {status} ({s['passed']}/{s['instances']} passed, "
          f"{s['incomplete']} incomplete)", file=sys.stderr)


def _check_module(path: str) -> int:
    from .current_modules import ModuleValidationError, demazure_presentation_check, load_module

    try:
        m = load_module(path)
    except (ModuleValidationError, OSError, ValueError) as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        return 1
    report = demazure_presentation_check(m)
    print(json.dumps({"path": path, "dim": m.dim, "N": m.N, "presentation": report},
                     indent=1, sort_keys=True))
    return 0 if report["passed"] else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "check-module":
        return _check_module(args.path)
    try:
        if args.command == "run":
            cfg = load_config(args.config, _overrides(args))
        elif args.command == "suite":
            cfg = from_dict(dict(_overrides(args), experiment="property_suites", n_max=args.n_max,
                                 fault=args.fault)).validate()
        else:
            cfg = example_config(args.name, **_overrides(args))
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    report = run(cfg)
    _emit(report, cfg.out)
    return 0 if report["passed"] and report["complete"] else 1


if __name__ == "__main__":
    sys.exit(main())
