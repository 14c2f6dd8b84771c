"""probe: run the dynamic analyses for one class and write an
observation file.

Partial failures are data and still produce a useful observation file,
so the exit code is 0 even when fits fail; only an unusable invocation
(unreadable plan, bad arguments) exits nonzero.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .probes import ProbePlan, load_class, run_plan


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probe",
        description="Probe a live operator class per a plan file and emit "
                    "an observation JSON file.")
    parser.add_argument("--class", dest="class_path", required=True,
                        help="dotted import path of the operator class")
    parser.add_argument("--plan", required=True, help="plan JSON file")
    parser.add_argument("--out", required=True, help="observation JSON output")
    parser.add_argument("--timeout", type=float, default=10.0,
                        help="per-trial wall clock limit in seconds")
    parser.add_argument("--seed", type=int, default=0,
                        help="dataset seed")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        plan = ProbePlan.from_json(
            json.loads(Path(args.plan).read_text(encoding="utf-8")))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load plan {args.plan}: {exc}", file=sys.stderr)
        return 1
    try:
        cls = load_class(args.class_path)
    except Exception as exc:
        observations = {
            "class_name": plan.class_name,
            "notes": [f"ImportFailure: {type(exc).__name__}: {exc}"],
        }
    else:
        observations = run_plan(cls, plan, timeout=args.timeout,
                                seed=args.seed)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(observations, indent=2, ensure_ascii=False)
                   + "\n", encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
