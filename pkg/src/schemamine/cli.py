"""Command-line driver: mine -> plan -> (probe) -> refine -> eval.

The miner turns source trees into one JSON document per operator class
plus a machine-readable diagnostics file and a probe plan per class. The
refiner merges observation files (produced by the standalone probe runner)
and the overrides dictionary into the mined documents. The evaluator
compares a generated tree against a curated tree and prints the metric
report as JSON or as aligned tables.

Identical inputs and configuration produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import fnmatch
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from .diagnostics import Diagnostics, MALFORMED_SOURCE
from .constraint_cnl import DEFAULT_TRIGGERS
from .eval_harness import (
    SchemaLoadError,
    aggregate,
    compare,
    coverage,
    coverage_table,
    report_table,
)
from .refiner import (
    DEFAULT_OPTIMIZER_BLOCKLIST,
    DEFAULT_RATIO_THRESHOLD,
    DEFAULT_SCALE_FREE_NAMES,
    ObservationError,
    ObservationSet,
    OverrideError,
    Overrides,
    RefinerConfig,
    refine,
)
from .schema_assembler import OperatorSchemas, mine_operator, serialize
from .source_extractor import SourceFile, scan_source

log = logging.getLogger("schemamine")

DEFAULT_DATASET = {"n_samples": 30, "n_features": 5, "task": "classification"}


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    include: list[str] = field(default_factory=lambda: ["*"])
    exclude: list[str] = field(default_factory=list)
    constraint_triggers: list[str] = field(
        default_factory=lambda: list(DEFAULT_TRIGGERS))
    optimizer_blocklist: list[str] = field(
        default_factory=lambda: list(DEFAULT_OPTIMIZER_BLOCKLIST))
    scale_free_names: list[str] = field(
        default_factory=lambda: list(DEFAULT_SCALE_FREE_NAMES))
    distribution_ratio_threshold: float = DEFAULT_RATIO_THRESHOLD
    overrides_path: str | None = None
    output_dir: str | None = None
    library_label: str | None = None
    probe_dataset: dict = field(default_factory=lambda: dict(DEFAULT_DATASET))

    def refiner_config(self) -> RefinerConfig:
        return RefinerConfig(
            optimizer_blocklist=tuple(self.optimizer_blocklist),
            scale_free_names=tuple(self.scale_free_names),
            ratio_threshold=self.distribution_ratio_threshold)

    def selected(self, class_name: str) -> bool:
        if not any(fnmatch.fnmatch(class_name, p) for p in self.include):
            return False
        return not any(fnmatch.fnmatch(class_name, p) for p in self.exclude)


def load_config(path: str | None) -> Config:
    if path is None:
        return Config()
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    known = {f.name for f in fields(Config)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = Config(**data)
    base = p.resolve().parent
    if cfg.overrides_path is not None:
        cfg.overrides_path = str((base / cfg.overrides_path).resolve())
    if cfg.output_dir is not None:
        cfg.output_dir = str((base / cfg.output_dir).resolve())
    return cfg


def _load_overrides(path: str | None) -> Overrides:
    if not path:
        return Overrides()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise OverrideError(f"cannot read overrides {path}: {exc}") from exc
    return Overrides.from_json(data)


# ---------------------------------------------------------------------------
# probe plans

def build_plan(doc: OperatorSchemas, pool: dict[str, list],
               dataset: dict) -> dict:
    """A probe plan for one class, candidates drawn from the class's own
    enum values first, then the cross-class pool (greedy harvesting)."""
    main = (doc.hyperparams.get("allOf") or [{}])[0]
    props: dict[str, dict] = main.get("properties", {}) or {}
    args = list(props)
    candidates: dict[str, list] = {}
    bounds: dict[str, dict] = {}
    for name, frag in props.items():
        values: list = []
        for v in frag.get("enum", []):
            if v not in values:
                values.append(v)
        for member in frag.get("anyOf", []):
            if isinstance(member, dict):
                for v in member.get("enum", []):
                    if v is not None and v not in values:
                        values.append(v)
        for v in pool.get(name, []):
            if v not in values:
                values.append(v)
        if values:
            candidates[name] = values
        b = {}
        if isinstance(frag.get("minimum"), (int, float)):
            b["min"] = frag["minimum"]
        if isinstance(frag.get("maximum"), (int, float)):
            b["max"] = frag["maximum"]
        if b and frag.get("type") in ("number", "integer"):
            bounds[name] = b
    plan: dict = {"class_name": doc.class_name, "args": args,
                  "candidates": candidates}
    if bounds:
        plan["bounds_to_test"] = bounds
    plan["dataset"] = dict(dataset)
    return plan


def build_candidate_pool(docs: list[OperatorSchemas]) -> dict[str, list]:
    """Enum values per argument name pooled across classes, visited in
    alphabetical class order so plans are stable."""
    pool: dict[str, list] = {}
    for doc in sorted(docs, key=lambda d: d.class_name):
        main = (doc.hyperparams.get("allOf") or [{}])[0]
        for name, frag in (main.get("properties", {}) or {}).items():
            for v in frag.get("enum", []):
                if v is None:
                    continue
                pool.setdefault(name, [])
                if v not in pool[name]:
                    pool[name].append(v)
    return pool


# ---------------------------------------------------------------------------
# subcommands

def _source_files(paths: list[str]) -> list[Path]:
    out: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend(sorted(p.rglob("*.py")))
        else:
            out.append(p)
    return out


def _dump_json(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n",
                    encoding="utf-8")


def cmd_mine(args: argparse.Namespace, config: Config) -> int:
    out_dir = Path(args.out or config.output_dir or "out")
    diags = Diagnostics()
    written: list[str] = []
    excluded: list[str] = []
    failed: list[str] = []
    docs: list[OperatorSchemas] = []

    files = _source_files(args.inputs)
    if not files:
        print("no input files found", file=sys.stderr)
        return 2
    for path in files:
        try:
            src = SourceFile.from_path(path)
        except (OSError, UnicodeDecodeError) as exc:
            diags.add(MALFORMED_SOURCE, f"cannot read {path}: {exc}")
            continue
        library = config.library_label or path.stem
        for class_doc in scan_source(src, diags):
            if not config.selected(class_doc.class_name):
                excluded.append(class_doc.class_name)
                continue
            try:
                doc = mine_operator(class_doc, library=library,
                                    triggers=tuple(config.constraint_triggers),
                                    diags=diags)
            except Exception as exc:   # assembly is total; belt and braces
                log.exception("mining %s failed", class_doc.class_name)
                diags.add(MALFORMED_SOURCE,
                          f"mining failed: {exc}",
                          class_name=class_doc.class_name)
                failed.append(class_doc.class_name)
                continue
            docs.append(doc)
            written.append(doc.class_name)

    pool = build_candidate_pool(docs)
    for doc in docs:
        _dump_json(out_dir / doc.library / f"{doc.class_name}.json",
                   doc.to_json())
        _dump_json(out_dir / "plans" / f"{doc.class_name}.json",
                   build_plan(doc, pool, config.probe_dataset))

    accounting = {"written": sorted(written), "excluded": sorted(excluded),
                  "failed": sorted(failed)}
    _dump_json(out_dir / "diagnostics.json",
               {"classes": accounting, **diags.to_json()})
    log.info("mined %d classes (%d excluded, %d failed)",
             len(written), len(excluded), len(failed))
    return 0 if written else 2


def _schema_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.rglob("*.json")
                  if p.name != "diagnostics.json"
                  and "plans" not in p.relative_to(directory).parts)


def _load_doc(path: Path) -> OperatorSchemas:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaLoadError(f"cannot read schema file {path}: {exc}") from exc
    if not isinstance(data, dict) or "hyperparams" not in data:
        raise SchemaLoadError(f"{path} is not an operator schema document")
    return OperatorSchemas.from_json(data)


def cmd_refine(args: argparse.Namespace, config: Config) -> int:
    raw_dir = Path(args.raw_dir)
    obs_dir = Path(args.observations) if args.observations else None
    out_dir = Path(args.out or config.output_dir or "refined")
    overrides = _load_overrides(args.overrides or config.overrides_path)
    rconfig = config.refiner_config()
    diags = Diagnostics()
    count = 0
    for path in _schema_files(raw_dir):
        doc = _load_doc(path)
        obs = None
        if obs_dir is not None:
            obs_path = obs_dir / f"{doc.class_name}.json"
            if obs_path.exists():
                obs = ObservationSet.from_json(
                    json.loads(obs_path.read_text(encoding="utf-8")))
        refined = refine(doc, obs, overrides, rconfig, diags)
        rel = path.relative_to(raw_dir)
        target = out_dir / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(serialize(refined), encoding="utf-8")
        count += 1
    _dump_json(out_dir / "diagnostics.json", diags.to_json())
    log.info("refined %d schema files", count)
    return 0


def cmd_eval(args: argparse.Namespace, config: Config) -> int:
    gen_dir = Path(args.generated)
    cur_dir = Path(args.curated)
    cur_files = {p.stem: p for p in _schema_files(cur_dir)} if cur_dir.is_dir() else {}
    if not cur_files:
        print(f"curated directory {cur_dir} is empty", file=sys.stderr)
        return 1
    gen_files = {p.stem: p for p in _schema_files(gen_dir)}
    rows = []
    gen_docs = []
    paired = sorted(set(gen_files) & set(cur_files))
    for stem in paired:
        gen = _load_doc(gen_files[stem])
        cur = _load_doc(cur_files[stem])
        gen_docs.append(gen)
        rows.append(compare(gen, cur))
    unpaired = {
        "generated_only": sorted(set(gen_files) - set(cur_files)),
        "curated_only": sorted(set(cur_files) - set(gen_files)),
    }
    if not rows:
        print("no generated/curated pairs to compare", file=sys.stderr)
        return 1
    report = aggregate(rows)
    cov = coverage(gen_docs)
    if args.format == "json":
        out = {"report": report.to_json(), "coverage": cov,
               "unpaired": unpaired}
        print(json.dumps(out, indent=2, ensure_ascii=False))
    else:
        print(report_table(report))
        print()
        print(coverage_table(cov))
        for kind, names in unpaired.items():
            if names:
                print(f"{kind}: {', '.join(names)}")
    return 0


def cmd_plan(args: argparse.Namespace, config: Config) -> int:
    schema_dir = Path(args.schemas)
    out_dir = Path(args.out or config.output_dir or "plans")
    docs = [_load_doc(p) for p in _schema_files(schema_dir)]
    if not docs:
        print(f"no schema files under {schema_dir}", file=sys.stderr)
        return 2
    pool = build_candidate_pool(docs)
    for doc in docs:
        _dump_json(out_dir / f"{doc.class_name}.json",
                   build_plan(doc, pool, config.probe_dataset))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schemamine",
        description="Mine hyperparameter JSON Schemas from numpydoc "
                    "docstrings and refine them with runtime observations.")
    parser.add_argument("--config", help="JSON configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine schemas from Python source files")
    p.add_argument("inputs", nargs="+", help="source files or directories")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("refine", help="apply observations and overrides")
    p.add_argument("raw_dir", help="directory of mined schema documents")
    p.add_argument("--observations", help="directory of observation files")
    p.add_argument("--overrides", help="overrides JSON file")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("eval", help="compare generated vs curated schemas")
    p.add_argument("generated", help="directory of generated documents")
    p.add_argument("curated", help="directory of curated documents")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("plan", help="emit probe plans from mined schemas")
    p.add_argument("schemas", help="directory of mined schema documents")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_plan)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("SCHEMAMINE_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except (ConfigError, OverrideError, ObservationError,
            SchemaLoadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
