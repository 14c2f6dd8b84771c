"""Compare generated schemas against curated references.

Per class and per category (arguments, types, defaults, ranges,
distributions, constraints, plus the terminal type-values and enum-values
analyses) the harness counts reference entries, generated entries and
matches, then micro-averages precision, recall and F1 over the corpus.
Matching rules:

* argument — same name on both sides.
* type — the type skeleton (type/enum/anyOf/laleType), structurally equal
  after anyOf flattening and order normalization.
* default — equal values; integers exact, floats to 1e-9 relative.
* range — the generated interval (ForOptimizer bounds when present, hard
  bounds otherwise) must be included in the curated interval.
* distribution — string equality.
* constraint — structural equality of the two-branch anyOf, descriptions
  ignored; TODO placeholders count as detected but never as generated.
* type values — multiset of terminal types (boolean, integer, number,
  string, enum, ...) over all properties.
* enum values — multiset of all enum members over all properties.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .schema_assembler import OperatorSchemas

CATEGORIES = ("arguments", "types", "defaults", "ranges", "distributions",
              "constraints", "type_values", "enum_values")

_FLOAT_RTOL = 1e-9


class SchemaLoadError(ValueError):
    pass


@dataclass
class CategoryCounts:
    reference: int = 0
    generated: int = 0
    match: int = 0

    @property
    def precision(self) -> float:
        return self.match / self.generated if self.generated else 0.0

    @property
    def recall(self) -> float:
        return self.match / self.reference if self.reference else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if (p or r) else 0.0

    def add(self, other: "CategoryCounts") -> None:
        self.reference += other.reference
        self.generated += other.generated
        self.match += other.match

    def to_json(self) -> dict:
        return {"reference": self.reference, "generated": self.generated,
                "match": self.match, "precision": round(self.precision, 4),
                "recall": round(self.recall, 4), "f1": round(self.f1, 4)}


@dataclass
class ClassComparison:
    class_name: str
    categories: dict[str, CategoryCounts] = field(default_factory=dict)
    constraints_detected: int = 0


@dataclass
class EvalReport:
    categories: dict[str, CategoryCounts]
    per_class: list[ClassComparison]
    constraints_detected: int = 0

    def to_json(self) -> dict:
        return {
            "categories": {k: v.to_json() for k, v in self.categories.items()},
            "constraints_detected": self.constraints_detected,
            "per_class": {
                row.class_name: {k: v.to_json()
                                 for k, v in row.categories.items()}
                for row in self.per_class
            },
        }


# ---------------------------------------------------------------------------
# fragment views

def _props(doc: OperatorSchemas) -> dict[str, dict]:
    all_of = doc.hyperparams.get("allOf") or [{}]
    return all_of[0].get("properties", {}) or {}


def _constraint_bodies(doc: OperatorSchemas) -> list[dict]:
    all_of = doc.hyperparams.get("allOf") or [{}]
    return [c for c in all_of[1:] if isinstance(c, dict)]


def _canon(value: object) -> str:
    return json.dumps(value, sort_keys=True, default=str)


def type_skeleton(frag: dict) -> dict | None:
    """The comparable type structure of a fragment, or None when untyped."""
    if "enum" in frag:
        return {"enum": sorted(frag["enum"], key=_canon)}
    if "anyOf" in frag:
        members = []
        for m in frag["anyOf"]:
            sk = type_skeleton(m) if isinstance(m, dict) else None
            if sk is None:
                continue
            if "anyOf" in sk:
                members.extend(sk["anyOf"])
            else:
                members.append(sk)
        if not members:
            return None
        return {"anyOf": sorted(members, key=_canon)}
    out = {}
    if "type" in frag:
        out["type"] = frag["type"]
    if "laleType" in frag:
        out["laleType"] = frag["laleType"]
    return out or None


def _default_eq(a: object, b: object) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        scale = max(abs(a), abs(b))
        return abs(a - b) <= _FLOAT_RTOL * scale
    return a == b


def _range_of(frag: dict) -> tuple | None:
    lo = frag.get("minimumForOptimizer", frag.get("minimum"))
    hi = frag.get("maximumForOptimizer", frag.get("maximum"))
    if lo is None and hi is None:
        return None
    lo_excl = bool(frag.get("exclusiveMinimum")) \
        if "minimumForOptimizer" not in frag else False
    hi_excl = bool(frag.get("exclusiveMaximum")) \
        if "maximumForOptimizer" not in frag else False
    return lo, lo_excl, hi, hi_excl


def _range_subset(gen: tuple, cur: tuple) -> bool:
    g_lo, g_lo_x, g_hi, g_hi_x = gen
    c_lo, c_lo_x, c_hi, c_hi_x = cur
    if c_lo is not None:
        if g_lo is None:
            return False
        if g_lo < c_lo or (g_lo == c_lo and c_lo_x and not g_lo_x):
            return False
    if c_hi is not None:
        if g_hi is None:
            return False
        if g_hi > c_hi or (g_hi == c_hi and c_hi_x and not g_hi_x):
            return False
    return True


def _constraint_key(body: dict) -> str:
    norm = {k: _normalize_constraint(v) for k, v in body.items()
            if k != "description"}
    return _canon(norm)


def _normalize_constraint(value: object) -> object:
    if isinstance(value, dict):
        return {k: _normalize_constraint(v) for k, v in sorted(value.items())}
    if isinstance(value, list):
        return sorted((_normalize_constraint(v) for v in value), key=_canon)
    return value


def _terminal_types(frag: dict) -> list[str]:
    sk = type_skeleton(frag)
    if sk is None:
        return []
    if "enum" in sk:
        return ["enum"]
    if "anyOf" in sk:
        out: list[str] = []
        for m in sk["anyOf"]:
            out.extend(_terminal_types(m))
        return out
    if "type" in sk:
        return [sk["type"]]
    if "laleType" in sk:
        lale = sk["laleType"]
        return [lale if isinstance(lale, str) else "array"]
    return []


def _enum_members(frag: dict) -> list[str]:
    out: list[str] = []
    if "enum" in frag:
        out.extend(_canon(v) for v in frag["enum"])
    for m in frag.get("anyOf", []):
        if isinstance(m, dict):
            out.extend(_enum_members(m))
    return out


# ---------------------------------------------------------------------------
# comparison

def compare(generated: OperatorSchemas, curated: OperatorSchemas,
            ) -> ClassComparison:
    """Compare one generated/curated pair; both must describe the same class."""
    if generated.class_name != curated.class_name:
        raise SchemaLoadError(
            f"class mismatch: generated {generated.class_name!r} vs curated "
            f"{curated.class_name!r}")
    gen_props = _props(generated)
    cur_props = _props(curated)
    cats = {name: CategoryCounts() for name in CATEGORIES}

    cats["arguments"] = CategoryCounts(
        reference=len(cur_props), generated=len(gen_props),
        match=len(set(gen_props) & set(cur_props)))

    for name in set(gen_props) | set(cur_props):
        g = gen_props.get(name, {})
        c = cur_props.get(name, {})
        g_type = type_skeleton(g)
        c_type = type_skeleton(c)
        _tally(cats["types"], c_type is not None, g_type is not None,
               g_type is not None and c_type is not None and g_type == c_type)
        g_has_d = "default" in g
        c_has_d = "default" in c
        _tally(cats["defaults"], c_has_d, g_has_d,
               g_has_d and c_has_d and _default_eq(g["default"], c["default"]))
        g_range = _range_of(g)
        c_range = _range_of(c)
        _tally(cats["ranges"], c_range is not None, g_range is not None,
               g_range is not None and c_range is not None
               and _range_subset(g_range, c_range))
        g_dist = g.get("distribution")
        c_dist = c.get("distribution")
        _tally(cats["distributions"], c_dist is not None, g_dist is not None,
               g_dist is not None and g_dist == c_dist)

    gen_valid = [b for b in _constraint_bodies(generated) if "anyOf" in b]
    cur_valid = [b for b in _constraint_bodies(curated) if "anyOf" in b]
    gen_keys = [_constraint_key(b) for b in gen_valid]
    cur_keys = Counter(_constraint_key(b) for b in cur_valid)
    matched = 0
    for key in gen_keys:
        if cur_keys.get(key, 0) > 0:
            cur_keys[key] -= 1
            matched += 1
    cats["constraints"] = CategoryCounts(
        reference=len(cur_valid), generated=len(gen_valid), match=matched)

    gen_tv = Counter(t for f in gen_props.values() for t in _terminal_types(f))
    cur_tv = Counter(t for f in cur_props.values() for t in _terminal_types(f))
    cats["type_values"] = CategoryCounts(
        reference=sum(cur_tv.values()), generated=sum(gen_tv.values()),
        match=sum((gen_tv & cur_tv).values()))

    gen_ev = Counter(v for f in gen_props.values() for v in _enum_members(f))
    cur_ev = Counter(v for f in cur_props.values() for v in _enum_members(f))
    cats["enum_values"] = CategoryCounts(
        reference=sum(cur_ev.values()), generated=sum(gen_ev.values()),
        match=sum((gen_ev & cur_ev).values()))

    detected = generated.provenance.get("constraints", {}).get(
        "detected", len(_constraint_bodies(generated)))
    return ClassComparison(class_name=generated.class_name, categories=cats,
                           constraints_detected=detected)


def _tally(counts: CategoryCounts, in_ref: bool, in_gen: bool,
           matched: bool) -> None:
    counts.reference += int(in_ref)
    counts.generated += int(in_gen)
    counts.match += int(matched)


def aggregate(rows: list[ClassComparison]) -> EvalReport:
    """Micro-average across classes: sum counts, then recompute P/R/F1."""
    if not rows:
        raise SchemaLoadError("nothing to aggregate")
    totals = {name: CategoryCounts() for name in CATEGORIES}
    for row in rows:
        for name in CATEGORIES:
            if name in row.categories:
                totals[name].add(row.categories[name])
    return EvalReport(categories=totals, per_class=list(rows),
                      constraints_detected=sum(r.constraints_detected
                                               for r in rows))


# ---------------------------------------------------------------------------
# coverage summary over generated docs only

_RANGE_KEYS = ("minimum", "maximum", "minimumForOptimizer",
               "maximumForOptimizer")


def _io_units(doc: OperatorSchemas) -> list[dict]:
    units: list[dict] = []
    for frag in (doc.fit_input, doc.predict_or_transform_input):
        if isinstance(frag, dict):
            units.extend(v for v in frag.get("properties", {}).values()
                         if isinstance(v, dict))
    if isinstance(doc.output, dict):
        units.append(doc.output)
    return units


def coverage(docs: list[OperatorSchemas]) -> dict:
    """Summary counters over generated docs, split per library, with a
    (parser + refiner) attribution per category from document provenance."""
    from .schema_assembler import has_type_part

    libraries = sorted({d.library or "unknown" for d in docs})
    rows: dict[str, dict] = {}
    for scope in ["total"] + libraries:
        rows[scope] = {
            "classes": 0, "arguments": 0,
            "types": [0, 0], "default": [0, 0], "range": [0, 0],
            "relevant_arguments": 0,
            "constraints_valid": 0, "constraints_detected": 0,
        }

    for doc in docs:
        scopes = ("total", doc.library or "unknown")
        prov = doc.provenance or {}
        units = [(name, frag, True) for name, frag in _props(doc).items()]
        units += [(None, frag, False) for frag in _io_units(doc)]
        for scope in scopes:
            row = rows[scope]
            row["classes"] += 1
            row["arguments"] += len(units)
            for name, frag, is_hparam in units:
                typed = has_type_part(frag)
                has_default = "default" in frag
                has_range = any(k in frag for k in _RANGE_KEYS)
                relevant = frag.get("type") in ("integer", "number") \
                    or "enum" in frag or frag.get("type") == "string"
                if relevant:
                    row["relevant_arguments"] += 1

                def _attr(cat: str) -> int:
                    if is_hparam and prov.get(cat, {}).get(name) == "refiner":
                        return 1
                    return 0

                if typed:
                    row["types"][_attr("types")] += 1
                if has_default:
                    row["default"][_attr("defaults")] += 1
                if has_range:
                    row["range"][_attr("ranges")] += 1
            valid = len([b for b in _constraint_bodies(doc) if "anyOf" in b])
            detected = prov.get("constraints", {}).get(
                "detected", len(_constraint_bodies(doc)))
            row["constraints_valid"] += valid
            row["constraints_detected"] += detected
    return rows


# ---------------------------------------------------------------------------
# rendering

def report_table(report: EvalReport) -> str:
    lines = [f"{'':14}{'reference':>10}{'generated':>10}{'match':>7}"
             f"{'precision':>11}{'recall':>8}{'f1':>6}"]
    for name in CATEGORIES:
        c = report.categories[name]
        gen = str(c.generated)
        if name == "constraints" and report.constraints_detected:
            gen = f"{c.generated} (/{report.constraints_detected})"
        lines.append(f"{name:14}{c.reference:>10}{gen:>10}{c.match:>7}"
                     f"{c.precision:>11.2f}{c.recall:>8.2f}{c.f1:>6.2f}")
    return "\n".join(lines)


def coverage_table(cov: dict) -> str:
    scopes = [s for s in cov if s != "total"]
    header = f"{'':12}{'total':>10}{'coverage':>10}" + "".join(
        f"{s:>22}" for s in scopes)
    lines = [header]

    def fmt_pair(pair: list[int]) -> str:
        return f"{pair[0] + pair[1]} ({pair[0]} + {pair[1]})"

    total = cov["total"]
    args_total = total["arguments"] or 1
    rows = [
        ("classes", str(total["classes"]), "1.00",
         [str(cov[s]["classes"]) for s in scopes]),
        ("arguments", str(total["arguments"]), "1.00",
         [str(cov[s]["arguments"]) for s in scopes]),
        ("types", str(sum(total["types"])),
         f"{sum(total['types']) / args_total:.2f}",
         [fmt_pair(cov[s]["types"]) for s in scopes]),
        ("default", str(sum(total["default"])),
         f"{sum(total['default']) / args_total:.2f}",
         [fmt_pair(cov[s]["default"]) for s in scopes]),
        ("range", str(sum(total["range"])),
         f"{sum(total['range']) / max(total['relevant_arguments'], 1):.2f}",
         [fmt_pair(cov[s]["range"]) for s in scopes]),
        ("constraints", str(total["constraints_valid"]),
         f"{total['constraints_valid'] / max(total['constraints_detected'], 1):.2f}",
         [f"{cov[s]['constraints_valid']}/{cov[s]['constraints_detected']}"
          for s in scopes]),
    ]
    for name, tot, ratio, per_lib in rows:
        lines.append(f"{name:12}{tot:>10}{ratio:>10}" + "".join(
            f"{cell:>22}" for cell in per_lib))
    return "\n".join(lines)
