"""Merge mined schemas with runtime observations and user overrides.

Per-field precedence is override > observation > docstring:

* Sentinel defaults (a signature string like ``'warn'`` that the mined
  schema rejects) are replaced by the default observed after a live fit.
* Values the probe accepted widen under-specified string arguments into
  enums; values it rejected are removed, with a conflict report when the
  documentation claimed them.
* Tested numeric bounds become minimum/maximum with exclusivity flags.
* A distribution is picked for numeric arguments once bounds exist:
  scale-free names or wide positive ranges get loguniform, the rest
  uniform.
* relevantToOptimizer drops blocklisted arguments (verbosity, parallelism
  and similar knobs) unless an override explicitly keeps them.
* Overrides are applied last and win verbatim.

Refinement never removes an argument from properties or required, and
running it twice with the same inputs is a no-op.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources

from jsonschema import Draft4Validator

from .diagnostics import (
    Diagnostics,
    CONFLICT,
    DEFAULT_MISMATCH,
    NONFINITE_DEFAULT,
    SENTINEL_DEFAULT,
)
from .schema_assembler import (
    OperatorSchemas,
    fragment_accepts,
    has_type_part,
    order_fragment,
)

_MISSING = object()

DEFAULT_OPTIMIZER_BLOCKLIST = (
    "verbose", "n_jobs", "random_state", "copy", "warm_start",
    "cache_size", "max_iter",
)
DEFAULT_SCALE_FREE_NAMES = ("C", "alpha", "tol", "learning_rate")
DEFAULT_RATIO_THRESHOLD = 100.0

OVERRIDE_KEYS = frozenset({
    "schema", "exclude_from_optimizer", "distribution",
    "minimumForOptimizer", "maximumForOptimizer", "values_blacklist",
})


class ObservationError(ValueError):
    pass


class OverrideError(ValueError):
    pass


def _load_schema(name: str) -> dict:
    text = (resources.files("schemamine") / "schemas" / name).read_text("utf-8")
    return json.loads(text)


_OBS_VALIDATOR = Draft4Validator(_load_schema("observation_set.schema.json"))


@dataclass
class ObservationSet:
    class_name: str
    observed_defaults: dict[str, object] = field(default_factory=dict)
    harvested_enums: dict[str, list[dict]] = field(default_factory=dict)
    numeric_bounds: dict[str, dict] = field(default_factory=dict)
    exception_notes: dict[str, list[str]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_json(cls, data: dict) -> "ObservationSet":
        errors = sorted(_OBS_VALIDATOR.iter_errors(data), key=str)
        if errors:
            raise ObservationError(
                f"observation file invalid: {errors[0].message}")
        return cls(
            class_name=data["class_name"],
            observed_defaults=data.get("observed_defaults", {}),
            harvested_enums=data.get("harvested_enums", {}),
            numeric_bounds=data.get("numeric_bounds", {}),
            exception_notes=data.get("exception_notes", {}),
            notes=data.get("notes", []),
        )

    def verdicts(self, arg: str) -> tuple[list[object], list[object]]:
        accepted: list[object] = []
        rejected: list[object] = []
        for entry in self.harvested_enums.get(arg, []):
            if entry["verdict"] == "accepted":
                accepted.append(entry["value"])
            elif entry["verdict"] == "rejected":
                rejected.append(entry["value"])
        return accepted, rejected


@dataclass
class Overrides:
    entries: dict[tuple[str, str], dict] = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: dict) -> "Overrides":
        entries: dict[tuple[str, str], dict] = {}
        for key, spec in data.items():
            cls_name, dot, arg = key.partition(".")
            if not dot or not cls_name or not arg:
                raise OverrideError(
                    f"override key {key!r} is not of the form ClassName.arg")
            if not isinstance(spec, dict):
                raise OverrideError(f"override for {key!r} must be an object")
            unknown = set(spec) - OVERRIDE_KEYS
            if unknown:
                raise OverrideError(
                    f"unknown override keys for {key!r}: {sorted(unknown)}")
            entries[(cls_name, arg)] = spec
        return cls(entries)

    def for_class(self, class_name: str) -> dict[str, dict]:
        return {arg: spec for (cls_name, arg), spec in self.entries.items()
                if cls_name == class_name}


@dataclass(frozen=True)
class RefinerConfig:
    optimizer_blocklist: tuple[str, ...] = DEFAULT_OPTIMIZER_BLOCKLIST
    scale_free_names: tuple[str, ...] = DEFAULT_SCALE_FREE_NAMES
    ratio_threshold: float = DEFAULT_RATIO_THRESHOLD


def _scalar_eq(a: object, b: object) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return a == b


def _is_sentinel_default(frag: dict, value: object) -> bool:
    if not isinstance(value, str):
        return False
    return not (has_type_part(frag) and fragment_accepts(frag, value))


def _is_numeric(frag: dict) -> bool:
    if frag.get("type") in ("number", "integer"):
        return True
    return any(m.get("type") in ("number", "integer")
               for m in frag.get("anyOf", []) if isinstance(m, dict))


def _string_target(frag: dict) -> dict | None:
    """The fragment (or anyOf member) documented as a bare string."""
    if frag.get("type") == "string" and "enum" not in frag:
        return frag
    for member in frag.get("anyOf", []):
        if isinstance(member, dict) and member.get("type") == "string" \
                and "enum" not in member:
            return member
    return None


def _enum_target(frag: dict) -> dict | None:
    if "enum" in frag:
        return frag
    for member in frag.get("anyOf", []):
        if isinstance(member, dict) and "enum" in member \
                and member.get("enum") != [None]:
            return member
    return None


def refine(raw: OperatorSchemas, obs: ObservationSet | None, ov: Overrides,
           config: RefinerConfig = RefinerConfig(),
           diags: Diagnostics | None = None) -> OperatorSchemas:
    """Produce the refined OperatorSchemas; the input is left untouched."""
    diags = diags if diags is not None else Diagnostics()
    if obs is not None and obs.class_name != raw.class_name:
        raise ObservationError(
            f"observations are for {obs.class_name!r}, schema is for "
            f"{raw.class_name!r}")
    out = copy.deepcopy(raw)
    prov = out.provenance
    for cat in ("types", "defaults", "ranges", "distributions"):
        prov.setdefault(cat, {})
    main = out.hyperparams.get("allOf", [{}])[0]
    props: dict[str, dict] = main.get("properties", {})
    class_over = ov.for_class(raw.class_name)

    for name in list(props):
        frag = props[name]
        spec = class_over.get(name, {})
        frag = _apply_observations(name, frag, obs, prov, diags,
                                   raw.class_name)
        frag = _apply_distribution(name, frag, config, prov)
        frag = _apply_overrides(name, frag, spec, prov, diags, raw.class_name)
        _check_default(name, frag, diags, raw.class_name)
        props[name] = order_fragment(frag)

    if "relevantToOptimizer" in main:
        main["relevantToOptimizer"] = [
            n for n in main["relevantToOptimizer"]
            if _keep_relevant(n, config, class_over)
        ]
    return out


def _apply_observations(name: str, frag: dict, obs: ObservationSet | None,
                        prov: dict, diags: Diagnostics,
                        class_name: str) -> dict:
    if obs is None:
        return frag
    if name in obs.observed_defaults:
        observed = obs.observed_defaults[name]
        current = frag.get("default", _MISSING)
        if current is _MISSING or _is_sentinel_default(frag, current):
            if current is not _MISSING and not _scalar_eq(current, observed):
                diags.add(SENTINEL_DEFAULT,
                          f"sentinel default {current!r} replaced by observed "
                          f"{observed!r}", class_name=class_name, arg=name)
            if not _scalar_eq(frag.get("default", _MISSING), observed):
                frag["default"] = observed
                prov["defaults"][name] = "refiner"

    accepted, rejected = obs.verdicts(name) if name in obs.harvested_enums \
        else ([], [])
    if accepted or rejected:
        target = _enum_target(frag)
        if target is not None:
            original = list(target["enum"])
            kept = [v for v in original
                    if not any(_scalar_eq(v, r) for r in rejected)]
            removed = [v for v in original if v not in kept]
            if removed:
                diags.add(CONFLICT,
                          f"documented values {removed!r} rejected at runtime "
                          f"and removed", class_name=class_name, arg=name)
            added = [v for v in accepted
                     if not any(_scalar_eq(v, k) for k in kept)]
            new_enum = kept + added
            if not new_enum:
                diags.add(CONFLICT,
                          "every documented value was rejected; enum kept as "
                          "documented", class_name=class_name, arg=name)
            elif new_enum != original:
                target["enum"] = new_enum
                prov["types"][name] = "refiner"
        else:
            target = _string_target(frag)
            if target is not None and accepted:
                target.pop("type")
                target["enum"] = list(accepted)
                prov["types"][name] = "refiner"

    bounds = obs.numeric_bounds.get(name)
    if bounds and _is_numeric(frag):
        touched = False
        if bounds.get("min") is not None:
            frag["minimum"] = bounds["min"]
            if bounds.get("min_exclusive"):
                frag["exclusiveMinimum"] = True
            touched = True
        if bounds.get("max") is not None:
            frag["maximum"] = bounds["max"]
            if bounds.get("max_exclusive"):
                frag["exclusiveMaximum"] = True
            touched = True
        if touched:
            prov["ranges"][name] = "refiner"
    return frag


def _apply_distribution(name: str, frag: dict, config: RefinerConfig,
                        prov: dict) -> dict:
    if "distribution" in frag or not _is_numeric(frag):
        return frag
    lo = frag.get("minimum")
    hi = frag.get("maximum")
    if lo is None and hi is None:
        return frag
    scale_free = name in config.scale_free_names
    wide = (lo is not None and hi is not None and lo > 0
            and hi / lo > config.ratio_threshold)
    frag["distribution"] = "loguniform" if (scale_free or wide) else "uniform"
    prov["distributions"][name] = "refiner"
    return frag


def _apply_overrides(name: str, frag: dict, spec: dict, prov: dict,
                     diags: Diagnostics, class_name: str) -> dict:
    if not spec:
        return frag
    if "schema" in spec:
        frag = copy.deepcopy(spec["schema"])
        prov["types"][name] = "refiner"
        if "default" in frag:
            prov["defaults"][name] = "refiner"
    if "distribution" in spec:
        frag["distribution"] = spec["distribution"]
        prov["distributions"][name] = "refiner"
    for key in ("minimumForOptimizer", "maximumForOptimizer"):
        if key in spec:
            frag[key] = spec[key]
            prov["ranges"][name] = "refiner"
    if "values_blacklist" in spec and "enum" in frag:
        kept = [v for v in frag["enum"]
                if not any(_scalar_eq(v, b) for b in spec["values_blacklist"])]
        if kept:
            frag["enum"] = kept
        else:
            diags.add(CONFLICT,
                      "values_blacklist would empty the enum; ignored",
                      class_name=class_name, arg=name)
    return frag


def _check_default(name: str, frag: dict, diags: Diagnostics,
                   class_name: str) -> None:
    if "default" not in frag:
        return
    value = frag["default"]
    if isinstance(value, float) and (value != value or abs(value) == float("inf")):
        frag["default"] = None
        diags.add(NONFINITE_DEFAULT, "non-finite default serialized as null",
                  class_name=class_name, arg=name)
        return
    if has_type_part(frag) and not fragment_accepts(frag, value):
        diags.add(DEFAULT_MISMATCH,
                  f"default {value!r} does not satisfy the refined schema",
                  class_name=class_name, arg=name)


def _keep_relevant(name: str, config: RefinerConfig,
                   class_over: dict[str, dict]) -> bool:
    spec = class_over.get(name, {})
    if spec.get("exclude_from_optimizer"):
        return False
    if name in config.optimizer_blocklist:
        return bool(spec)
    return True
