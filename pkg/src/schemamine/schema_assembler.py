"""Assemble per-argument fragments and constraints into one schema document.

The document layout is a draft-04 ``allOf`` whose first element is the main
object schema (type, additionalProperties, required, relevantToOptimizer,
properties) and whose remaining elements are inter-argument constraints.
Extension keywords (relevantToOptimizer, distribution, the ForOptimizer
bounds, laleType) sit next to standard keywords; draft-04 validators ignore
what they do not know, so the documents stay metaschema-valid.

Assembly is total: an argument whose type line failed to parse still shows
up in ``properties`` with an empty fragment and a diagnostic, keeping
``required`` complete. Output is deterministic, with a fixed key order per
property so serialized documents diff cleanly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .constraint_cnl import ConstraintResult, extract_constraints, DEFAULT_TRIGGERS
from .diagnostics import (
    Diagnostics,
    CONSTRAINT_DEDUP,
    DEFAULT_MISMATCH,
    DOC_ONLY_ARG,
    IGNORED_TYPE,
    NONFINITE_DEFAULT,
    PARSE_FAILURE,
    SENTINEL_DEFAULT,
    UNDOCUMENTED_ARG,
)
from .numpydoc_parser import ArgDoc, first_sentence, parse_parameters, split_sections
from .source_extractor import ClassDoc, Literal
from .type_cnl import (
    ParseFailure,
    Prim,
    fragment_accepts,
    lower_type,
    parse_short_desc,
    tokenize,
)

DRAFT4 = "http://json-schema.org/draft-04/schema#"

PROPERTY_KEY_ORDER = (
    "description", "enum", "type", "anyOf", "items", "laleType",
    "distribution", "minimum", "exclusiveMinimum", "maximum",
    "exclusiveMaximum", "default", "minimumForOptimizer",
    "maximumForOptimizer",
)

_TYPE_KEYS = ("type", "enum", "anyOf", "laleType")
_MISSING = object()


def order_fragment(fragment: dict) -> dict:
    out = {k: fragment[k] for k in PROPERTY_KEY_ORDER if k in fragment}
    for k in sorted(fragment):
        if k not in out:
            out[k] = fragment[k]
    return out


def has_type_part(fragment: dict) -> bool:
    return any(k in fragment for k in _TYPE_KEYS)


@dataclass
class ArgParse:
    """One constructor argument with its documentation and built fragment."""
    name: str
    argdoc: ArgDoc | None
    fragment: dict


@dataclass
class OperatorSchemas:
    class_name: str
    library: str
    hyperparams: dict
    fit_input: dict | None = None
    predict_or_transform_input: dict | None = None
    output: dict | None = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "class_name": self.class_name,
            "library": self.library,
            "hyperparams": self.hyperparams,
            "fit_input": self.fit_input,
            "predict_or_transform_input": self.predict_or_transform_input,
            "output": self.output,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorSchemas":
        return cls(
            class_name=data.get("class_name", ""),
            library=data.get("library", ""),
            hyperparams=data.get("hyperparams") or {},
            fit_input=data.get("fit_input"),
            predict_or_transform_input=data.get("predict_or_transform_input"),
            output=data.get("output"),
            provenance=data.get("provenance") or {},
        )


def serialize(doc: OperatorSchemas) -> str:
    return json.dumps(doc.to_json(), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# fragment building

def _sanitize_default(value: object) -> tuple[object, bool]:
    if isinstance(value, float) and (value != value or abs(value) == float("inf")):
        return None, True
    return value, False


def lower_argdoc(argdoc: ArgDoc, diags: Diagnostics,
                 class_name: str | None = None) -> dict | None:
    """Parse and lower one argument's type line; None on a recorded miss."""
    try:
        parsed = parse_short_desc(tokenize(argdoc.short_desc))
    except ParseFailure as exc:
        diags.add(PARSE_FAILURE,
                  f"{exc} in short description {argdoc.short_desc!r}",
                  class_name=class_name, arg=argdoc.name)
        return None
    if isinstance(parsed.types, Prim) and parsed.types.kind == "ignored":
        diags.add(IGNORED_TYPE, "type documented as Ignored; kept as null enum",
                  class_name=class_name, arg=argdoc.name)
    return lower_type(parsed)


def build_arg_fragment(name: str, argdoc: ArgDoc | None, lowered: dict | None,
                       sig_default: Literal | None, diags: Diagnostics,
                       class_name: str | None = None) -> dict:
    """Combine the lowered type line, the long description, and the
    signature default into one property fragment.

    The documented default wins over the signature default; a string
    signature default that the mined schema rejects is flagged as a
    sentinel rather than a mismatch.
    """
    frag = dict(lowered) if lowered else {}
    if argdoc is not None:
        desc = first_sentence(argdoc.long_desc)
        if desc:
            frag["description"] = desc
    doc_default = frag.get("default", _MISSING)
    sig_value = _MISSING
    if sig_default is not None and sig_default.kind != "other":
        sig_value = sig_default.value
    if doc_default is _MISSING:
        if sig_value is not _MISSING:
            frag["default"] = sig_value
    elif sig_value is not _MISSING and not _scalar_eq(doc_default, sig_value):
        if isinstance(sig_value, str) and not fragment_accepts(frag, sig_value):
            diags.add(SENTINEL_DEFAULT,
                      f"signature default {sig_value!r} looks like a sentinel; "
                      f"documented default {doc_default!r} kept",
                      class_name=class_name, arg=name)
        else:
            diags.add(DEFAULT_MISMATCH,
                      f"documented default {doc_default!r} differs from "
                      f"signature default {sig_value!r}",
                      class_name=class_name, arg=name)
    if "default" in frag:
        value, bad = _sanitize_default(frag["default"])
        if bad:
            frag["default"] = value
            diags.add(NONFINITE_DEFAULT,
                      "non-finite default serialized as null",
                      class_name=class_name, arg=name)
        elif has_type_part(frag) and not fragment_accepts(frag, frag["default"]):
            diags.add(DEFAULT_MISMATCH,
                      f"default {frag['default']!r} does not satisfy the mined type",
                      class_name=class_name, arg=name)
    return order_fragment(frag)


def _scalar_eq(a: object, b: object) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return a == b


def build_fragments(class_doc: ClassDoc, argdocs: list[ArgDoc],
                    diags: Diagnostics) -> list[ArgParse]:
    """Build property fragments for every constructor argument, in
    signature order. Documented arguments missing from the signature are
    reported and dropped; undocumented ones get an empty fragment."""
    by_name = {a.name: a for a in argdocs}
    out: list[ArgParse] = []
    for name, sig_default in class_doc.ctor_defaults.items():
        argdoc = by_name.pop(name, None)
        lowered = None
        if argdoc is None:
            diags.add(UNDOCUMENTED_ARG, "constructor argument not documented",
                      class_name=class_doc.class_name, arg=name)
        else:
            lowered = lower_argdoc(argdoc, diags, class_doc.class_name)
        out.append(ArgParse(
            name=name, argdoc=argdoc,
            fragment=build_arg_fragment(name, argdoc, lowered, sig_default,
                                        diags, class_doc.class_name)))
    for name in by_name:
        diags.add(DOC_ONLY_ARG, "documented argument absent from the signature",
                  class_name=class_doc.class_name, arg=name)
    return out


# ---------------------------------------------------------------------------
# document assembly

def _constraint_fragments(constraints: list[ConstraintResult],
                          diags: Diagnostics,
                          class_name: str | None = None) -> list[dict]:
    """Serialize constraint results, deduplicating structurally equal
    lowered bodies (the same rule is often stated under several arguments)."""
    out: list[dict] = []
    seen: set[str] = set()
    for res in constraints:
        if res.kind == "todo":
            out.append({"description": f"TODO: {res.sentence}"})
            continue
        body = {k: v for k, v in (res.schema or {}).items() if k != "description"}
        key = json.dumps(body, sort_keys=True, default=str)
        if key in seen:
            diags.add(CONSTRAINT_DEDUP,
                      f"duplicate constraint dropped: {res.sentence}",
                      class_name=class_name, arg=res.owner_arg)
            continue
        seen.add(key)
        out.append(res.schema or {})
    return out


def assemble(class_doc: ClassDoc, parsed_args: list[ArgParse],
             constraints: list[ConstraintResult],
             diags: Diagnostics | None = None,
             library: str = "") -> OperatorSchemas:
    """Assemble the hyperparameter schema document for one operator.

    Assembly is total; every constructor argument appears in properties
    and (when any exist) in required and relevantToOptimizer. An empty
    required list is omitted entirely: draft-04 requires it non-empty.
    """
    diags = diags if diags is not None else Diagnostics()
    main: dict = {"type": "object", "additionalProperties": False}
    names = [a.name for a in parsed_args]
    if names:
        main["required"] = list(names)
        main["relevantToOptimizer"] = list(names)
    main["properties"] = {a.name: a.fragment for a in parsed_args}
    doc = {"$schema": DRAFT4,
           "allOf": [main] + _constraint_fragments(constraints, diags,
                                                   class_doc.class_name)}
    provenance = {
        "types": {a.name: "parser" for a in parsed_args
                  if has_type_part(a.fragment)},
        "defaults": {a.name: "parser" for a in parsed_args
                     if "default" in a.fragment},
        "ranges": {},
        "distributions": {},
        "constraints": {
            "detected": len(constraints),
            "valid": sum(1 for c in constraints if c.kind == "lowered"),
            "grammar_extension": sum(1 for c in constraints if c.extension),
        },
    }
    return OperatorSchemas(class_name=class_doc.class_name, library=library,
                           hyperparams=doc, provenance=provenance)


# ---------------------------------------------------------------------------
# method input/output fragments

def _object_fragment(argdocs: list[ArgDoc], diags: Diagnostics,
                     class_name: str | None) -> dict:
    props: dict[str, dict] = {}
    for argdoc in argdocs:
        lowered = lower_argdoc(argdoc, diags, class_name)
        props[argdoc.name] = build_arg_fragment(
            argdoc.name, argdoc, lowered, None, diags, class_name)
    out: dict = {"type": "object"}
    if props:
        out["required"] = list(props)
    out["properties"] = props
    return out


def _method_sections(class_doc: ClassDoc, method: str):
    text = class_doc.method_docstrings.get(method)
    if not text:
        return None
    return split_sections(text)


def _method_io(class_doc: ClassDoc, method: str, diags: Diagnostics,
               ) -> tuple[dict | None, dict | None]:
    sections = _method_sections(class_doc, method)
    if sections is None:
        return None, None
    input_frag = None
    output_frag = None
    for section in sections:
        if section.title == "Parameters" and input_frag is None:
            argdocs = parse_parameters(section, diags, class_doc.class_name)
            input_frag = _object_fragment(argdocs, diags, class_doc.class_name)
        elif section.title == "Returns" and output_frag is None:
            rets = parse_parameters(section, diags, class_doc.class_name)
            if rets:
                lowered = lower_argdoc(rets[0], diags, class_doc.class_name)
                output_frag = build_arg_fragment(
                    rets[0].name, rets[0], lowered, None, diags,
                    class_doc.class_name)
    return input_frag, output_frag


# ---------------------------------------------------------------------------
# one-operator pipeline

def hyperparam_argdocs(class_doc: ClassDoc,
                       diags: Diagnostics | None = None) -> list[ArgDoc]:
    """Documented constructor arguments: the Parameters section of the
    class docstring, falling back to the one on ``__init__``."""
    diags = diags if diags is not None else Diagnostics()
    for text in (class_doc.class_docstring,
                 class_doc.method_docstrings.get("__init__")):
        if not text:
            continue
        for section in split_sections(text):
            if section.title == "Parameters":
                return parse_parameters(section, diags, class_doc.class_name)
    return []


def mine_operator(class_doc: ClassDoc, library: str = "",
                  triggers: tuple[str, ...] = DEFAULT_TRIGGERS,
                  diags: Diagnostics | None = None) -> OperatorSchemas:
    """Run the full docstring pipeline for one class: arguments, types,
    constraints, method I/O, assembled into an OperatorSchemas document."""
    diags = diags if diags is not None else Diagnostics()
    argdocs = hyperparam_argdocs(class_doc, diags)
    parsed_args = build_fragments(class_doc, argdocs, diags)
    props = {a.name: a.fragment for a in parsed_args}
    spine = {a.name for a in parsed_args}
    constraint_docs = [a.argdoc for a in parsed_args if a.argdoc is not None
                       and a.argdoc.name in spine]
    constraints = extract_constraints(constraint_docs, props, triggers, diags,
                                      class_doc.class_name)
    doc = assemble(class_doc, parsed_args, constraints, diags, library=library)
    doc.fit_input, fit_ret = _method_io(class_doc, "fit", diags)
    pred_in, pred_out = _method_io(class_doc, "predict", diags)
    if pred_in is None and pred_out is None:
        pred_in, pred_out = _method_io(class_doc, "transform", diags)
    doc.predict_or_transform_input = pred_in
    doc.output = pred_out if pred_out is not None else fit_ret
    return doc
