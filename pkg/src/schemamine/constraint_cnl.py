"""Mine inter-argument constraints from long descriptions.

Candidate sentences are flagged by trigger patterns (word ``only`` by
default), parsed with a small constraint grammar, and lowered to the
implication encoding: a two-branch ``anyOf`` of negated premise and
conclusion. Candidates the grammar cannot handle become TODO placeholder
fragments a human can fill in later, so every flagged sentence is
accounted for: flagged == lowered + todo.

Two sentence families are understood:

* ``[prefix] only <verb>? <when-word> <condition>`` — the owning argument
  matters only while the condition holds, so the negated premise pins the
  owner to its default value.
* ``[the] <values> <name>s? support(s) only <values> <name>s?`` — a
  grammar extension for the "X supports only Y" form. The premise negates
  membership of the named argument in the first value list; the conclusion
  constrains the trailing noun's argument when present, the owning
  argument otherwise, and as a last resort the unique sibling whose
  documented enum contains all conclusion values.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import Diagnostics, TODO_CONSTRAINT
from .source_extractor import Literal
from .type_cnl import Token, tokenize, _val_literal

DEFAULT_TRIGGERS = (
    r"(?i)\bonly\b",
    r"(?i)only used when",
    r"(?i)only supported by",
    r"(?i)support only",
)

GRAMMAR_EXTENSION = "support-only"

_ONLY_VERBS = ("used", "effective", "compatible", "significant",
               "available", "applies")
_WHEN_WORDS = ("when", "if", "with", "in", "for")
_COMPARE_PUNCT = ("==", "=", ">", "<", ">=", "<=")


@dataclass(frozen=True)
class CandidateSentence:
    owner_arg: str
    text: str
    matched_trigger: str


@dataclass(frozen=True)
class CompareAtom:
    name: str
    compare: str
    values: tuple[Literal, ...]


@dataclass(frozen=True)
class UsageAtom:
    """`the 'sag' solver is used` — values then the argument name."""
    values: tuple[Literal, ...]
    name: str


@dataclass(frozen=True)
class BoolCond:
    op: str                     # "and" | "or"
    left: "Cond"
    right: "Cond"


Cond = CompareAtom | UsageAtom | BoolCond


@dataclass(frozen=True)
class ConstraintAst:
    only_verb: str | None
    when_word: str
    cond: Cond


@dataclass(frozen=True)
class SupportOnlyAst:
    premise_name: str
    premise_values: tuple[Literal, ...]
    conclusion_values: tuple[Literal, ...]
    conclusion_name: str | None


@dataclass
class ConstraintResult:
    kind: str                   # "lowered" | "todo"
    owner_arg: str
    sentence: str
    schema: dict | None = None
    reason: str | None = None
    extension: bool = False


class ConstraintParseFailure(ValueError):
    pass


class UnlowerableConstraint(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# ---------------------------------------------------------------------------
# sentence extraction

_BULLET_RE = re.compile(r"^\s*[-*]\s+")


def split_sentences(text: str) -> list[str]:
    """Cut a long description into sentences.

    Bulleted lines start a new sentence. A period is a boundary only when
    followed by end of text or by whitespace and an uppercase letter or
    bullet, so decimals like 0.5 and names like e.g. sklearn.tree survive.
    """
    units: list[str] = []
    current: list[str] = []
    for line in text.split("\n"):
        if _BULLET_RE.match(line):
            if current:
                units.append(" ".join(current))
            current = [_BULLET_RE.sub("", line).strip()]
        elif line.strip():
            current.append(line.strip())
        else:
            if current:
                units.append(" ".join(current))
            current = []
    if current:
        units.append(" ".join(current))

    sentences: list[str] = []
    for unit in units:
        flat = " ".join(unit.split())
        start = 0
        i = 0
        while i < len(flat):
            if flat[i] == ".":
                j = i + 1
                while j < len(flat) and flat[j] == " ":
                    j += 1
                at_end = j >= len(flat)
                if at_end or (j > i + 1 and (flat[j].isupper() or flat[j] == "-")):
                    sentences.append(flat[start:i + 1].strip())
                    start = j
                    i = j
                    continue
            i += 1
        tail = flat[start:].strip()
        if tail:
            sentences.append(tail)
    return [s for s in sentences if s]


def flag_candidates(arg, triggers: tuple[str, ...] = DEFAULT_TRIGGERS,
                    ) -> list[CandidateSentence]:
    """Flag possible constraint sentences in an argument's long description."""
    out: list[CandidateSentence] = []
    for sentence in split_sentences(arg.long_desc):
        for pattern in triggers:
            if re.search(pattern, sentence):
                out.append(CandidateSentence(arg.name, sentence, pattern))
                break
    return out


# ---------------------------------------------------------------------------
# parsing

def _is_word(toks, pos, *texts) -> bool:
    t = toks[pos] if pos < len(toks) else None
    return t is not None and t.kind == "WORD" and t.text.lower() in texts


def _word_at(toks, pos) -> Token | None:
    t = toks[pos] if pos < len(toks) else None
    return t if t is not None and t.kind == "WORD" else None


def _is_val(toks, pos) -> bool:
    t = toks[pos] if pos < len(toks) else None
    return t is not None and t.kind in ("QUOTED", "NUMBER", "WORD")


def _parse_valseq(toks, pos) -> tuple[tuple[Literal, ...], int] | None:
    """`val ((, val)* ,? (and|or) val)?` — a list of one or more values.

    A candidate value followed by a comparison operator is left alone: in
    ``a=1 and b=2`` the ``and`` chains two conditions rather than listing
    the values 1 and b.
    """
    if not _is_val(toks, pos):
        return None
    values = [_val_literal(toks[pos])]
    pos += 1
    while toks[pos:pos + 1] and toks[pos].kind == "PUNCT" and toks[pos].text == "," \
            and _is_val(toks, pos + 1) \
            and not _is_word(toks, pos + 1, "and", "or") \
            and not _parse_compare(toks, pos + 2):
        values.append(_val_literal(toks[pos + 1]))
        pos += 2
    save = pos
    if toks[pos:pos + 1] and toks[pos].kind == "PUNCT" and toks[pos].text == ",":
        pos += 1
    if _is_word(toks, pos, "and", "or") and _is_val(toks, pos + 1) \
            and not _parse_compare(toks, pos + 2):
        values.append(_val_literal(toks[pos + 1]))
        pos += 2
    else:
        pos = save
    return tuple(values), pos


def _parse_compare(toks, pos) -> tuple[str, int] | None:
    t = toks[pos] if pos < len(toks) else None
    if t is None:
        return None
    if t.kind == "PUNCT" and t.text in _COMPARE_PUNCT:
        return t.text, pos + 1
    if _is_word(toks, pos, "is"):
        if _is_word(toks, pos + 1, "set") and _is_word(toks, pos + 2, "to"):
            return "is set to", pos + 3
        return "is", pos + 1
    return None


def _parse_atom(toks, pos) -> tuple[Cond, int] | None:
    # NAME compare seq
    name_tok = _word_at(toks, pos)
    if name_tok is not None:
        r = _parse_compare(toks, pos + 1)
        if r:
            compare, p = r
            rs = _parse_valseq(toks, p)
            if rs:
                values, p = rs
                return CompareAtom(name_tok.text, compare, values), p
    # "the"? seq NAME ("is used")?
    p = pos
    if _is_word(toks, p, "the"):
        p += 1
    rs = _parse_valseq(toks, p)
    if rs:
        values, p = rs
        name_tok = _word_at(toks, p)
        if name_tok is not None:
            p += 1
            if _is_word(toks, p, "is") and _is_word(toks, p + 1, "used"):
                p += 2
            return UsageAtom(values, name_tok.text), p
    return None


def _parse_cond(toks, pos) -> tuple[Cond, int] | None:
    r = _parse_atom(toks, pos)
    if not r:
        return None
    cond, pos = r
    while _is_word(toks, pos, "and", "or"):
        op = toks[pos].text.lower()
        r = _parse_atom(toks, pos + 1)
        if not r:
            break
        cond = BoolCond(op, cond, r[0])
        pos = r[1]
    return cond, pos


def _strip_sentence_punct(toks: list[Token]) -> list[Token]:
    while toks and toks[-1].kind == "PUNCT" and toks[-1].text in (".", ","):
        toks = toks[:-1]
    return toks


def _parse_fig_grammar(toks: list[Token]) -> ConstraintAst | None:
    """`only <verb>? <when> <cond>`, anchored at the first "only"."""
    starts = [i for i, t in enumerate(toks)
              if t.kind == "WORD" and t.text.lower() == "only"]
    for start in starts:
        pos = start + 1
        verb = None
        if _is_word(toks, pos, *_ONLY_VERBS):
            verb = toks[pos].text.lower()
            pos += 1
        if not _is_word(toks, pos, *_WHEN_WORDS):
            continue
        when_word = toks[pos].text.lower()
        r = _parse_cond(toks, pos + 1)
        if r and r[1] == len(toks):
            return ConstraintAst(verb, when_word, r[0])
    return None


def _parse_support_only(toks: list[Token]) -> SupportOnlyAst | None:
    pos = 0
    if _is_word(toks, pos, "the"):
        pos += 1
    premise_name: str | None = None
    premise_values: tuple[Literal, ...] | None = None
    # NAME-first: `Solvers 'sag' and 'lbfgs' support only ...`
    name_tok = _word_at(toks, pos)
    if name_tok is not None:
        r = _parse_valseq(toks, pos + 1)
        if r and _is_word(toks, r[1], "support", "supports"):
            premise_name, (premise_values, pos) = name_tok.text, r
    # seq-first: `the 'sag' and 'lbfgs' solvers support only ...`
    if premise_name is None:
        r = _parse_valseq(toks, pos)
        if not r:
            return None
        values, p = r
        name_tok = _word_at(toks, p)
        if name_tok is None:
            return None
        premise_name, premise_values, pos = name_tok.text, values, p + 1
    if not _is_word(toks, pos, "support", "supports"):
        return None
    pos += 1
    if not _is_word(toks, pos, "only"):
        return None
    r = _parse_valseq(toks, pos + 1)
    if not r:
        return None
    conclusion_values, pos = r
    conclusion_name = None
    tail = _word_at(toks, pos)
    if tail is not None:
        conclusion_name = tail.text
        pos += 1
    if pos != len(toks):
        return None
    return SupportOnlyAst(premise_name, premise_values,
                          conclusion_values, conclusion_name)


def parse_constraint(candidate: CandidateSentence,
                     ) -> ConstraintAst | SupportOnlyAst:
    """Parse a flagged sentence; raise ConstraintParseFailure on a miss."""
    toks = _strip_sentence_punct(tokenize(candidate.text))
    if not toks:
        raise ConstraintParseFailure("empty sentence")
    ast = _parse_fig_grammar(toks)
    if ast is not None:
        return ast
    ext = _parse_support_only(toks)
    if ext is not None:
        return ext
    raise ConstraintParseFailure(
        f"sentence does not match the constraint grammar: {candidate.text!r}")


# ---------------------------------------------------------------------------
# lowering

def _resolve_arg(word: str, known_args: list[str]) -> str | None:
    """Map a sentence word to an argument name, tolerating case and a
    plural -s."""
    lowered = word.lower()
    for cand in (lowered, lowered[:-1] if lowered.endswith("s") else None):
        if cand is None:
            continue
        for arg in known_args:
            if arg.lower() == cand:
                return arg
    return None


def _enum_branch(name: str, values: tuple[Literal, ...]) -> dict:
    return {"type": "object",
            "properties": {name: {"enum": [v.value for v in values]}}}


def _numeric_bound(name: str, compare: str, values: tuple[Literal, ...]) -> dict:
    if len(values) != 1 or values[0].kind != "number":
        raise UnlowerableConstraint("unlowered-compare")
    v = values[0].value
    body: dict
    if compare == ">":
        body = {"minimum": v, "exclusiveMinimum": True}
    elif compare == ">=":
        body = {"minimum": v}
    elif compare == "<":
        body = {"maximum": v, "exclusiveMaximum": True}
    else:
        body = {"maximum": v}
    return {"type": "object", "properties": {name: body}}


def _lower_cond(cond: Cond, known_args: list[str]) -> dict:
    if isinstance(cond, CompareAtom):
        name = _resolve_arg(cond.name, known_args)
        if name is None:
            raise UnlowerableConstraint("unknown-name")
        if cond.compare in ("=", "==", "is", "is set to"):
            return _enum_branch(name, cond.values)
        return _numeric_bound(name, cond.compare, cond.values)
    if isinstance(cond, UsageAtom):
        name = _resolve_arg(cond.name, known_args)
        if name is None:
            raise UnlowerableConstraint("unknown-name")
        return _enum_branch(name, cond.values)
    if isinstance(cond, BoolCond):
        parts = [_lower_cond(cond.left, known_args),
                 _lower_cond(cond.right, known_args)]
        key = "allOf" if cond.op == "and" else "anyOf"
        return {"type": "object", key: parts}
    raise UnlowerableConstraint("unknown-cond")


def _strip_quotes(text: str) -> str:
    return text.replace("'", "").replace('"', "")


def lower_constraint(owner: str, owner_default: object,
                     ast: ConstraintAst | SupportOnlyAst,
                     properties: dict[str, dict]) -> dict:
    """Lower a parsed constraint to `{description, anyOf: [¬premise, conclusion]}`.

    properties maps every documented argument to its (raw) schema fragment;
    it supplies the known-name check and the enum lookup used to resolve
    the conclusion argument of support-only sentences.
    """
    known = list(properties.keys())
    if isinstance(ast, ConstraintAst):
        if owner_default is _MISSING:
            raise UnlowerableConstraint("owner-default-unavailable")
        premise = {"type": "object",
                   "properties": {owner: {"enum": [owner_default]}}}
        conclusion = _lower_cond(ast.cond, known)
        return {"anyOf": [premise, conclusion]}

    premise_arg = _resolve_arg(ast.premise_name, known)
    if premise_arg is None:
        raise UnlowerableConstraint("unknown-name")
    conclusion_arg: str | None = None
    if ast.conclusion_name is not None:
        conclusion_arg = _resolve_arg(ast.conclusion_name, known)
    if conclusion_arg is None and owner != premise_arg:
        conclusion_arg = owner
    if conclusion_arg is None:
        conclusion_arg = _unique_enum_owner(
            ast.conclusion_values, properties, exclude=premise_arg)
    if conclusion_arg is None:
        raise UnlowerableConstraint("ambiguous-conclusion")
    premise = {"type": "object",
               "properties": {premise_arg: {
                   "not": {"enum": [v.value for v in ast.premise_values]}}}}
    conclusion = _enum_branch(conclusion_arg, ast.conclusion_values)
    return {"anyOf": [premise, conclusion]}


_MISSING = object()


def _unique_enum_owner(values: tuple[Literal, ...], properties: dict[str, dict],
                       exclude: str) -> str | None:
    wanted = [v.value for v in values]
    hits = []
    for arg, frag in properties.items():
        if arg == exclude:
            continue
        enum = frag.get("enum")
        if enum and all(any(w == e for e in enum) for w in wanted):
            hits.append(arg)
    return hits[0] if len(hits) == 1 else None


# ---------------------------------------------------------------------------
# orchestration

def extract_constraints(argdocs, properties: dict[str, dict],
                        triggers: tuple[str, ...] = DEFAULT_TRIGGERS,
                        diags: Diagnostics | None = None,
                        class_name: str | None = None,
                        ) -> list[ConstraintResult]:
    """Flag, parse, and lower constraints for every documented argument.

    Every flagged candidate yields exactly one result, lowered or todo.
    """
    diags = diags if diags is not None else Diagnostics()
    results: list[ConstraintResult] = []
    for arg in argdocs:
        for cand in flag_candidates(arg, triggers):
            desc = _strip_quotes(cand.text)
            try:
                ast = parse_constraint(cand)
                owner_default = properties.get(arg.name, {}).get("default", _MISSING)
                schema = lower_constraint(arg.name, owner_default, ast, properties)
                results.append(ConstraintResult(
                    kind="lowered", owner_arg=arg.name, sentence=cand.text,
                    schema={"description": desc, **schema},
                    extension=isinstance(ast, SupportOnlyAst)))
            except (ConstraintParseFailure, UnlowerableConstraint) as exc:
                reason = getattr(exc, "reason", "parse-failure")
                diags.add(TODO_CONSTRAINT, f"{reason}: {cand.text}",
                          class_name=class_name, arg=arg.name)
                results.append(ConstraintResult(
                    kind="todo", owner_arg=arg.name, sentence=cand.text,
                    reason=reason))
    return results
