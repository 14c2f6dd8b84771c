"""Parse the controlled type language used on numpydoc ``name : ...`` lines.

A short description line such as::

    str, {'linear', 'sag', 'lbfgs'}, optional (default='linear').

is lexed into noise-free tokens and parsed by recursive descent with
backtracking into (type expression, optional flag, default value). The
grammar covers primitive type words and their synonyms, object and array
forms with shape annotations, three enum spellings (brace list, a
str-prefixed value list, pipe list) and four default spellings
(``default=v``, ``(default: v)``, ``v by default``, ``or v (default)``).
Inter-part commas are treated as optional everywhere. When alternatives
overlap the longest match wins and ties go to the earliest alternative,
so ``str, {'a', 'b'}`` folds the ``str`` prefix into a single enum
instead of producing a union.

Lines the grammar cannot account for raise :class:`ParseFailure`; callers
record the miss instead of guessing a schema.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .source_extractor import Literal

# ---------------------------------------------------------------------------
# lexing


@dataclass(frozen=True)
class Token:
    kind: str               # WORD | NUMBER | PUNCT | QUOTED
    text: str
    span: tuple[int, int]


_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:[.\-][A-Za-z0-9_]+)*")
_MULTI_PUNCT = ("==", ">=", "<=")
_SINGLE_PUNCT = set("{}()[],:=|<>.")


def tokenize(short_desc: str) -> list[Token]:
    """Lex a description line, filtering noise.

    Quote characters delimit QUOTED tokens and are stripped from the
    value; lone backslashes are dropped; whitespace only separates.
    Anything unrecognized becomes a one-character WORD so lexing is total.
    """
    out: list[Token] = []
    i, n = 0, len(short_desc)
    while i < n:
        c = short_desc[i]
        if c.isspace():
            i += 1
            continue
        if c == "\\":
            i += 1
            continue
        if c in "'\"":
            end = short_desc.find(c, i + 1)
            if end < 0:
                out.append(Token("QUOTED", short_desc[i + 1:], (i, n)))
                break
            out.append(Token("QUOTED", short_desc[i + 1:end], (i, end + 1)))
            i = end + 1
            continue
        m = _NUMBER_RE.match(short_desc, i)
        if m and (c.isdigit() or c == "." or
                  (c in "+-" and m.end() > i + 1)):
            out.append(Token("NUMBER", m.group(0), (i, m.end())))
            i = m.end()
            continue
        m = _WORD_RE.match(short_desc, i)
        if m:
            out.append(Token("WORD", m.group(0), (i, m.end())))
            i = m.end()
            continue
        two = short_desc[i:i + 2]
        if two in _MULTI_PUNCT:
            out.append(Token("PUNCT", two, (i, i + 2)))
            i += 2
            continue
        if c in _SINGLE_PUNCT:
            out.append(Token("PUNCT", c, (i, i + 1)))
            i += 1
            continue
        out.append(Token("WORD", c, (i, i + 1)))
        i += 1
    return out


# ---------------------------------------------------------------------------
# type expressions


@dataclass(frozen=True)
class Prim:
    kind: str   # integer number boolean string none ignored callable dict type


@dataclass(frozen=True)
class Obj:
    label: str = "object"


@dataclass(frozen=True)
class Shape:
    dims: tuple[object, ...]


@dataclass(frozen=True)
class ArrayType:
    atype: tuple[str, ...]
    shape: Shape | None = None


@dataclass(frozen=True)
class EnumType:
    values: tuple[Literal, ...]


@dataclass(frozen=True)
class AnyOf:
    members: tuple["TypeExpr", ...]


TypeExpr = Prim | Obj | ArrayType | EnumType | AnyOf


@dataclass(frozen=True)
class ParsedShortDesc:
    types: TypeExpr
    optional_flag: bool = False
    default: Literal | None = None


class ParseFailure(ValueError):
    """A short description the grammar does not cover.

    consumed is the number of tokens in the longest successful prefix;
    span is the character span of the offending token when there is one.
    """

    def __init__(self, message: str, consumed: int, span: tuple[int, int] | None):
        super().__init__(message)
        self.consumed = consumed
        self.span = span


_PRIM_WORDS = (
    ("int", "integer"), ("integer", "integer"),
    ("float", "number"), ("double", "number"),
    ("boolean", "boolean"), ("bool", "boolean"),
    ("string", "string"), ("str", "string"),
    ("None", "none"), ("Ignored", "ignored"),
    ("callable", "callable"), ("dict", "dict"), ("type", "type"),
)
_ATYPE_TWO_WORD = (("numpy", "array"), ("sparse", "matrix"), ("scipy", "sparse"))
_ATYPE_ONE_WORD = ("list", "array", "tuple", "array_like", "array-like",
                   "scipy.sparse")

_Result = tuple[object, int]


def _tok(toks: list[Token], pos: int) -> Token | None:
    return toks[pos] if pos < len(toks) else None


def _is_word(toks, pos, *texts, ci=False) -> bool:
    t = _tok(toks, pos)
    if t is None or t.kind != "WORD":
        return False
    return (t.text.lower() in tuple(x.lower() for x in texts)) if ci \
        else (t.text in texts)


def _is_punct(toks, pos, *texts) -> bool:
    t = _tok(toks, pos)
    return t is not None and t.kind == "PUNCT" and t.text in texts


def _val_literal(tok: Token) -> Literal:
    if tok.kind == "QUOTED":
        return Literal("string", tok.text, tok.text)
    if tok.kind == "NUMBER":
        return _number_literal(tok.text)
    if tok.text == "None":
        return Literal("none", None, tok.text)
    if tok.text == "True":
        return Literal("boolean", True, tok.text)
    if tok.text == "False":
        return Literal("boolean", False, tok.text)
    return Literal("string", tok.text, tok.text)


def _number_literal(text: str) -> Literal:
    try:
        if re.fullmatch(r"[+-]?\d+", text):
            return Literal("number", int(text), text)
        f = float(text)
        if f != f or abs(f) == float("inf"):
            return Literal("other", None, text)
        return Literal("number", f, text)
    except ValueError:
        return Literal("other", None, text)


def _is_val(toks, pos) -> bool:
    t = _tok(toks, pos)
    return t is not None and t.kind in ("QUOTED", "NUMBER", "WORD")


# --- enum ------------------------------------------------------------------

def _parse_enum(toks, pos) -> _Result | None:
    for fn in (_parse_enum_braces, _parse_enum_str_prefix, _parse_enum_pipes):
        r = fn(toks, pos)
        if r:
            return r
    return None


def _parse_enum_braces(toks, pos) -> _Result | None:
    if not _is_punct(toks, pos, "{"):
        return None
    pos += 1
    values: list[Literal] = []
    while not _is_punct(toks, pos, "}"):
        if values:
            if _is_punct(toks, pos, ","):
                pos += 1
            if _is_word(toks, pos, "or", ci=True):
                pos += 1
        if _is_word(toks, pos, "an", "a", ci=True) and _is_val(toks, pos + 1):
            pos += 1
        if not _is_val(toks, pos) or _is_punct(toks, pos, "}"):
            return None
        values.append(_val_literal(toks[pos]))
        pos += 1
    if not values:
        return None
    return EnumType(tuple(values)), pos + 1


def _parse_enum_str_prefix(toks, pos) -> _Result | None:
    if not _is_word(toks, pos, "string", "str"):
        return None
    pos += 1
    if _is_punct(toks, pos, ","):
        pos += 1
    r = _parse_enum_braces(toks, pos) or _parse_enum_pipes(toks, pos) \
        or _parse_quoted_list(toks, pos)
    return r


def _parse_quoted_list(toks, pos) -> _Result | None:
    t = _tok(toks, pos)
    if t is None or t.kind != "QUOTED":
        return None
    values = [_val_literal(t)]
    pos += 1
    while True:
        save = pos
        if _is_punct(toks, pos, ","):
            pos += 1
        if _is_word(toks, pos, "or", ci=True):
            pos += 1
        t = _tok(toks, pos)
        if pos != save and t is not None and t.kind == "QUOTED":
            values.append(_val_literal(t))
            pos += 1
        else:
            pos = save
            break
    return EnumType(tuple(values)), pos


def _parse_enum_pipes(toks, pos) -> _Result | None:
    bracketed = _is_punct(toks, pos, "[")
    if bracketed:
        pos += 1
    if not _is_val(toks, pos):
        return None
    values = [_val_literal(toks[pos])]
    pos += 1
    pipes = 0
    while _is_punct(toks, pos, "|") and _is_val(toks, pos + 1):
        values.append(_val_literal(toks[pos + 1]))
        pos += 2
        pipes += 1
    if pipes == 0:
        return None
    if bracketed:
        if not _is_punct(toks, pos, "]"):
            return None
        pos += 1
    return EnumType(tuple(values)), pos


# --- arrays ----------------------------------------------------------------

def _parse_atype_base(toks, pos) -> tuple[list[str], int] | None:
    for first, second in _ATYPE_TWO_WORD:
        if _is_word(toks, pos, first) and _is_word(toks, pos + 1, second):
            return [f"{first} {second}"], pos + 2
    if _is_word(toks, pos, *_ATYPE_ONE_WORD):
        return [toks[pos].text], pos + 1
    return None


def _parse_atype(toks, pos) -> tuple[list[str], int] | None:
    braced = _is_punct(toks, pos, "{")
    if braced:
        pos += 1
    r = _parse_atype_base(toks, pos)
    if not r:
        return None
    kinds, pos = r
    while True:
        save = pos
        if _is_punct(toks, pos, ","):
            pos += 1
        elif _is_word(toks, pos, "or", ci=True):
            pos += 1
        else:
            break
        nxt = _parse_atype_base(toks, pos)
        if not nxt:
            pos = save
            break
        kinds.extend(nxt[0])
        pos = nxt[1]
    if braced:
        if not _is_punct(toks, pos, "}"):
            return None
        pos += 1
    return kinds, pos


def _parse_vtuple(toks, pos) -> tuple[tuple[object, ...], int] | None:
    if _is_word(toks, pos, "None"):
        return (None,), pos + 1
    if _is_punct(toks, pos, "("):
        close = ")"
    elif _is_punct(toks, pos, "["):
        close = "]"
    else:
        return None
    pos += 1
    dims: list[object] = []
    if not _is_val(toks, pos):
        return None
    dims.append(_dim_value(toks[pos]))
    pos += 1
    while _is_punct(toks, pos, ","):
        pos += 1
        if _is_val(toks, pos):
            dims.append(_dim_value(toks[pos]))
            pos += 1
        else:
            break   # trailing comma, e.g. (n_samples,)
    if not _is_punct(toks, pos, close):
        return None
    return tuple(dims), pos + 1


def _dim_value(tok: Token) -> object:
    if tok.kind == "NUMBER":
        lit = _number_literal(tok.text)
        return lit.value if lit.kind == "number" else tok.text
    if tok.text == "None":
        return None
    return tok.text


def _parse_shape(toks, pos) -> tuple[Shape, int] | None:
    if _is_punct(toks, pos, ","):
        pos += 1
    if _is_word(toks, pos, "of", ci=True):
        pos += 1
    if _is_word(toks, pos, "shape", "size", ci=True):
        pos += 1
    if _is_punct(toks, pos, "="):
        pos += 1
    r = _parse_vtuple(toks, pos)
    if not r:
        return None
    dims, pos = r
    # alternative shapes ("or (n, m)") are consumed; the first one is kept
    while _is_word(toks, pos, "or", ci=True):
        r2 = _parse_vtuple(toks, pos + 1)
        if not r2:
            break
        pos = r2[1]
    return Shape(dims), pos


def _parse_array(toks, pos) -> _Result | None:
    r = _parse_atype(toks, pos)
    if not r:
        return None
    kinds, pos = r
    shape = None
    rs = _parse_shape(toks, pos)
    if rs:
        shape, pos = rs
    return ArrayType(tuple(kinds), shape), pos


# --- obj -------------------------------------------------------------------

def _parse_obj(toks, pos) -> _Result | None:
    if _is_word(toks, pos, "returns") and _is_word(toks, pos + 1, "an") \
            and _is_word(toks, pos + 2, "instance") \
            and _is_word(toks, pos + 3, "of") and _is_word(toks, pos + 4, "self"):
        return Obj("self"), pos + 5
    if _is_word(toks, pos, "object"):
        return Obj("object"), pos + 1
    t = _tok(toks, pos)
    if t is not None and t.kind == "WORD" and _is_word(toks, pos + 1, "instance"):
        return Obj(f"{t.text} instance"), pos + 2
    return None


# --- type / seq ------------------------------------------------------------

def _parse_prim(toks, pos) -> _Result | None:
    t = _tok(toks, pos)
    if t is None or t.kind != "WORD":
        return None
    for word, kind in _PRIM_WORDS:
        if t.text == word:
            return Prim(kind), pos + 1
    return None


def _type_alternatives(toks, pos) -> list[_Result]:
    """Successful type readings at ``pos``, longest first; ties keep the
    order the alternatives are written in (primitives, obj, array, enum)."""
    results: list[_Result] = []
    for fn in (_parse_prim, _parse_obj, _parse_array, _parse_enum):
        r = fn(toks, pos)
        if r:
            results.append(r)
    results.sort(key=lambda r: -r[1])
    return results


def _gen_seq(toks, pos, budget: list[int]):
    """Yield (type list, end) readings of the ``(type ,?)+ (or type)?``
    sequence, preferring longer type matches and longer sequences."""
    for expr, p in _type_alternatives(toks, pos):
        if budget[0] <= 0:
            return
        budget[0] -= 1
        yield from _gen_seq_rest(toks, p, [expr], budget)


def _gen_seq_rest(toks, pos, items, budget: list[int]):
    if budget[0] <= 0:
        return
    # keep extending with ","? type
    p = pos + 1 if _is_punct(toks, pos, ",") else pos
    for expr, p2 in _type_alternatives(toks, p):
        if budget[0] <= 0:
            return
        budget[0] -= 1
        yield from _gen_seq_rest(toks, p2, items + [expr], budget)
    # "or" tail, optionally preceded by a comma
    p = pos + 1 if _is_punct(toks, pos, ",") else pos
    if _is_word(toks, p, "or", ci=True):
        for expr, p2 in _type_alternatives(toks, p + 1):
            if budget[0] <= 0:
                return
            budget[0] -= 1
            yield items + [expr], p2
    yield items, pos


def _parse_optional(toks, pos) -> tuple[bool, int]:
    save = pos
    if _is_punct(toks, pos, ","):
        pos += 1
    if _is_word(toks, pos, "optional", ci=True):
        return True, pos + 1
    return False, save


def _parse_default(toks, pos) -> tuple[Literal | None, int]:
    save = pos
    if _is_punct(toks, pos, ","):
        pos += 1
    # default = v  /  default: v  /  default v
    if _is_word(toks, pos, "default", ci=True):
        p = pos + 1
        if _is_punct(toks, p, "=", ":"):
            p += 1
        if _is_val(toks, p):
            return _val_literal(toks[p]), p + 1
    # ( default = v )
    if _is_punct(toks, pos, "(") and _is_word(toks, pos + 1, "default", ci=True):
        p = pos + 2
        if _is_punct(toks, p, "=", ":"):
            p += 1
        if _is_val(toks, p) and _is_punct(toks, p + 1, ")"):
            return _val_literal(toks[p]), p + 2
    # v by default
    if _is_val(toks, pos) and _is_word(toks, pos + 1, "by", ci=True) \
            and _is_word(toks, pos + 2, "default", ci=True):
        return _val_literal(toks[pos]), pos + 3
    # or v (default)
    if _is_word(toks, pos, "or", ci=True) and _is_val(toks, pos + 1) \
            and _is_punct(toks, pos + 2, "(") \
            and _is_word(toks, pos + 3, "default", ci=True) \
            and _is_punct(toks, pos + 4, ")"):
        return _val_literal(toks[pos + 1]), pos + 5
    return None, save


_BACKTRACK_BUDGET = 2000


def parse_short_desc(tokens: list[Token]) -> ParsedShortDesc:
    """Parse a tokenized short description; raise ParseFailure on a miss.

    Backtracking over sequence readings is bounded: pathological inputs
    exhaust the budget and fail instead of running away.
    """
    if not tokens:
        raise ParseFailure("empty short description", 0, None)
    budget = [_BACKTRACK_BUDGET]
    furthest = 0
    for items, pos in _gen_seq(tokens, 0, budget):
        optional_flag, pos = _parse_optional(tokens, pos)
        default, pos = _parse_default(tokens, pos)
        if _is_punct(tokens, pos, ".", ","):
            pos += 1
        furthest = max(furthest, pos)
        if pos == len(tokens):
            types: TypeExpr = items[0] if len(items) == 1 else AnyOf(tuple(items))
            return ParsedShortDesc(types=types, optional_flag=optional_flag,
                                   default=default)
    span = tokens[furthest].span if furthest < len(tokens) else None
    raise ParseFailure(
        f"no full reading of the line; longest prefix ends at token {furthest}",
        furthest, span)


# ---------------------------------------------------------------------------
# lowering to JSON Schema fragments

_PRIM_JSON = {
    "integer": {"type": "integer"},
    "number": {"type": "number"},
    "boolean": {"type": "boolean"},
    "string": {"type": "string"},
    "dict": {"type": "object"},
}


def _lower_expr(expr: TypeExpr) -> dict:
    if isinstance(expr, Prim):
        if expr.kind in _PRIM_JSON:
            return dict(_PRIM_JSON[expr.kind])
        if expr.kind in ("none", "ignored"):
            return {"enum": [None]}
        # callable / type: no JSON counterpart, kept as extension metadata
        return {"laleType": expr.kind}
    if isinstance(expr, Obj):
        return {"type": "object"}
    if isinstance(expr, EnumType):
        return {"enum": [v.value for v in expr.values]}
    if isinstance(expr, ArrayType):
        out: dict = {"type": "array"}
        hint: dict = {"atype": list(expr.atype)}
        if expr.shape is not None:
            hint["shape"] = list(expr.shape.dims)
        out["laleType"] = hint
        return out
    if isinstance(expr, AnyOf):
        return {"anyOf": [_lower_expr(m) for m in expr.members]}
    raise TypeError(f"unknown type expression {expr!r}")


def lower_type(parsed: ParsedShortDesc) -> dict:
    """Lower a parsed short description to a JSON Schema fragment.

    The optional flag is intentionally not reflected in the schema: every
    constructor argument has a default, so all of them stay required.
    """
    frag = _lower_expr(parsed.types)
    if parsed.default is not None and parsed.default.kind != "other":
        frag["default"] = parsed.default.value
    return frag


def fragment_accepts(fragment: dict, value: object) -> bool:
    """Check a default value against the fragment's own type constraints."""
    if "enum" in fragment:
        return any(_scalar_eq(value, v) for v in fragment["enum"])
    if "anyOf" in fragment:
        return any(fragment_accepts(m, value) for m in fragment["anyOf"])
    t = fragment.get("type")
    if t is None:
        return True
    if t == "number":
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if t == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if t == "boolean":
        return isinstance(value, bool)
    if t == "string":
        return isinstance(value, str)
    if t == "array":
        return isinstance(value, (list, tuple))
    if t == "object":
        return True
    return True


def _scalar_eq(a: object, b: object) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return float(a) == float(b)
    return a == b
