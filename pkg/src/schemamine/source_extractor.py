"""Locate operator classes in Python source text and pull out their docstrings.

The scanner is purpose-built: it tracks strings, comments, brackets and
indentation, which is all that is needed to find top-level ``class``
statements, the ``def`` headers of the documented methods, and the leading
string literal of each block. Nothing is imported or executed, so it works
on source for any library version, including files the running interpreter
could not import.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import (
    Diagnostics,
    MALFORMED_SIGNATURE,
    MALFORMED_SOURCE,
    SKIPPED_PARAM,
)

DOC_METHODS = ("__init__", "fit", "predict", "transform")

_CLASS_RE = re.compile(r"^class\s+([A-Za-z_]\w*)")
_DEF_RE = re.compile(r"^(?:async\s+)?def\s+([A-Za-z_]\w*)\s*\(")
_STRING_PREFIX_RE = re.compile(r"^[rRbBuUfF]{0,3}")


class MalformedSignature(ValueError):
    """Raised when a parameter list has unbalanced brackets or quotes."""


@dataclass(frozen=True)
class Literal:
    """A literal default value as written in source.

    kind is one of number/string/boolean/none/other; ``other`` marks
    defaults that are not literal constants (calls, tuples, names) and
    carries only the verbatim source text.
    """

    kind: str
    value: object
    raw: str

    def render(self) -> str:
        """Re-render the decoded value as an equivalent source token."""
        if self.kind == "number":
            return repr(self.value)
        if self.kind == "string":
            return repr(self.value)
        if self.kind == "boolean":
            return "True" if self.value else "False"
        if self.kind == "none":
            return "None"
        return self.raw


UNPARSEABLE = "other"


@dataclass(frozen=True)
class SourceFile:
    path: str
    text: str

    @classmethod
    def from_path(cls, path: str | Path) -> "SourceFile":
        p = Path(path)
        return cls(path=str(path), text=p.read_text(encoding="utf-8"))


@dataclass
class ClassDoc:
    class_name: str
    class_docstring: str | None = None
    method_docstrings: dict[str, str | None] = field(default_factory=dict)
    ctor_defaults: dict[str, Literal | None] = field(default_factory=dict)


@dataclass
class _Line:
    indent: int
    text: str
    offset: int


def _logical_lines(text: str) -> tuple[list[_Line], list[int]]:
    """Split source into logical lines (joined over brackets, strings and
    backslash continuations). Returns the lines plus offsets of string
    literals that never terminate.
    """
    lines: list[_Line] = []
    bad_strings: list[int] = []
    i, n = 0, len(text)
    while i < n:
        # skip blank and comment-only physical lines
        j = i
        while j < n and text[j] in " \t":
            j += 1
        if j >= n:
            break
        if text[j] == "\n":
            i = j + 1
            continue
        if text[j] == "#":
            while j < n and text[j] != "\n":
                j += 1
            i = j + 1
            continue

        start = i
        indent = 0
        while i < n and text[i] in " \t":
            indent = indent + 1 if text[i] == " " else indent + 8 - indent % 8
            i += 1
        depth = 0
        quote: str | None = None
        quote_start = -1
        escaped = False
        while i < n:
            c = text[i]
            if quote is not None:
                if escaped:
                    escaped = False
                    i += 1
                elif c == "\\":
                    escaped = True
                    i += 1
                elif text.startswith(quote, i):
                    i += len(quote)
                    quote = None
                elif c == "\n" and len(quote) == 1:
                    # single-quoted string running past end of line
                    bad_strings.append(quote_start)
                    quote = None
                else:
                    i += 1
                continue
            if c == "#":
                while i < n and text[i] != "\n":
                    i += 1
                continue
            if c in "'\"":
                quote_start = i
                if text.startswith(c * 3, i):
                    quote = c * 3
                    i += 3
                else:
                    quote = c
                    i += 1
                continue
            if c in "([{":
                depth += 1
            elif c in ")]}":
                depth = max(0, depth - 1)
            elif c == "\\" and text.startswith("\\\n", i):
                i += 2
                continue
            elif c == "\n" and depth == 0:
                break
            i += 1
        if quote is not None:
            bad_strings.append(quote_start)
        lines.append(_Line(indent=indent, text=text[start:i], offset=start))
        i += 1
    return lines, bad_strings


def _scan_string(text: str) -> tuple[str, int, bool] | None:
    """Scan the string literal at the start of ``text`` (after lstrip).

    Returns (verbatim body, end offset just past the closing delimiter,
    closed flag), or None when text does not begin with a string literal.
    Prefixes (r, f, b, u) are skipped; the body is kept verbatim.
    """
    stripped = text.lstrip()
    pad = len(text) - len(stripped)
    m = _STRING_PREFIX_RE.match(stripped)
    rest = stripped[m.end():]
    if not rest or rest[0] not in "'\"":
        return None
    base = pad + m.end()
    q = rest[0]
    delim = q * 3 if rest.startswith(q * 3) else q
    body_start = len(delim)
    i = body_start
    escaped = False
    while i < len(rest):
        c = rest[i]
        if escaped:
            escaped = False
        elif c == "\\":
            escaped = True
        elif rest.startswith(delim, i):
            return rest[body_start:i], base + i + len(delim), True
        elif c == "\n" and len(delim) == 1:
            return rest[body_start:i], base + i, False
        i += 1
    # unterminated: take what we have (the caller already diagnosed it)
    return rest[body_start:], len(text), False


def _extract_string_literal(text: str) -> str | None:
    found = _scan_string(text)
    return found[0] if found else None


def _clean_docstring(body: str) -> str:
    """Strip common leading indentation, like the runtime does for
    ``__doc__`` display: first line as-is, remaining lines dedented."""
    lines = body.split("\n")
    first = lines[0].strip()
    rest = lines[1:]
    indents = [len(l) - len(l.lstrip()) for l in rest if l.strip()]
    cut = min(indents) if indents else 0
    out = [first] + [l[cut:].rstrip() if l.strip() else "" for l in rest]
    while out and not out[0]:
        out.pop(0)
    while out and not out[-1]:
        out.pop()
    return "\n".join(out)


def decode_literal(source: str) -> Literal:
    """Decode a default-value expression into a Literal without eval."""
    s = source.strip()
    if not s:
        return Literal(UNPARSEABLE, None, source)
    m = _STRING_PREFIX_RE.match(s)
    body = s[m.end():]
    prefix = m.group(0).lower()
    if body[:1] in "'\"" and "b" not in prefix and "f" not in prefix:
        found = _scan_string(s)
        if found is not None:
            inner, end, closed = found
            if closed and end == len(s):
                if "r" in prefix:
                    return Literal("string", inner, s)
                return Literal("string", _unescape(inner), s)
        return Literal(UNPARSEABLE, None, s)
    if s == "True":
        return Literal("boolean", True, s)
    if s == "False":
        return Literal("boolean", False, s)
    if s == "None":
        return Literal("none", None, s)
    try:
        return Literal("number", int(s, 0), s)
    except ValueError:
        pass
    try:
        f = float(s)
        if f == f and abs(f) != float("inf"):
            return Literal("number", f, s)
    except ValueError:
        pass
    return Literal(UNPARSEABLE, None, s)


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"',
            "0": "\0", "a": "\a", "b": "\b", "f": "\f", "v": "\v"}
_HEX_ESCAPES = {"x": 2, "u": 4, "U": 8}


def _unescape(s: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(s):
        c = s[i]
        if c == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
                continue
            if nxt == "\n":
                i += 2
                continue
            if nxt in _HEX_ESCAPES:
                width = _HEX_ESCAPES[nxt]
                digits = s[i + 2:i + 2 + width]
                if len(digits) == width:
                    try:
                        out.append(chr(int(digits, 16)))
                        i += 2 + width
                        continue
                    except (ValueError, OverflowError):
                        pass
        out.append(c)
        i += 1
    return "".join(out)


def _split_top_level(body: str, seps: str = ",") -> list[str]:
    """Split on separators that sit outside brackets and strings."""
    parts: list[str] = []
    depth = 0
    quote: str | None = None
    escaped = False
    cur: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if quote is not None:
            cur.append(c)
            if escaped:
                escaped = False
            elif c == "\\":
                escaped = True
            elif body.startswith(quote, i):
                cur.extend(quote[1:])
                i += len(quote)
                quote = None
                continue
            i += 1
            continue
        if c in "'\"":
            quote = c * 3 if body.startswith(c * 3, i) else c
            cur.append(body[i:i + len(quote)])
            i += len(quote)
            continue
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
            if depth < 0:
                raise MalformedSignature("unbalanced brackets in parameter list")
        if c in seps and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(c)
        i += 1
    if quote is not None or depth != 0:
        raise MalformedSignature("unbalanced brackets in parameter list")
    parts.append("".join(cur))
    return parts


def _find_top_level(s: str, ch: str) -> int:
    depth = 0
    quote: str | None = None
    escaped = False
    i = 0
    while i < len(s):
        c = s[i]
        if quote is not None:
            if escaped:
                escaped = False
            elif c == "\\":
                escaped = True
            elif s.startswith(quote, i):
                i += len(quote)
                quote = None
                continue
            i += 1
            continue
        if c in "'\"":
            quote = c * 3 if s.startswith(c * 3, i) else c
            i += len(quote)
            continue
        if c == ch and depth == 0:
            return i
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
        i += 1
    return -1


def parse_ctor_signature(def_line_block: str,
                         diags: Diagnostics | None = None,
                         class_name: str | None = None,
                         ) -> dict[str, Literal | None]:
    """Parse a parenthesized parameter list into name -> default Literal.

    ``self`` is dropped; bare ``*``, ``/``, ``*args``, ``**kwargs`` and
    ``...`` are skipped with a diagnostic. Defaults that are not literal
    constants map to an unparseable marker, never to a guessed value.
    """
    diags = diags if diags is not None else Diagnostics()
    text = def_line_block.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    out: dict[str, Literal | None] = {}
    for raw_piece in _split_top_level(text):
        piece = raw_piece.strip()
        if not piece:
            continue
        if piece == "self":
            continue
        if piece in ("*", "/", "...") or piece.startswith("*"):
            diags.add(SKIPPED_PARAM, f"skipped parameter {piece!r}",
                      class_name=class_name)
            continue
        default_src: str | None = None
        eq = _find_top_level(piece, "=")
        if eq >= 0:
            default_src = piece[eq + 1:]
            piece = piece[:eq]
        colon = _find_top_level(piece, ":")
        if colon >= 0:
            piece = piece[:colon]
        name = piece.strip()
        if not name.isidentifier():
            diags.add(SKIPPED_PARAM, f"unrecognized parameter {raw_piece.strip()!r}",
                      class_name=class_name)
            continue
        if name == "self":
            continue
        out[name] = decode_literal(default_src) if default_src is not None else None
    return out


def _method_block(lines: list[_Line], idx: int) -> tuple[str | None, int]:
    """Docstring of the def starting at lines[idx]; returns (docstring, end)."""
    header = lines[idx]
    # docstring on the same logical line, after the signature's colon
    _, close = _paren_span(header.text)
    if close >= 0:
        after = header.text[close + 1:]
        colon = _find_top_level(after, ":")
        if colon >= 0 and after[colon + 1:].strip():
            body = _extract_string_literal(after[colon + 1:])
            return (_clean_docstring(body) if body is not None else None), idx + 1
    end = idx + 1
    doc: str | None = None
    if end < len(lines) and lines[end].indent > header.indent:
        body = _extract_string_literal(lines[end].text)
        if body is not None:
            doc = _clean_docstring(body)
    while end < len(lines) and lines[end].indent > header.indent:
        end += 1
    return doc, end


def _paren_span(s: str) -> tuple[int, int]:
    """Span of the first top-level parenthesized group: (open, close) offsets,
    (-1, -1) when absent or unbalanced."""
    start = _find_top_level(s, "(")
    if start < 0:
        return -1, -1
    depth = 0
    quote: str | None = None
    escaped = False
    i = start
    while i < len(s):
        c = s[i]
        if quote is not None:
            if escaped:
                escaped = False
            elif c == "\\":
                escaped = True
            elif s.startswith(quote, i):
                i += len(quote)
                quote = None
                continue
            i += 1
            continue
        if c in "'\"":
            quote = c * 3 if s.startswith(c * 3, i) else c
            i += len(quote)
            continue
        if c in "([{":
            depth += 1
        elif c in ")]}":
            depth -= 1
            if depth == 0:
                return start, i
        i += 1
    return start, -1


def scan_source(src: SourceFile, diags: Diagnostics | None = None) -> list[ClassDoc]:
    """Extract one ClassDoc per top-level class statement.

    Scanning never executes code. Problems (unterminated strings, broken
    signatures) are reported per class and scanning continues.
    """
    diags = diags if diags is not None else Diagnostics()
    lines, bad_strings = _logical_lines(src.text)
    docs: list[ClassDoc] = []
    spans: list[tuple[int, int, ClassDoc]] = []

    i = 0
    while i < len(lines):
        line = lines[i]
        m = _CLASS_RE.match(line.text.lstrip())
        if line.indent != 0 or not m:
            i += 1
            continue
        doc = ClassDoc(class_name=m.group(1))
        start_offset = line.offset
        # docstring on the header line itself (`class A: "doc"`)
        after = line.text.lstrip()[m.end():]
        colon = _find_top_level(after, ":")
        inline_rest = after[colon + 1:].strip() if colon >= 0 else ""
        if inline_rest:
            body = _extract_string_literal(inline_rest)
            if body is not None:
                doc.class_docstring = _clean_docstring(body)
        i += 1
        body_first = True
        body_indent: int | None = None
        while i < len(lines) and lines[i].indent > 0:
            bline = lines[i]
            if body_indent is None:
                body_indent = bline.indent
            if body_first and bline.indent == body_indent:
                body = _extract_string_literal(bline.text)
                if body is not None and doc.class_docstring is None:
                    doc.class_docstring = _clean_docstring(body)
                body_first = False
            dm = _DEF_RE.match(bline.text.lstrip())
            if dm and bline.indent == body_indent:
                name = dm.group(1)
                if name in DOC_METHODS and name not in doc.method_docstrings:
                    mdoc, end = _method_block(lines, i)
                    doc.method_docstrings[name] = mdoc
                    if name == "__init__":
                        p_open, p_close = _paren_span(bline.text)
                        if p_open >= 0 and p_close > p_open:
                            sig = bline.text[p_open:p_close + 1]
                            try:
                                doc.ctor_defaults = parse_ctor_signature(
                                    sig, diags, class_name=doc.class_name)
                            except MalformedSignature as exc:
                                diags.add(MALFORMED_SIGNATURE, str(exc),
                                          class_name=doc.class_name)
                        else:
                            diags.add(MALFORMED_SIGNATURE,
                                      "could not find closing parenthesis",
                                      class_name=doc.class_name)
                    i = end
                    continue
            i += 1
        end_offset = lines[i].offset if i < len(lines) else len(src.text) + 1
        spans.append((start_offset, end_offset, doc))
        docs.append(doc)

    for offset in bad_strings:
        for lo, hi, doc in spans:
            if lo <= offset < hi:
                diags.add(MALFORMED_SOURCE,
                          f"unterminated string literal at offset {offset} in {src.path}",
                          class_name=doc.class_name)
                break
        else:
            diags.add(MALFORMED_SOURCE,
                      f"unterminated string literal at offset {offset} in {src.path}")
    return docs
