"""Split numpydoc docstrings into sections and per-argument entries.

Only the small pre-parse subset needed downstream is implemented: section
headers (a title line underlined with dashes) and ``name : type`` entries.
Everything the HTML toolchain would do beyond that is out of scope.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import Diagnostics, MALFORMED_ENTRY

KNOWN_SECTIONS = ("Parameters", "Returns", "Attributes")

_UNDERLINE_RE = re.compile(r"^-{3,}\s*$")
_ENTRY_RE = re.compile(r"^([^\s:]+)\s*:\s?(.*)$")


@dataclass
class Section:
    title: str                      # Parameters | Returns | Attributes | Other
    lines: list[str] = field(default_factory=list)
    raw_title: str | None = None    # as written; None for the implicit summary


@dataclass(frozen=True)
class ArgDoc:
    name: str
    short_desc: str
    long_desc: str


def split_sections(docstring: str) -> list[Section]:
    """Cut a docstring at underlined section headers.

    Text before the first header becomes an implicit summary section with
    title Other. Unrecognized header titles are preserved as Other sections
    so nothing is lost. Degraded input simply yields a single Other section.
    """
    lines = docstring.expandtabs(4).split("\n")
    sections: list[Section] = [Section(title="Other")]
    i = 0
    while i < len(lines):
        line = lines[i]
        title = line.strip()
        if (title and i + 1 < len(lines)
                and _UNDERLINE_RE.match(lines[i + 1].strip())
                and lines[i + 1].strip()):
            kind = title if title in KNOWN_SECTIONS else "Other"
            sections.append(Section(title=kind, raw_title=title))
            i += 2
            continue
        sections[-1].lines.append(line)
        i += 1
    return sections


def _body_indent(lines: list[str]) -> int:
    for line in lines:
        if line.strip():
            return len(line) - len(line.lstrip())
    return 0


def parse_parameters(section: Section,
                     diags: Diagnostics | None = None,
                     class_name: str | None = None) -> list[ArgDoc]:
    """Turn a Parameters-like section into (name, short_desc, long_desc) docs.

    Entries start at the section indentation on a line of the form
    ``name : type stuff`` (a missing space before the colon is accepted).
    A trailing backslash joins the header with the next line before the
    colon split so wrapped type lines come out as one logical line. The
    indented block below the header is dedented and kept verbatim,
    bullets included, for the constraint miner.
    """
    diags = diags if diags is not None else Diagnostics()
    lines = section.lines
    indent = _body_indent(lines)
    args: list[ArgDoc] = []
    seen: set[str] = set()
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        this_indent = len(line) - len(line.lstrip())
        if this_indent != indent:
            # stray deeper text outside any entry; nothing to anchor it to
            diags.add(MALFORMED_ENTRY,
                      f"unattached text in {section.title} section: {line.strip()!r}",
                      class_name=class_name)
            i += 1
            continue
        header = line.strip()
        i += 1
        while header.endswith("\\") and i < len(lines):
            header = header[:-1].rstrip() + " " + lines[i].strip()
            i += 1
        m = _ENTRY_RE.match(header)
        body: list[str] = []
        while i < len(lines):
            nxt = lines[i]
            if nxt.strip() and (len(nxt) - len(nxt.lstrip())) <= indent:
                break
            body.append(nxt)
            i += 1
        if not m:
            diags.add(MALFORMED_ENTRY, f"entry without name/colon: {header!r}",
                      class_name=class_name)
            continue
        name, short_desc = m.group(1), m.group(2).strip()
        if name in seen:
            diags.add(MALFORMED_ENTRY, f"duplicate entry {name!r}",
                      class_name=class_name)
            continue
        seen.add(name)
        args.append(ArgDoc(name=name, short_desc=short_desc,
                           long_desc=_dedent_block(body)))
    return args


def _dedent_block(lines: list[str]) -> str:
    indents = [len(l) - len(l.lstrip()) for l in lines if l.strip()]
    if not indents:
        return ""
    cut = min(indents)
    out = [l[cut:].rstrip() if l.strip() else "" for l in lines]
    while out and not out[-1]:
        out.pop()
    while out and not out[0]:
        out.pop(0)
    return "\n".join(out)


def first_sentence(text: str) -> str:
    """First sentence of a description block, used as the schema description.

    A period ends the sentence when followed by whitespace or end of text;
    a semicolon ends it too and is rendered as a period, which matches how
    descriptions are conventionally shortened.
    """
    flat = " ".join(text.split())
    if not flat:
        return ""
    for i, c in enumerate(flat):
        if c == "." and (i + 1 == len(flat) or flat[i + 1] == " "):
            return flat[: i + 1]
        if c == ";":
            return flat[:i] + "."
    return flat
