"""Machine-readable diagnostics collected while mining and refining.

Every stage reports problems as records instead of log prose so that a CI
job (or the evaluation harness) can assert exact counts per kind.
"""
from __future__ import annotations

from dataclasses import dataclass, field


# Record kinds, kept as plain strings so diagnostics files stay greppable.
MALFORMED_SOURCE = "malformed_source"
MALFORMED_SIGNATURE = "malformed_signature"
SKIPPED_PARAM = "skipped_param"
MALFORMED_ENTRY = "malformed_entry"
PARSE_FAILURE = "parse_failure"
IGNORED_TYPE = "ignored_type"
DEFAULT_MISMATCH = "default_mismatch"
SENTINEL_DEFAULT = "sentinel_default"
TODO_CONSTRAINT = "todo_constraint"
CONSTRAINT_DEDUP = "constraint_dedup"
CONFLICT = "conflict"
NONFINITE_DEFAULT = "nonfinite_default"
UNDOCUMENTED_ARG = "undocumented_arg"
DOC_ONLY_ARG = "doc_only_arg"


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    message: str
    class_name: str | None = None
    arg: str | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.class_name is not None:
            out["class_name"] = self.class_name
        if self.arg is not None:
            out["arg"] = self.arg
        out["message"] = self.message
        return out


@dataclass
class Diagnostics:
    """Append-only collector threaded through the pipeline."""

    records: list[Diagnostic] = field(default_factory=list)

    def add(self, kind: str, message: str, *, class_name: str | None = None,
            arg: str | None = None) -> None:
        self.records.append(Diagnostic(kind, message, class_name, arg))

    def count(self, kind: str | None = None) -> int:
        if kind is None:
            return len(self.records)
        return sum(1 for r in self.records if r.kind == kind)

    def of_kind(self, kind: str) -> list[Diagnostic]:
        return [r for r in self.records if r.kind == kind]

    def counts_by_kind(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in sorted(self.records, key=lambda r: r.kind):
            out[r.kind] = out.get(r.kind, 0) + 1
        return out

    def to_json(self) -> dict:
        ordered = sorted(
            self.records,
            key=lambda r: (r.class_name or "", r.arg or "", r.kind, r.message),
        )
        return {
            "counts": self.counts_by_kind(),
            "records": [r.to_json() for r in ordered],
        }
