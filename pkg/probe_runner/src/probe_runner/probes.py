"""Live probes: default introspection, bad-value exception harvesting,
candidate sampling, and bounds testing.

Every trial constructs a fresh instance and fits it on the plan's
synthetic dataset under a wall-clock limit. Failures are data, not
errors: exceptions become rejected verdicts or notes, and a trial that
exceeds its time budget is recorded with the distinct verdict "timeout"
(neither accepted nor rejected, and excluded from determinism checks).
"""
from __future__ import annotations

import importlib
import re
import signal
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field

from .dataset import make_dataset

BAD_VALUE_MARKER = "zzz-no-operator-accepts-this-zzz"

_MISSING = object()


class TrialTimeout(Exception):
    pass


@contextmanager
def time_limit(seconds: float):
    """SIGALRM-based wall-clock limit; inactive off the main thread."""
    if seconds <= 0 or threading.current_thread() is not threading.main_thread():
        yield
        return

    def _handler(signum, frame):
        raise TrialTimeout()

    old = signal.signal(signal.SIGALRM, _handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


@dataclass
class ProbePlan:
    class_name: str
    args: list[str] = field(default_factory=list)
    candidates: dict[str, list] = field(default_factory=dict)
    bounds_to_test: dict[str, dict] = field(default_factory=dict)
    dataset: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: dict) -> "ProbePlan":
        return cls(
            class_name=data["class_name"],
            args=list(data.get("args", [])),
            candidates={k: list(v) for k, v in data.get("candidates", {}).items()},
            bounds_to_test=dict(data.get("bounds_to_test", {})),
            dataset=dict(data.get("dataset", {})),
        )


def load_class(dotted_path: str) -> type:
    module_name, _, attr = dotted_path.rpartition(".")
    if not module_name:
        raise ImportError(f"{dotted_path!r} is not a dotted class path")
    module = importlib.import_module(module_name)
    return getattr(module, attr)


def _jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return True
    if isinstance(value, (int, float)):
        return value == value and abs(value) != float("inf")
    return False


def _fit(instance, X, y, task: str) -> None:
    if task == "transform" or y is None:
        instance.fit(X)
    else:
        instance.fit(X, y)


def _try_fit(cls, kwargs: dict, X, y, task: str, timeout: float) -> str | None:
    """One fresh-instance trial; None on success, else a failure tag."""
    try:
        with time_limit(timeout):
            instance = cls(**kwargs)
            _fit(instance, X, y, task)
        return None
    except TrialTimeout:
        return "timeout"
    except Exception as exc:
        return f"{type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# probes

def introspect_defaults(cls, arg_names: list[str], X, y, task: str,
                        timeout: float) -> tuple[dict, list[str]]:
    """Construct with no arguments, fit, and read the arguments back.

    Fit may resolve sentinel defaults to the real algorithmic ones; a fit
    failure still yields the pre-fit values plus a note.
    """
    notes: list[str] = []
    try:
        instance = cls()
    except Exception as exc:
        return {}, [f"ConstructionFailure: {type(exc).__name__}: {exc}"]
    observed: dict = {}

    def _collect():
        for name in arg_names:
            value = getattr(instance, name, _MISSING)
            if value is _MISSING:
                notes.append(f"attribute {name!r} not readable on the instance")
            elif _jsonable(value):
                observed[name] = value
            else:
                notes.append(
                    f"default of {name!r} has non-scalar runtime type "
                    f"{type(value).__name__}")

    try:
        with time_limit(timeout):
            _fit(instance, X, y, task)
    except TrialTimeout:
        notes.append("FitFailure: timeout during default introspection")
        _collect()
        return observed, notes
    except Exception as exc:
        notes.append(f"FitFailure: {type(exc).__name__}: {exc}")
        _collect()
        return observed, notes
    _collect()
    return observed, notes


_CHOICE_PATTERNS = (
    re.compile(r"'([^']+)'"),
    re.compile(r'"([^"]+)"'),
)


def parse_choices(message: str, marker: str = BAD_VALUE_MARKER) -> list[str]:
    """Pull candidate valid values out of an exception message: quoted
    words and brace lists, minus the bad value we injected."""
    choices: list[str] = []
    for pattern in _CHOICE_PATTERNS:
        for hit in pattern.findall(message):
            if hit != marker and hit not in choices and len(hit) <= 60 \
                    and "\n" not in hit:
                choices.append(hit)
    return choices


def bad_value_probe(cls, arg: str, X, y, task: str, timeout: float,
                    marker: str = BAD_VALUE_MARKER,
                    ) -> tuple[list[str], list[str]]:
    """Feed a deliberately bad value and harvest the exception text."""
    failure = _try_fit(cls, {arg: marker}, X, y, task, timeout)
    if failure is None:
        return ["unvalidated-at-construction"], []
    if failure == "timeout":
        return ["bad-value probe timed out"], []
    notes = [failure[:300]]
    if marker in failure:
        notes.append("bad-value-echoed")
    return notes, parse_choices(failure, marker)


def sample_and_test(cls, arg: str, candidates: list, X, y, task: str,
                    timeout: float, bounds: dict | None = None,
                    sources: dict | None = None,
                    ) -> tuple[list[dict], dict]:
    """Try every candidate value; test documented endpoints for validity
    and exclusivity (an endpoint that rejects while endpoint+epsilon is
    accepted becomes an exclusive bound)."""
    entries: list[dict] = []
    for value in candidates:
        failure = _try_fit(cls, {arg: value}, X, y, task, timeout)
        verdict = "accepted" if failure is None else \
            ("timeout" if failure == "timeout" else "rejected")
        entry = {"value": value, "verdict": verdict}
        if sources and value in sources:
            entry["source"] = sources[value]
        entries.append(entry)

    numeric: dict = {}
    bounds = bounds or {}
    if "min" in bounds:
        lo = bounds["min"]
        eps = max(abs(lo) * 1e-3, 1e-6)
        if _try_fit(cls, {arg: lo}, X, y, task, timeout) is None:
            numeric.update({"min": lo, "min_exclusive": False})
        elif _try_fit(cls, {arg: lo + eps}, X, y, task, timeout) is None:
            numeric.update({"min": lo, "min_exclusive": True})
    if "max" in bounds:
        hi = bounds["max"]
        eps = max(abs(hi) * 1e-3, 1e-6)
        if _try_fit(cls, {arg: hi}, X, y, task, timeout) is None:
            numeric.update({"max": hi, "max_exclusive": False})
        elif _try_fit(cls, {arg: hi - eps}, X, y, task, timeout) is None:
            numeric.update({"max": hi, "max_exclusive": True})
    return entries, numeric


# ---------------------------------------------------------------------------
# whole-plan runner

def run_plan(cls, plan: ProbePlan, timeout: float = 10.0,
             seed: int = 0) -> dict:
    """Execute all probes for one class sequentially and build the
    observation document for the refiner."""
    spec = dict(plan.dataset)
    task = spec.get("task", "classification")
    X, y = make_dataset(n_samples=spec.get("n_samples", 30),
                        n_features=spec.get("n_features", 5),
                        task=task, seed=seed)
    out: dict = {"class_name": plan.class_name}
    observed, notes = introspect_defaults(cls, plan.args, X, y, task, timeout)
    harvested: dict[str, list[dict]] = {}
    bounds_out: dict[str, dict] = {}
    exception_notes: dict[str, list[str]] = {}

    for arg in plan.args:
        arg_notes, message_choices = bad_value_probe(cls, arg, X, y, task,
                                                     timeout)
        if arg_notes:
            exception_notes[arg] = arg_notes
        candidates = list(plan.candidates.get(arg, []))
        sources = {v: "plan" for v in candidates}
        for choice in message_choices:
            if choice not in candidates:
                candidates.append(choice)
                sources[choice] = "exception-message"
        if not candidates and arg not in plan.bounds_to_test:
            continue
        entries, numeric = sample_and_test(
            cls, arg, candidates, X, y, task, timeout,
            bounds=plan.bounds_to_test.get(arg), sources=sources)
        if entries:
            harvested[arg] = entries
        if numeric:
            bounds_out[arg] = numeric

    if observed:
        out["observed_defaults"] = {k: observed[k] for k in sorted(observed)}
    if harvested:
        out["harvested_enums"] = {k: harvested[k] for k in sorted(harvested)}
    if bounds_out:
        out["numeric_bounds"] = {k: bounds_out[k] for k in sorted(bounds_out)}
    if exception_notes:
        out["exception_notes"] = {k: exception_notes[k]
                                  for k in sorted(exception_notes)}
    if notes:
        out["notes"] = notes
    return out
