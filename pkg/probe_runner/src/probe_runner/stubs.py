"""Stub operator classes used by the probe runner's own tests.

They imitate the validation idioms real estimators use: a sentinel
constructor default that fit resolves, value checks that raise with the
valid choices listed in the message, and strict numeric bounds.
"""
from __future__ import annotations

import time


class SentinelSolverClassifier:
    """Ships with solver='warn' and resolves it when fitted."""

    def __init__(self, solver="warn", alpha=1.0):
        self.solver = solver
        self.alpha = alpha

    def fit(self, X, y):
        if self.solver == "warn":
            self.solver = "linear"
        if self.solver not in ("linear", "sag", "lbfgs"):
            raise ValueError(
                f"solver must be one of 'linear', 'sag', 'lbfgs', "
                f"got {self.solver!r}")
        if not isinstance(self.alpha, (int, float)) or self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")
        return self

    def predict(self, X):
        return [0] * len(X)


class EnumValidatedClassifier:
    """Accepts exactly mode in {'a', 'b'}; anything else raises at fit."""

    def __init__(self, mode="a"):
        self.mode = mode

    def fit(self, X, y):
        if self.mode not in ("a", "b"):
            raise ValueError(f"mode must be one of {{'a', 'b'}}, "
                             f"got {self.mode!r}")
        return self

    def predict(self, X):
        return [0] * len(X)


class BoundedRegressor:
    """Requires strictly positive c."""

    def __init__(self, c=1.0):
        self.c = c

    def fit(self, X, y):
        if not isinstance(self.c, (int, float)) or self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c!r}")
        return self

    def predict(self, X):
        return [0.0] * len(X)


class FailingFitOperator:
    def __init__(self, k=3):
        self.k = k

    def fit(self, X, y):
        raise RuntimeError("this operator never fits")


class SlowFitOperator:
    def __init__(self, delay=5.0, mode="a"):
        self.delay = delay
        self.mode = mode

    def fit(self, X, y):
        time.sleep(self.delay)
        return self
