"""Tiny synthetic datasets for probe fits.

Deterministic given the seed, so accept/reject verdicts are reproducible.
Some bounds genuinely depend on the data; a fixed dataset makes that
dependence explicit instead of flaky.
"""
from __future__ import annotations

import random

Matrix = list[list[float]]


def make_dataset(n_samples: int = 30, n_features: int = 5,
                 task: str = "classification", seed: int = 0,
                 ) -> tuple[Matrix, list | None]:
    rng = random.Random(seed)
    X = [[rng.uniform(-1.0, 1.0) for _ in range(n_features)]
         for _ in range(n_samples)]
    if task == "classification":
        y: list | None = [i % 2 for i in range(n_samples)]
        rng.shuffle(y)
    elif task == "regression":
        y = [rng.uniform(-1.0, 1.0) for _ in range(n_samples)]
    else:
        y = None
    return X, y
