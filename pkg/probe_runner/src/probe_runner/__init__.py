"""probe_runner: dynamic analysis of operator classes via live fit calls.

A standalone executable; it talks to the schema miner only through plan
files (input) and observation files (output), so a crashing or hanging
library cannot take the miner down with it.
"""

from .dataset import make_dataset
from .probes import (
    ProbePlan,
    bad_value_probe,
    introspect_defaults,
    run_plan,
    sample_and_test,
)

__version__ = "0.1.0"

__all__ = [
    "ProbePlan",
    "bad_value_probe",
    "introspect_defaults",
    "make_dataset",
    "run_plan",
    "sample_and_test",
    "__version__",
]
