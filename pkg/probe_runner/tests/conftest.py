import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE.parent / "src"))

# The observation-file contract published by the schema miner; reading the
# file is the only coupling between the two packages.
OBSERVATION_SCHEMA_PATH = (
    HERE.parent.parent / "src" / "schemamine" / "schemas"
    / "observation_set.schema.json")


@pytest.fixture(scope="session")
def observation_schema() -> dict:
    return json.loads(OBSERVATION_SCHEMA_PATH.read_text(encoding="utf-8"))
