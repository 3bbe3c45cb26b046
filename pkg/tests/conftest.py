import json
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def oracle():
    """Frozen mpmath values; regenerate with tests/oracles/make_oracles.py."""
    return json.loads((HERE / "oracles" / "values.json").read_text())
