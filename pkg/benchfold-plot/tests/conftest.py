import os

import pytest

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


@pytest.fixture
def fixtures():
    return {
        "rankings": os.path.join(FIXTURES, "rankings.csv"),
        "stepwise": os.path.join(FIXTURES, "stepwise.json"),
        "unfolding": os.path.join(FIXTURES, "unfolding.json"),
        "distances": os.path.join(FIXTURES, "distances.csv"),
        "diagnostics": os.path.join(FIXTURES, "diagnostics.json"),
    }
