# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import os

import numpy as np
import pytest


def pytest_collection_modifyitems(config, items):
    if os.environ.get("DSLAB_SLOW") == "1":
        return

    skip = pytest.mark.skip(reason="slow acceptance run, set DSLAB_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
