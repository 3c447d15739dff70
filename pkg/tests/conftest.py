from __future__ import annotations

import os

from hypothesis import HealthCheck
import hypothesis
import pytest

from homeoact.lamination import GapSet
from homeoact.pl import CircleHomeo

hypothesis.settings.register_profile(
    "ci",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
hypothesis.settings.register_profile("dev", deadline=None, max_examples=200)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture
def f_half() -> CircleHomeo:
    """Slope 1/2 on [0, 1/2], slope 3/2 on [1/2, 1]."""
    return CircleHomeo.from_breakpoints([(0, 0), ("1/2", "1/4")])


@pytest.fixture
def middle_block() -> GapSet:
    """{0} U [1/3, 1/2] U {1}."""
    return GapSet.from_blocks((0, 0), ("1/3", "1/2"), (1, 1))
