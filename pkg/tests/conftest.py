"""
Shared fixtures: isolated settings (cache and journal under tmp_path) and
the receiver sets used across the suite.
"""

import pytest

from src.config import Settings
from src.services.solver import ReceiverSet, Solver

TRIPLE_F4 = ["2,5,7,10", "2,4,9,10", "1,4,5,10"]
SIX_F5 = ["1,2,4,9", "1,3,4,8", "2,5,7,10", "1,4,8,9", "1,4,5,10", "1,3,4,10"]


@pytest.fixture
def settings(tmp_path) -> Settings:
    return Settings(cache_dir=tmp_path / "cache", log_dir=tmp_path / "logs", chunk_size=1 << 12, jobs=1)


@pytest.fixture
def solver(settings) -> Solver:
    return Solver(settings)


@pytest.fixture
def triple() -> ReceiverSet:
    return ReceiverSet.parse(4, TRIPLE_F4)


@pytest.fixture
def six() -> ReceiverSet:
    return ReceiverSet.parse(4, SIX_F5)
