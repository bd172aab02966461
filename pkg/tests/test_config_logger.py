"""Tests for settings resolution and the run journal."""

import json
import os

from src.config import Settings
from src.schemas.run_schemas import CensusRow
from src.utils.logger import RunLogger, log_run


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("TSN_SEED", "7")
    monkeypatch.setenv("TSN_MAX_EXHAUSTIVE_POINTS", "1000")
    settings = Settings()
    assert settings.seed == 7
    assert settings.max_exhaustive_points == 1000


def test_defaults(monkeypatch):
    monkeypatch.delenv("TSN_JOBS", raising=False)
    settings = Settings()
    assert settings.census_max_n >= 7
    assert settings.chunk_size % 8 == 0
    assert settings.jobs == (os.cpu_count() or 1)


def test_jobs_override(monkeypatch):
    monkeypatch.setenv("TSN_JOBS", "3")
    assert Settings().jobs == 3


def test_journal_appends(tmp_path):
    logger = RunLogger(tmp_path)
    row = CensusRow(n=3, valid=17, invalid=3, total=20)
    path = logger.log_run("census", {"n": 3}, row, 0.01)
    logger.log_run("census", {"n": 3}, row, 0.02, metadata={"rerun": True})
    entries = [json.loads(line) for line in path.read_text().splitlines()]
    assert len(entries) == 2
    assert entries[0]["result"] == {"n": 3, "valid": 17, "invalid": 3, "total": 20}
    assert entries[1]["metadata"] == {"rerun": True}


def test_log_run_helper(tmp_path):
    path = log_run("minor", {"n": 4}, "a1_1", 0.5, log_dir=tmp_path)
    entry = json.loads(path.read_text().splitlines()[0])
    assert entry["result"] == {"value": "a1_1"}
