"""Tests for the on-disk EvalTable cache."""

import pytest

from src.providers.eval_table_storage import MAGIC, EvalTableStorage, variable_order_hash
from src.tools.finite_field import make_field
from src.utils.errors import DomainError


@pytest.fixture
def storage(tmp_path) -> EvalTableStorage:
    return EvalTableStorage(tmp_path)


def test_save_and_load(storage):
    f3 = make_field(3)
    path = storage.save(4, (1, 4, 5, 10), f3, "nz", 4096, 0b1011 << 4000)
    assert path == storage.path_for(4, (1, 4, 5, 10), 3, "nz")
    assert path.read_bytes().startswith(MAGIC)
    assert storage.load(4, (1, 4, 5, 10), f3, "nz", 4096) == 0b1011 << 4000


def test_miss(storage):
    assert storage.load(4, (1, 4, 5, 10), make_field(3), "nz", 4096) is None


def test_header_mismatch_is_a_miss(storage):
    f3 = make_field(3)
    storage.save(4, (1, 4, 5, 10), f3, "nz", 4096, 1)
    assert storage.load(4, (1, 4, 5, 10), f3, "nz", 4095) is None


def test_kinds_are_kept_apart(storage):
    f4 = make_field(4)
    storage.save(4, (2, 5, 7, 10), f4, "gauge", 27, 5)
    assert storage.load(4, (2, 5, 7, 10), f4, "nz", 27) is None
    assert storage.load(4, (2, 5, 7, 10), f4, "gauge", 27) == 5


def test_truncated_file(storage):
    f3 = make_field(3)
    path = storage.save(4, (1, 4, 5, 10), f3, "nz", 4096, 7)
    path.write_bytes(path.read_bytes()[:-10])
    assert storage.load(4, (1, 4, 5, 10), f3, "nz", 4096) is None


def test_unknown_kind(storage):
    with pytest.raises(DomainError):
        storage.save(4, (1, 4, 5, 10), make_field(3), "odd", 8, 0)


def test_hash_depends_on_pinned_variables():
    f = make_field(5)
    assert variable_order_hash(4, f, "gauge") != variable_order_hash(4, f, "nz")
    assert variable_order_hash(4, f, "nz") == variable_order_hash(4, f, "all")
    assert variable_order_hash(4, f, "nz") != variable_order_hash(4, make_field(7), "nz")


def test_clear(storage):
    f2 = make_field(2)
    storage.save(3, (1, 3, 6), f2, "nz", 1, 1)
    storage.save(3, (1, 4, 6), f2, "nz", 1, 0)
    assert storage.clear() == 2
    assert storage.load(3, (1, 3, 6), f2, "nz", 1) is None
