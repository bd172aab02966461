"""Tests for placements, the two validity deciders and the placement census."""

from itertools import combinations

import numpy as np
import pytest

from src.helpers.census import census, iter_valid_labels, valid_placements
from src.models.placement import Placement
from src.schemas.run_schemas import CensusRow
from src.tools.placement_validator import (
    check_path_system,
    crowded_triangles,
    disjoint_paths_exist,
    first_violation,
    is_distributed,
    is_valid,
    overcrowded_triangles,
)
from src.utils.errors import BudgetExceededError, DomainError


def all_placements(n):
    size = n * (n + 1) // 2
    return [Placement(n, labels) for labels in combinations(range(1, size + 1), n)]


class TestPlacement:
    def test_parse_sorts(self):
        p = Placement.parse("10,1,5,8", n=4)
        assert p.labels == (1, 5, 8, 10)
        assert str(p) == "1,5,8,10"
        assert p == Placement.left_side(4)

    @pytest.mark.parametrize("text", ["1,1,5,8", "1,5,8", "1,5,8,11", "0,5,8,10", "1,x,8,10"])
    def test_malformed(self, text):
        with pytest.raises(DomainError):
            Placement.parse(text, n=4)

    def test_symmetry_images(self):
        p = Placement.parse("1,4,5", n=3)
        assert str(p.rotate()) == "2,5,6"
        assert str(p.reflect()) == "3,4,5"
        assert p.rotate().rotate().rotate() == p
        assert p in p.orbit()

    def test_source_level(self):
        assert Placement.source_level(4).labels == (1, 2, 3, 4)


class TestValidity:
    def test_invalid_tsn3_placements(self):
        invalid = [str(p) for p in all_placements(3) if not is_valid(p)]
        assert invalid == ["1,2,4", "2,3,5", "4,5,6"]

    def test_violation_reported(self):
        p = Placement.parse("1,2,4", n=3)
        triangle, count = first_violation(p)
        assert triangle.k == 2 and count == 3
        assert overcrowded_triangles(p)
        assert first_violation(Placement.parse("1,3,6", n=3)) is None

    def test_crowded_triangles_of_valid_placement(self):
        p = Placement.parse("1,3,6", n=3)
        assert any(t.k == 3 for t, _ in crowded_triangles(p))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_deciders_agree(self, n):
        for p in all_placements(n):
            assert is_distributed(p) == disjoint_paths_exist(p).exists, str(p)

    @pytest.mark.parametrize("n, samples", [(6, 2000), (7, 500)])
    def test_deciders_agree_on_random_placements(self, n, samples):
        rng = np.random.default_rng(n)
        size = n * (n + 1) // 2
        valid = 0
        for _ in range(samples):
            labels = tuple(int(i) + 1 for i in rng.choice(size, size=n, replace=False))
            p = Placement(n, labels)
            distributed = is_distributed(p)
            assert distributed == disjoint_paths_exist(p).exists, str(p)
            valid += distributed
        assert 0 < valid < samples

    def test_flow_witness_is_a_path_system(self):
        for p in valid_placements(4):
            result = disjoint_paths_exist(p)
            assert result.flow_value == 4
            assert check_path_system(p, result.paths), str(p)

    def test_flow_on_invalid_placement(self):
        result = disjoint_paths_exist(Placement.parse("4,5,6", n=3))
        assert not result.exists
        assert result.paths == []
        assert result.flow_value < 3

    def test_bad_path_system_rejected(self):
        p = Placement.parse("1,4,5,10", n=4)
        assert not check_path_system(p, [[1], [2, 5], [3, 6, 9, 10]])
        assert not check_path_system(p, [[1], [2, 5], [3, 7, 9, 10], [4, 7]])
        assert check_path_system(p, [[1], [2, 5], [3, 7, 9, 10], [4]])

    def test_rotation_preserves_validity(self):
        for p in all_placements(4):
            assert is_valid(p) == is_valid(p.rotate()) == is_valid(p.reflect())


class TestCensus:
    @pytest.mark.parametrize(
        "n, valid, invalid",
        [(1, 1, 0), (2, 3, 0), (3, 17, 3), (4, 150, 60), (5, 1848, 1155)],
    )
    def test_counts(self, n, valid, invalid):
        row = census(n)
        assert (row.valid, row.invalid) == (valid, invalid)

    @pytest.mark.slow
    def test_tsn6(self):
        row = census(6)
        assert (row.valid, row.invalid) == (29636, 24628)

    @pytest.mark.slow
    def test_tsn7(self):
        assert census(7, jobs=4).valid == 589362

    def test_parallel_matches_serial(self):
        assert census(4, jobs=2) == census(4)

    def test_enumeration_is_lexicographic_and_valid(self):
        labels = list(iter_valid_labels(4))
        assert labels == sorted(labels)
        assert len(labels) == 150
        assert all(is_valid(Placement(4, l)) for l in labels)

    def test_branch_restriction(self):
        n = 4
        total = sum(sum(1 for _ in iter_valid_labels(n, first)) for first in range(1, 8))
        assert total == 150
        assert list(iter_valid_labels(n, first=9)) == []

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            census(8)

    def test_row_consistency(self):
        with pytest.raises(ValueError):
            CensusRow(n=3, valid=17, invalid=2, total=19)
