"""Tests for path systems, minors and the two independent minor oracles."""

from itertools import combinations

import numpy as np
import pytest
import sympy as sp

from src.helpers.census import valid_placements
from src.models.placement import Placement
from src.tools.path_systems import (
    all_paths,
    all_systems,
    cancellation_holds,
    disjoint_systems,
    labeling_matrix,
    minor,
    permutation_sign,
    side_product,
    side_product_check,
    symbolic_det,
    term_profile,
)
from src.utils.errors import BudgetExceededError


def P(text, n=4):
    return Placement.parse(text, n)


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((0, 3, 1, 2)) == 1


def test_paths_between_vertices():
    assert all_paths(4, 2, 10) == ((2, 5, 8, 10), (2, 6, 8, 10), (2, 6, 9, 10))
    assert all_paths(4, 3, 5) == ()
    assert all_paths(4, 1, 1) == ((1,),)


@pytest.mark.parametrize(
    "placement, systems",
    [("2,5,7,10", 2), ("1,4,5,10", 3), ("1,5,8,10", 1), ("1,3,4,10", 3)],
)
def test_disjoint_system_counts(placement, systems):
    found = disjoint_systems(P(placement))
    assert len(found) == systems
    assert all(s.is_disjoint for s in found)


def test_invalid_placement_has_zero_minor():
    p = P("1,2,4", n=3)
    assert disjoint_systems(p) == []
    assert minor(p).is_zero()


def test_minor_printing():
    assert str(minor(P("1,3,4,10"))) == "a1_2*a4_1*a6_1 + a2_1*a4_2*a6_1 + a2_1*a5_1*a6_2"


def test_minor_sign_follows_column_order():
    poly = minor(P("1,2,4,9"))
    assert str(poly) == "-a2_2*a5_1 - a3_1*a5_2"
    assert poly.equals_up_to_sign(poly.parse("a2_2*a5_1 + a3_1*a5_2", 4))


def test_source_level_minor_is_one():
    for n in (1, 2, 3, 4):
        assert str(minor(Placement.source_level(n))) == "1"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_side_minors_are_monomials(n):
    assert minor(Placement.left_side(n)).is_monomial()
    assert minor(Placement.right_side(n)).is_monomial()
    assert side_product_check(n)
    assert side_product(n).term_count == 1


def test_symbolic_determinant_matches_every_tsn3_subset():
    for labels in combinations(range(1, 7), 3):
        p = Placement(3, labels)
        assert symbolic_det(p) == minor(p), str(p)


@pytest.mark.parametrize("placement", ["1,3,4,10", "1,2,4,9", "2,5,7,10", "1,4,8,9", "3,6,8,9"])
def test_symbolic_determinant_matches_tsn4(placement):
    assert symbolic_det(P(placement)) == minor(P(placement))


@pytest.mark.slow
def test_symbolic_determinant_matches_every_valid_tsn4_placement():
    for p in valid_placements(4):
        assert symbolic_det(p) == minor(p), str(p)


def test_labeling_matrix_sources():
    m = labeling_matrix(3)
    assert m.shape == (3, 6)
    assert m[:, :3] == sp.eye(3)


@pytest.mark.parametrize("placement", ["1,3,4,10", "2,5,7,10", "1,4,5,10", "4,7,9,10"])
def test_non_disjoint_tuples_cancel(placement):
    assert cancellation_holds(P(placement))


def test_non_disjoint_tuples_cancel_for_invalid_placement():
    assert cancellation_holds(P("8,9,10,7"))


def test_tuple_budget():
    with pytest.raises(BudgetExceededError):
        all_systems(P("1,4,5,10"), limit=1)


def test_term_profile():
    profile = term_profile(3)
    assert sum(profile.by_terms.values()) == 17
    assert min(profile.by_terms) == 1
    assert sum(term_profile(4).by_terms.values()) == 150


def test_tsn3_term_histogram():
    assert term_profile(3).by_terms == {1: 16, 2: 1}
    assert max(term_profile(4).by_terms) <= 3


@pytest.mark.parametrize("n", [3, 4])
def test_terms_count_disjoint_systems(n):
    for p in valid_placements(n):
        systems = disjoint_systems(p)
        poly = minor(p)
        assert poly.term_count == len(systems)
        assert len({s.mask for s in systems}) == len(systems)


PUBLISHED_MINORS = {
    "1,2,4,9": "a2_2*a5_1 + a3_1*a5_2",
    "1,3,4,8": "a1_2*a4_1 + a2_1*a4_2",
    "1,3,4,10": "a1_2*a4_1*a6_1 + a2_1*a4_2*a6_1 + a2_1*a5_1*a6_2",
    "1,4,5,10": "a1_2*a2_2*a4_2*a6_1 + a1_2*a2_2*a5_1*a6_2 + a1_2*a3_1*a5_2*a6_2",
    "1,4,8,9": "a1_2*a2_2*a4_1*a5_1 + a1_2*a3_1*a4_1*a5_2 + a2_1*a3_1*a4_2*a5_2",
    "2,4,9,10": "a1_1*a2_2*a4_1*a5_1*a6_1 + a1_1*a3_1*a4_1*a5_2*a6_1",
    "2,5,7,10": "a1_1*a2_2*a3_2*a4_2*a6_1 + a1_1*a2_2*a3_2*a5_1*a6_2",
}


@pytest.mark.parametrize("placement, expected", sorted(PUBLISHED_MINORS.items()))
def test_published_minors(placement, expected):
    poly = minor(P(placement))
    assert poly.equals_up_to_sign(poly.parse(expected, 4)), str(poly)


def test_non_disjoint_tuples_cancel_on_every_tsn4_subset():
    subsets = list(combinations(range(1, 11), 4))
    assert len(subsets) == 210
    for labels in subsets:
        assert cancellation_holds(Placement(4, labels)), labels


def test_symbolic_determinant_matches_random_tsn5_placements():
    rng = np.random.default_rng(5)
    for _ in range(15):
        labels = tuple(int(i) + 1 for i in rng.choice(15, size=5, replace=False))
        p = Placement(5, labels)
        assert symbolic_det(p) == minor(p), str(p)
