"""Tests for receiver sets, solvability, minimum field sizes and the pair/triple censuses."""

import numpy as np
import pytest

from src.helpers.census import valid_placements
from src.models.placement import Placement
from src.services.solver import ReceiverSet, Solver
from src.tools.finite_field import evaluate, make_field
from src.utils.errors import BudgetExceededError, DomainError, InvalidPlacementError

F4_WITNESS = [1, 3, 3, 3, 2, 2, 3, 3, 2, 1, 2, 2]
F5_WITNESS = [1, 4, 3, 1, 1, 4, 4, 1, 4, 3, 3, 2]


class TestReceiverSet:
    def test_sides_added(self, triple):
        assert len(triple.receivers) == 5
        assert Placement.left_side(4) in triple.receivers
        assert Placement.right_side(4) in triple.receivers

    def test_without_sides(self):
        rs = ReceiverSet.parse(4, ["1,4,5,10"], include_sides=False)
        assert rs.receivers == (Placement.parse("1,4,5,10", 4),)

    def test_duplicates_collapse(self):
        rs = ReceiverSet.parse(4, ["1,5,8,10", "10,8,5,1", "1,4,5,10"])
        assert len(rs.placements) == 2
        assert len(rs.receivers) == 3

    def test_invalid_placement_rejected(self):
        with pytest.raises(InvalidPlacementError, match="4,5,6"):
            ReceiverSet.parse(3, ["4,5,6"])

    def test_mixed_lattices_rejected(self):
        with pytest.raises(DomainError):
            ReceiverSet(4, (Placement.parse("1,3,6", 3),))

    def test_symmetry(self, triple):
        assert triple.rotate().rotate().rotate() == triple
        assert triple.reflect().reflect() == triple


class TestSolvability:
    def test_unsolvable_over_f3(self, solver, triple):
        result = solver.is_solvable(triple, 3)
        assert result.mode == "exhaustive"
        assert result.solvable is False
        assert result.witness is None
        assert result.points_total == 4096

    def test_solvable_over_f4(self, solver, triple):
        result = solver.is_solvable(triple, 4, mode="exhaustive")
        assert result.solvable is True
        assert solver.verify_witness(triple, result.witness, 4)

    def test_known_witnesses(self, solver, triple, six):
        assert solver.verify_witness(triple, F4_WITNESS, 4)
        assert solver.verify_witness(six, F5_WITNESS, 5)
        assert not solver.verify_witness(triple, [1] * 12, 4)

    def test_witness_length(self, solver, triple):
        with pytest.raises(DomainError):
            solver.verify_witness(triple, [1] * 11, 4)

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_gauge_agrees_with_full_scan(self, solver, triple, q):
        full = solver.is_solvable(triple, q, mode="exhaustive")
        gauge = solver.is_solvable(triple, q, mode="exhaustive", gauge=True)
        assert full.solvable == gauge.solvable
        assert gauge.points_total == (q - 1) ** 3

    def test_randomized_finds_witness(self, solver, triple):
        result = solver.is_solvable(triple, 4, mode="randomized", trials=2000, seed=7, gauge=True)
        assert result.solvable is True
        assert result.seed == 7
        again = solver.is_solvable(triple, 4, mode="randomized", trials=2000, seed=7, gauge=True)
        assert again.witness == result.witness

    def test_randomized_never_proves_unsolvability(self, solver, triple):
        result = solver.is_solvable(triple, 3, mode="randomized", trials=500, seed=1)
        assert result.solvable is None
        assert result.points_checked == 500

    def test_exhaustive_budget(self, solver, triple):
        with pytest.raises(BudgetExceededError):
            solver.is_solvable(triple, 3, mode="exhaustive", max_points=100)

    def test_unknown_mode(self, solver, triple):
        with pytest.raises(DomainError):
            solver.is_solvable(triple, 3, mode="bisect")

    def test_without_sides_scans_all_points(self, solver):
        rs = ReceiverSet.parse(3, ["1,3,6"], include_sides=False)
        result = solver.is_solvable(rs, 2)
        assert result.nonzero_only is False
        assert result.points_total == 64
        assert result.solvable is True

    def test_gauge_needs_nonzero_points(self, solver):
        rs = ReceiverSet.parse(3, ["1,3,6"], include_sides=False)
        with pytest.raises(DomainError):
            solver.is_solvable(rs, 3, gauge=True)


class TestMinField:
    def test_tsn3_every_valid_placement(self, solver):
        result = solver.max_min_field(3)
        assert result.q == 3
        assert result.exact
        assert result.receivers == 17

    def test_tsn3_without_the_hard_placement(self, solver):
        hard = Placement.parse("1,3,6", 3)
        rs = ReceiverSet(3, tuple(p for p in valid_placements(3) if p != hard))
        assert solver.min_field(rs).q == 2

    def test_triple_needs_f4(self, solver, triple):
        result = solver.min_field(triple)
        assert (result.q, result.exact, result.lower_bound) == (4, True, 4)
        assert [a.q for a in result.attempts] == [2, 3, 4]
        assert solver.verify_witness(triple, result.witness, 4)

    def test_six_need_f5(self, solver, six):
        result = solver.min_field(six, gauge=True)
        assert result.q == 5
        assert result.exact
        assert solver.verify_witness(six, result.witness, 5)

    @pytest.mark.slow
    def test_six_need_f5_full_scan(self, settings, six):
        settings.max_exhaustive_points = 1 << 25
        assert Solver(settings).min_field(six).q == 5

    def test_tsn4_every_valid_placement(self, solver):
        result = solver.max_min_field(4, gauge=True)
        assert result.q == 5
        assert result.exact
        assert result.receivers == 150

    def test_skipped_fields_are_not_proofs(self, solver, triple):
        result = solver.min_field(triple, mode="exhaustive", max_points=100)
        assert result.q is None
        assert not result.exact
        assert result.lower_bound == 3


class TestReduction:
    def test_product_reduction(self, solver):
        rs = ReceiverSet.parse(3, ["1,3,6"])
        assert solver.reduction_nonzero(rs, 2) is False
        assert solver.reduction_nonzero(rs, 3) is True

    def test_prime_fields_only(self, solver):
        with pytest.raises(DomainError):
            solver.reduction_nonzero(ReceiverSet.parse(3, ["1,3,6"]), 4)


class TestEvalTables:
    def test_tables_are_cached_on_disk(self, settings):
        p = Placement.parse("1,4,5,10", 4)
        first = Solver(settings).eval_table(p, 3)
        path = Solver(settings).storage.path_for(4, p.labels, 3, "nz")
        assert path.exists()
        second = Solver(settings).eval_table(p, 3)
        assert second.bits == first.bits
        assert 0 < second.count < 4096

    def test_monomials_skip_evaluation(self, solver):
        table = solver.eval_table(Placement.left_side(4), 5)
        assert table.count == table.npoints == 4**12
        assert not solver.storage.path_for(4, Placement.left_side(4).labels, 5, "nz").exists()

    def test_cache_can_be_disabled(self, settings):
        assert Solver(settings, use_cache=False).storage is None


class TestCensuses:
    def test_pairs(self, solver):
        report = solver.census_pairs(4)
        assert report.pairs == 11175
        assert report.max_min_field == 3
        assert report.counterexamples == []
        assert sum(report.by_min_field.values()) == 11175

    @pytest.mark.slow
    def test_triples(self, solver):
        report = solver.census_triples(4)
        assert report.triples == 551300
        assert report.min_field_4 == 324
        assert report.beyond_4 == 0
        assert sum(report.by_min_field.values()) == report.triples

    def test_pairs_need_two_placements(self, solver):
        report = solver.census_pairs(1)
        assert report.pairs == 0
        assert report.max_min_field is None


@pytest.mark.parametrize("dropped", range(6))
def test_five_of_the_six_are_solvable_over_f4(solver, six, dropped):
    rs = ReceiverSet(4, tuple(p for i, p in enumerate(six.placements) if i != dropped))
    assert len(rs.placements) == 5
    result = solver.is_solvable(rs, 4, gauge=True)
    assert result.solvable is True
    assert solver.verify_witness(rs, result.witness, 4)


def test_min_field_is_symmetry_invariant(solver, triple, six):
    for rs, q in ((triple, 4), (six, 5)):
        assert solver.min_field(rs.rotate(), gauge=True).q == q
        assert solver.min_field(rs.reflect(), gauge=True).q == q


def test_min_field_is_symmetry_invariant_on_random_sets(solver):
    rng = np.random.default_rng(2024)
    placements = valid_placements(4)
    for size in (1, 2, 3, 3, 4, 5, 6, 8):
        picks = rng.choice(len(placements), size=size, replace=False)
        rs = ReceiverSet(4, tuple(placements[i] for i in picks))
        q = solver.min_field(rs, gauge=True).q
        assert q is not None
        assert solver.min_field(rs.rotate(), gauge=True).q == q
        assert solver.min_field(rs.rotate().rotate(), gauge=True).q == q
        assert solver.min_field(rs.reflect(), gauge=True).q == q


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("text", ["1,2,4,9", "1,3,4,8", "1,3,4,10", "1,4,5,10", "1,4,8,9", "2,5,7,10"])
def test_eval_table_random_bits(solver, q, text):
    p = Placement.parse(text, 4)
    field = make_field(q)
    table = solver.eval_table(p, q)
    space = solver.space_for(4, field)
    poly = solver.minor_of(p)
    rng = np.random.default_rng(q * 1000 + p.labels[-1])
    for b in rng.integers(0, table.npoints, size=1000):
        assert table.is_set(int(b)) == (evaluate(poly, space.point_at(int(b)), field) != 0)


def test_reduction_agrees_with_exhaustive_scan(solver):
    for extra in ["1,3,6", "1,2,6", "2,4,6", "3,4,5"]:
        rs = ReceiverSet.parse(3, [extra])
        for q in (2, 3):
            assert solver.reduction_nonzero(rs, q) == solver.is_solvable(rs, q).solvable
