"""
Solver - Solvability of receiver sets over small finite fields

A receiver set is solvable over F_q when one point makes every receiver's
minor nonzero at once. With the side receivers present every variable must be
nonzero, so the search runs over (F_q*)^k.

Exhaustive searches intersect per-placement EvalTables (bitmaps over the
point stream, cached in memory and on disk); randomized searches sample
points with a seeded generator and can only ever prove solvability.
"""

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np
import sympy as sp

from src.config import Settings, get_settings
from src.helpers.census import valid_placements
from src.models.placement import Placement
from src.models.polynomial import MinorPolynomial
from src.providers.eval_table_storage import EvalTableStorage
from src.schemas.run_schemas import MinFieldResult, PairCensusReport, SolveResult, TripleCensusReport
from src.tools.finite_field import SUPPORTED_ORDERS, Field, evaluate, make_field
from src.tools.path_systems import edge_symbols, minor, to_sympy
from src.tools.placement_validator import first_violation, is_valid
from src.tools.point_space import PointSpace, bitmap_bytes, evaluate_batch
from src.utils.errors import BudgetExceededError, DomainError, InvalidPlacementError, TSNError

logger = logging.getLogger(__name__)


# ============================================
# Receiver sets and tables
# ============================================


@dataclass(frozen=True)
class ReceiverSet:
    """
    Valid placements of one lattice, plus by default the two side receivers.

    Example:
        >>> rs = ReceiverSet.parse(4, ["2,5,7,10", "2,4,9,10", "1,4,5,10"])
        >>> len(rs.receivers)
        5
    """

    n: int
    placements: Tuple[Placement, ...]
    include_sides: bool = True

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(sorted(set(self.placements))))
        for p in self.placements:
            if p.n != self.n:
                raise DomainError(f"Placement {{{p}}} belongs to TSN({p.n}), not TSN({self.n})")
            if not is_valid(p):
                violation = first_violation(p)
                reason = f"{violation[0]} holds {violation[1]} labels" if violation else ""
                raise InvalidPlacementError(str(p), reason)

    @classmethod
    def parse(cls, n: int, texts: Sequence[str], include_sides: bool = True) -> "ReceiverSet":
        return cls(n, tuple(Placement.parse(t, n) for t in texts), include_sides)

    @property
    def receivers(self) -> Tuple[Placement, ...]:
        """Placements plus sides, sorted and without duplicates."""
        extra = (Placement.left_side(self.n), Placement.right_side(self.n)) if self.include_sides else ()
        return tuple(sorted(set(self.placements) | set(extra)))

    def rotate(self) -> "ReceiverSet":
        return ReceiverSet(self.n, tuple(p.rotate() for p in self.placements), self.include_sides)

    def reflect(self) -> "ReceiverSet":
        return ReceiverSet(self.n, tuple(p.reflect() for p in self.placements), self.include_sides)

    def __str__(self) -> str:
        return " | ".join(f"{{{p}}}" for p in self.receivers)


@dataclass
class EvalTable:
    """Bit b is set iff the placement's minor is nonzero at stream position b."""

    placement: Placement
    q: int
    kind: str
    npoints: int
    bits: int

    @property
    def count(self) -> int:
        return bin(self.bits).count("1")

    def is_set(self, b: int) -> bool:
        return bool(self.bits >> b & 1)


def lowest_bit(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def _bitmap_worker(args: Tuple) -> bytes:
    n, terms, q, nonzero, fixed, start, stop, chunk_size = args
    space = PointSpace(make_field(q), n * (n - 1), nonzero, fixed)
    return bitmap_bytes(MinorPolynomial(n, terms), space, start, stop, chunk_size)


# ============================================
# Solver
# ============================================


class Solver:
    """
    Solvability, minimum field size and the small-lattice censuses.

    Example:
        >>> solver = get_solver()
        >>> rs = ReceiverSet.parse(4, ["2,5,7,10", "2,4,9,10", "1,4,5,10"])
        >>> solver.min_field(rs).q
        4
    """

    def __init__(
        self,
        settings: Optional[Settings] = None,
        storage: Optional[EvalTableStorage] = None,
        use_cache: bool = True,
    ):
        self.settings = settings or get_settings()
        if storage is None and use_cache:
            storage = EvalTableStorage(self.settings.cache_dir)
        self.storage = storage
        self._tables: Dict[Tuple[Placement, int, str], EvalTable] = {}
        self._minors: Dict[Placement, MinorPolynomial] = {}

    def minor_of(self, p: Placement) -> MinorPolynomial:
        if p not in self._minors:
            self._minors[p] = minor(p)
        return self._minors[p]

    def space_for(self, n: int, field: Field, nonzero: bool = True, gauge: bool = False) -> PointSpace:
        if gauge:
            if not nonzero:
                raise DomainError("Gauge fixing applies to nonzero points only (include the sides)")
            return PointSpace.gauge_fixed(field, n)
        return PointSpace(field, n * (n - 1), nonzero=nonzero)

    # ============================================
    # EvalTables
    # ============================================

    def eval_table(
        self,
        p: Placement,
        q: int,
        nonzero: bool = True,
        gauge: bool = False,
        max_points: Optional[int] = None,
    ) -> EvalTable:
        """
        EvalTable of one placement: memory, then disk, then evaluation.

        Monomial minors with a unit coefficient never vanish on nonzero
        points and get an all-ones table without evaluation.
        """
        field = make_field(q)
        space = self.space_for(p.n, field, nonzero, gauge)
        key = (p, q, space.kind)
        if key in self._tables:
            return self._tables[key]

        poly = self.minor_of(p)
        bits: Optional[int] = None
        if space.nonzero and poly.is_monomial() and field.from_int(next(iter(poly.terms.values()))) != 0:
            bits = (1 << space.total) - 1
        elif self.storage is not None:
            bits = self.storage.load(p.n, p.labels, field, space.kind, space.total)

        if bits is None:
            space.check_budget(max_points if max_points is not None else self.settings.max_exhaustive_points)
            bits = self._compute_bits(poly, space)
            if self.storage is not None:
                self.storage.save(p.n, p.labels, field, space.kind, space.total, bits)

        table = EvalTable(placement=p, q=q, kind=space.kind, npoints=space.total, bits=bits)
        self._tables[key] = table
        return table

    def _compute_bits(self, poly: MinorPolynomial, space: PointSpace) -> int:
        jobs = self.settings.jobs
        chunk = self.settings.chunk_size
        if jobs > 1 and space.total > chunk:
            step = -(-space.total // jobs)
            step += -step % 8
            args = [
                (poly.n, poly.terms, space.field.q, space.nonzero, space.fixed, lo, min(lo + step, space.total), chunk)
                for lo in range(0, space.total, step)
            ]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                data = b"".join(pool.map(_bitmap_worker, args))
        else:
            data = bitmap_bytes(poly, space, chunk_size=chunk)
        return int.from_bytes(data, "little")

    # ============================================
    # Solvability
    # ============================================

    def is_solvable(
        self,
        rs: ReceiverSet,
        q: int,
        mode: str = "auto",
        max_points: Optional[int] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
        gauge: bool = False,
    ) -> SolveResult:
        """
        Search for a point making every receiver minor nonzero over F_q.

        Args:
            rs: Receiver set (sides restrict the search to nonzero points)
            q: Field order
            mode: exhaustive, randomized, or auto (exhaustive when within budget)
            max_points: Exhaustive budget (default: max_exhaustive_points)
            trials: Samples in randomized mode (default: random_trials)
            seed: PRNG seed (default: settings seed)
            gauge: Scan the gauge-fixed subspace instead of all of (F_q*)^k

        Returns:
            SolveResult; solvable is None when randomized mode found nothing

        Raises:
            BudgetExceededError: exhaustive mode on a space above the budget
        """
        start = time.perf_counter()
        field = make_field(q)
        space = self.space_for(rs.n, field, rs.include_sides, gauge)
        max_points = max_points if max_points is not None else self.settings.max_exhaustive_points

        if mode == "auto":
            mode = "exhaustive" if space.total <= max_points else "randomized"
        if mode == "exhaustive":
            result = self._exhaustive(rs, field, space, max_points)
        elif mode == "randomized":
            seed = seed if seed is not None else self.settings.seed
            result = self._randomized(rs, field, space, trials or self.settings.random_trials, seed)
        else:
            raise DomainError(f"Unknown search mode '{mode}'")

        if result.witness is not None and not self.verify_witness(rs, result.witness, q):
            raise TSNError(f"Witness {result.witness} over F_{q} failed verification for {rs}")

        result.elapsed_ms = int((time.perf_counter() - start) * 1000)
        logger.info(
            f"F_{q} {result.mode}: solvable={result.solvable} "
            f"({result.points_checked}/{result.points_total} points, {result.elapsed_ms} ms)"
        )
        return result

    def _exhaustive(self, rs: ReceiverSet, field: Field, space: PointSpace, max_points: int) -> SolveResult:
        space.check_budget(max_points)
        bits = (1 << space.total) - 1
        for p in rs.receivers:
            bits &= self.eval_table(p, field.q, space.nonzero, bool(space.fixed), max_points).bits
            if not bits:
                break
        witness = list(space.point_at(lowest_bit(bits))) if bits else None
        return SolveResult(
            receivers=[str(p) for p in rs.receivers],
            q=field.q,
            solvable=bool(bits),
            witness=witness,
            mode="exhaustive",
            points_total=space.total,
            points_checked=space.total,
            nonzero_only=space.nonzero,
        )

    def _randomized(self, rs: ReceiverSet, field: Field, space: PointSpace, trials: int, seed: int) -> SolveResult:
        rng = np.random.default_rng(seed)
        polys = [self.minor_of(p) for p in rs.receivers]
        if space.nonzero:
            polys = [poly for poly in polys if not poly.is_monomial()]

        checked = 0
        witness: Optional[List[int]] = None
        block = max(1, min(self.settings.chunk_size, trials))
        while checked < trials and witness is None:
            count = min(block, trials - checked)
            coords = space.random_block(rng, count)
            ok = np.ones(count, dtype=bool)
            for poly in polys:
                ok &= evaluate_batch(poly, coords, field) != 0
            if ok.any():
                idx = int(np.argmax(ok))
                witness = [int(v) for v in coords[:, idx]]
                checked += idx + 1
            else:
                checked += count

        return SolveResult(
            receivers=[str(p) for p in rs.receivers],
            q=field.q,
            solvable=True if witness is not None else None,
            witness=witness,
            mode="randomized",
            points_total=space.total,
            points_checked=checked,
            nonzero_only=space.nonzero,
            seed=seed,
        )

    def verify_witness(self, rs: ReceiverSet, point: Sequence[int], q: int) -> bool:
        """Every receiver minor evaluates nonzero at the point."""
        field = make_field(q)
        k = rs.n * (rs.n - 1)
        if len(point) != k:
            raise DomainError(f"Witness has {len(point)} coordinates, TSN({rs.n}) has {k} variables")
        return all(evaluate(self.minor_of(p), point, field) != 0 for p in rs.receivers)

    def min_field(
        self,
        rs: ReceiverSet,
        mode: str = "auto",
        max_points: Optional[int] = None,
        gauge: bool = False,
    ) -> MinFieldResult:
        """
        Smallest supported q over which the set is solvable.

        Each q is tried on its own; a failure at one q never rules out another.
        The sweep stops at the first supported q >= |R|, which always suffices.
        """
        receivers = len(rs.receivers)
        bound = next((q for q in SUPPORTED_ORDERS if q >= receivers), SUPPORTED_ORDERS[-1])
        attempts: List[SolveResult] = []
        lower = SUPPORTED_ORDERS[0]
        proven = True

        for q in SUPPORTED_ORDERS:
            if q > bound:
                break
            try:
                result = self.is_solvable(rs, q, mode=mode, max_points=max_points, gauge=gauge)
            except BudgetExceededError as e:
                logger.warning(f"F_{q} skipped: {e}")
                proven = False
                continue
            attempts.append(result)

            if result.solvable:
                return MinFieldResult(
                    q=q,
                    exact=proven,
                    lower_bound=q if proven else lower,
                    witness=result.witness,
                    attempts=attempts,
                    receivers=receivers,
                )
            if proven and result.solvable is False:
                lower = next((r for r in SUPPORTED_ORDERS if r > q), q + 1)
            else:
                proven = False

        return MinFieldResult(q=None, exact=False, lower_bound=lower, attempts=attempts, receivers=receivers)

    def max_min_field(self, n: int, mode: str = "auto", gauge: bool = False) -> MinFieldResult:
        """Minimum field of the set of every valid placement, the worst case over all receiver sets."""
        return self.min_field(ReceiverSet(n, tuple(valid_placements(n))), mode=mode, gauge=gauge)

    def reduction_nonzero(self, rs: ReceiverSet, q: int) -> bool:
        """
        Whether the product of all receiver minors survives reduction modulo
        x^q - x in every variable, over the prime field F_q.

        The reduced polynomial is nonzero exactly when the product is not the
        zero function on F_q^k.
        """
        if not galois.is_prime(q):
            raise DomainError(f"The reduction criterion is implemented for prime q, got {q}")
        if rs.n == 1:
            return True

        symbols = edge_symbols(rs.n)
        product = sp.Poly(1, *symbols, modulus=q)
        for p in rs.receivers:
            product = product * sp.Poly(to_sympy(self.minor_of(p)), *symbols, modulus=q)

        reduced: Dict[Tuple[int, ...], int] = {}
        for exponents, coeff in product.terms():
            key = tuple(0 if e == 0 else (e - 1) % (q - 1) + 1 for e in exponents)
            reduced[key] = (reduced.get(key, 0) + int(coeff)) % q
        return any(reduced.values())

    # ============================================
    # Censuses
    # ============================================

    def _gauge_tables(self, placements: Sequence[Placement], q: int) -> List[int]:
        return [self.eval_table(p, q, gauge=True).bits for p in placements]

    def census_pairs(self, n: int = 4) -> PairCensusReport:
        """Minimum field of every pair of valid placements, sides included."""
        placements = valid_placements(n)
        if len(placements) < 2:
            return PairCensusReport(n=n, pairs=0, max_min_field=None)
        t2, t3 = self._gauge_tables(placements, 2), self._gauge_tables(placements, 3)
        histogram: Counter = Counter()
        counterexamples: List[List[str]] = []

        for i, j in combinations(range(len(placements)), 2):
            if t2[i] & t2[j]:
                histogram[2] += 1
            elif t3[i] & t3[j]:
                histogram[3] += 1
            else:
                pair = ReceiverSet(n, (placements[i], placements[j]))
                q = self.min_field(pair, gauge=True).q
                histogram[q if q is not None else 0] += 1
                counterexamples.append([str(placements[i]), str(placements[j])])

        total = sum(histogram.values())
        logger.info(f"Pair census TSN({n}): {total} pairs, by min field {dict(histogram)}")
        return PairCensusReport(
            n=n,
            pairs=total,
            by_min_field=dict(sorted(histogram.items())),
            max_min_field=max(histogram, default=None),
            counterexamples=counterexamples,
        )

    def census_triples(self, n: int = 4) -> TripleCensusReport:
        """Triples of valid placements by minimum field, sides included."""
        placements = valid_placements(n)
        t2, t3, t4 = (self._gauge_tables(placements, q) for q in (2, 3, 4))
        histogram: Counter = Counter()
        size = len(placements)

        for i in range(size):
            for j in range(i + 1, size):
                ab2, ab3, ab4 = t2[i] & t2[j], t3[i] & t3[j], t4[i] & t4[j]
                for k in range(j + 1, size):
                    if ab2 & t2[k]:
                        histogram[2] += 1
                    elif ab3 & t3[k]:
                        histogram[3] += 1
                    elif ab4 & t4[k]:
                        histogram[4] += 1
                    else:
                        triple = ReceiverSet(n, (placements[i], placements[j], placements[k]))
                        q = self.min_field(triple, gauge=True).q
                        histogram[q if q is not None else 0] += 1

        total = sum(histogram.values())
        logger.info(f"Triple census TSN({n}): {total} triples, by min field {dict(histogram)}")
        return TripleCensusReport(
            n=n,
            triples=total,
            by_min_field=dict(sorted(histogram.items())),
            min_field_4=histogram[4],
            beyond_4=total - histogram[2] - histogram[3] - histogram[4],
        )


@lru_cache(maxsize=1)
def get_solver() -> Solver:
    """Get or create the shared solver"""
    return Solver()
