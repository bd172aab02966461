"""
Census of valid receiver placements.

Placements are enumerated in lexicographic index order; a partial placement
that already overcrowds a triangle is cut, so only valid placements are ever
completed. invalid = C(n(n+1)/2, n) - valid.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from math import comb
from typing import Iterator, List, Optional, Tuple

from src.config import get_settings
from src.models.lattice import get_lattice
from src.models.placement import Placement
from src.schemas.run_schemas import CensusRow
from src.utils.errors import BudgetExceededError, DomainError

logger = logging.getLogger(__name__)


class CensusTables:
    """
    Per-vertex triangle memberships used by the pruned enumeration.

    Only triangles with 2 <= k < n can be overcrowded by an n-subset of
    distinct vertices, so the others are left out.
    """

    def __init__(self, n: int):
        lat = get_lattice(n)
        self.n = n
        self.size = lat.size
        tris = [t for t in lat.triangles() if 1 < t.k < n]
        self.caps: List[int] = [t.k for t in tris]
        memberships: List[List[int]] = [[] for _ in range(self.size + 1)]
        for tid, t in enumerate(tris):
            for v in t.vertices():
                memberships[lat.index_of(v)].append(tid)
        self.vertex_triangles: List[Tuple[int, ...]] = [tuple(m) for m in memberships]


@lru_cache(maxsize=None)
def get_census_tables(n: int) -> CensusTables:
    return CensusTables(n)


def _extend(
    tables: CensusTables,
    counts: List[int],
    chosen: List[int],
    start: int,
    remaining: int,
) -> Iterator[Tuple[int, ...]]:
    caps = tables.caps
    last = tables.size - remaining + 1
    for v in range(start, last + 1):
        tris = tables.vertex_triangles[v]
        if any(counts[t] >= caps[t] for t in tris):
            continue
        for t in tris:
            counts[t] += 1
        chosen.append(v)
        if remaining == 1:
            yield tuple(chosen)
        else:
            yield from _extend(tables, counts, chosen, v + 1, remaining - 1)
        chosen.pop()
        for t in tris:
            counts[t] -= 1


def iter_valid_labels(n: int, first: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """
    Valid label tuples of TSN(n) in lexicographic order.

    Args:
        n: Lattice length
        first: Restrict to placements whose smallest label is `first`
    """
    tables = get_census_tables(n)
    counts = [0] * len(tables.caps)
    if first is None:
        yield from _extend(tables, counts, [], 1, n)
        return

    if not 1 <= first <= tables.size - n + 1:
        return
    tris = tables.vertex_triangles[first]
    for t in tris:
        counts[t] += 1
    if n == 1:
        yield (first,)
    else:
        yield from _extend(tables, counts, [first], first + 1, n - 1)


def iter_valid_placements(n: int) -> Iterator[Placement]:
    for labels in iter_valid_labels(n):
        yield Placement(n, labels)


def valid_placements(n: int) -> List[Placement]:
    return list(iter_valid_placements(n))


def _count_branch(args: Tuple[int, int]) -> int:
    n, first = args
    return sum(1 for _ in iter_valid_labels(n, first))


def census(n: int, jobs: int = 1, extended: bool = False) -> CensusRow:
    """
    Count valid and invalid placements of TSN(n).

    Args:
        n: Lattice length
        jobs: Worker processes; branches on the smallest label are distributed
        extended: Allow n above the configured census_max_n

    Returns:
        CensusRow with valid + invalid = C(n(n+1)/2, n)
    """
    if n < 1:
        raise DomainError(f"Lattice length must be positive, got {n}")
    settings = get_settings()
    if n > settings.census_max_n and not extended:
        raise BudgetExceededError(
            "census length",
            n,
            settings.census_max_n,
            hint="pass extended=True (--extended) for long runs",
        )

    size = n * (n + 1) // 2
    total = comb(size, n)
    branches = [(n, first) for first in range(1, size - n + 2)]
    logger.info(f"Census TSN({n}): {total} subsets, {len(branches)} branches, jobs={jobs}")

    if jobs > 1 and len(branches) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            valid = sum(pool.map(_count_branch, branches))
    else:
        valid = sum(_count_branch(b) for b in branches)

    logger.info(f"Census TSN({n}): {valid} valid, {total - valid} invalid")
    return CensusRow(n=n, valid=valid, invalid=total - valid, total=total)
