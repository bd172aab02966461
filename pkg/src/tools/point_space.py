"""
Point streams over F_q^k and vectorised evaluation.

Points are enumerated in mixed radix over the free variables, the lowest free
position being the most significant digit. In nonzero mode every digit d
stands for the element d + 1, so the stream covers (F_q*)^k; otherwise it
covers F_q^k. Stream positions are the bit positions of EvalTables, so this
order must never change.

Gauge-fixed spaces pin the variables of a spanning tree to 1. Rescaling every
edge (u, v) by c_v / c_u multiplies each minor by the same nonzero constant,
and any nonzero point can be rescaled so that the tree edges become 1; the
zero pattern of a set of minors over (F_q*)^k is therefore decided on the
(q-1)^((n-1)(n-2)/2) points left free.
"""

import logging
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.config import get_settings
from src.models.lattice import get_lattice
from src.models.polynomial import MinorPolynomial, mask_positions
from src.tools.finite_field import Field
from src.utils.errors import BudgetExceededError, DomainError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def gauge_tree_positions(n: int) -> Tuple[int, ...]:
    """Variable positions of a spanning tree of TSN(n) (lowest positions first)."""
    lat = get_lattice(n)
    g = nx.Graph()
    g.add_nodes_from(range(1, lat.size + 1))
    for (u, v), pos in lat.edge_positions.items():
        g.add_edge(u, v, weight=pos, position=pos)
    tree = nx.minimum_spanning_tree(g, algorithm="kruskal")
    return tuple(sorted(data["position"] for _, _, data in tree.edges(data=True)))


class PointSpace:
    """
    (F_q*)^k or F_q^k in a fixed order, optionally with some positions pinned to 1.

    Example:
        >>> space = PointSpace(make_field(3), k=12)
        >>> space.total
        4096
        >>> space.point_at(0)
        (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1)
    """

    def __init__(self, field: Field, k: int, nonzero: bool = True, fixed: Sequence[int] = ()):
        if k < 0:
            raise DomainError(f"Variable count must be non-negative, got {k}")
        if any(not 0 <= pos < k for pos in fixed):
            raise DomainError(f"Fixed positions {tuple(fixed)} outside 0..{k - 1}")
        self.field = field
        self.k = k
        self.nonzero = nonzero
        self.fixed = tuple(sorted(set(fixed)))
        self.free = tuple(pos for pos in range(k) if pos not in set(self.fixed))
        self.radix = field.q - 1 if nonzero else field.q
        self.offset = 1 if nonzero else 0
        self.total = self.radix ** len(self.free)

    @classmethod
    def gauge_fixed(cls, field: Field, n: int) -> "PointSpace":
        """(F_q*)^k with the spanning-tree variables of TSN(n) pinned to 1."""
        return cls(field, n * (n - 1), nonzero=True, fixed=gauge_tree_positions(n))

    @property
    def kind(self) -> str:
        if self.fixed:
            return "gauge"
        return "nz" if self.nonzero else "all"

    def check_budget(self, max_points: Optional[int] = None) -> None:
        """Raise when the space is too large for an exhaustive scan."""
        allowed = max_points if max_points is not None else get_settings().max_exhaustive_points
        if self.total > allowed:
            raise BudgetExceededError(
                f"exhaustive scan of F_{self.field.q}^{len(self.free)}",
                self.total,
                allowed,
                hint="use randomized mode or raise --max-points",
            )

    def point_at(self, index: int) -> Tuple[int, ...]:
        if not 0 <= index < self.total:
            raise DomainError(f"Point index {index} outside 0..{self.total - 1}")
        point = [1] * self.k
        for pos in reversed(self.free):
            index, digit = divmod(index, self.radix)
            point[pos] = digit + self.offset
        return tuple(point)

    def index_of(self, point: Sequence[int]) -> int:
        if len(point) != self.k:
            raise DomainError(f"Point has {len(point)} coordinates, expected {self.k}")
        if any(int(point[pos]) != 1 for pos in self.fixed):
            raise DomainError("Point does not have its gauge-fixed coordinates set to 1")
        index = 0
        for pos in self.free:
            digit = int(point[pos]) - self.offset
            if not 0 <= digit < self.radix:
                raise DomainError(f"Coordinate {point[pos]} is outside this point space")
            index = index * self.radix + digit
        return index

    def block(self, start: int, stop: int) -> np.ndarray:
        """Coordinates of points start..stop-1 as a (k, stop - start) uint8 array."""
        idx = np.arange(start, stop, dtype=np.int64)
        coords = np.ones((self.k, stop - start), dtype=np.uint8)
        for pos in reversed(self.free):
            coords[pos] = idx % self.radix + self.offset
            idx //= self.radix
        return coords

    def chunks(
        self,
        chunk_size: Optional[int] = None,
        start: int = 0,
        stop: Optional[int] = None,
    ) -> Iterator[Tuple[int, np.ndarray]]:
        """(start, coordinates) blocks; chunk_size is rounded down to a multiple of 8."""
        size = chunk_size if chunk_size is not None else get_settings().chunk_size
        size = max(8, size - size % 8)
        stop = self.total if stop is None else min(stop, self.total)
        for lo in range(start, stop, size):
            yield lo, self.block(lo, min(lo + size, stop))

    def iter_points(self) -> Iterator[Tuple[int, ...]]:
        for _, coords in self.chunks():
            for column in coords.T:
                yield tuple(int(v) for v in column)

    def random_block(self, rng: np.random.Generator, count: int) -> np.ndarray:
        coords = np.ones((self.k, count), dtype=np.uint8)
        for pos in self.free:
            coords[pos] = rng.integers(0, self.radix, size=count) + self.offset
        return coords


def iterate_nonzero_points(field: Field, k: int, max_points: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Stream (F_q*)^k in EvalTable order; raises BudgetExceededError when too large."""
    space = PointSpace(field, k, nonzero=True)
    space.check_budget(max_points)
    return space.iter_points()


def evaluate_batch(poly: MinorPolynomial, coords: np.ndarray, field: Field) -> np.ndarray:
    """Values of a polynomial at every column of a (k, m) coordinate block."""
    total = np.zeros(coords.shape[1], dtype=np.uint8)
    for mask, coeff in poly.terms.items():
        term = np.full(coords.shape[1], field.from_int(coeff), dtype=np.uint8)
        for pos in mask_positions(mask):
            term = field.mul[term, coords[pos]]
        total = field.add[total, term]
    return total


def bitmap_bytes(
    poly: MinorPolynomial,
    space: PointSpace,
    start: int = 0,
    stop: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> bytes:
    """Packed nonzero flags of positions start..stop-1; start must be a multiple of 8."""
    if start % 8:
        raise DomainError(f"Bitmap ranges must start on a byte boundary, got {start}")
    parts = []
    for _, coords in space.chunks(chunk_size, start, stop):
        nonzero = evaluate_batch(poly, coords, space.field) != 0
        parts.append(np.packbits(nonzero, bitorder="little").tobytes())
    return b"".join(parts)


def nonzero_bitmap(poly: MinorPolynomial, space: PointSpace, chunk_size: Optional[int] = None) -> int:
    """
    Bitmap over the stream: bit b is set iff poly is nonzero at point b.

    Packed little-endian, so bit b of the returned int is stream position b.
    """
    return int.from_bytes(bitmap_bytes(poly, space, chunk_size=chunk_size), "little")
