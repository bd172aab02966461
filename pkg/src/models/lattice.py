"""
Triangular semilattice network TSN(n).

Vertices are the lattice points (x, y) with x, y >= 0 and x + y < n. Edges run
from (x+1, y) and (x, y+1) into (x, y), i.e. towards the origin. Level i is the
set {x + y = n - i}: level 1 holds the n sources, level n the single bottom
vertex. Vertices are enumerated by increasing level, then increasing x, and
that 1-based index is the vertex identity used everywhere outside this module.

Transfer-coefficient variables: the edge into vertex i + n from its left
parent (x, y+1) is a{i}_1, the one from its right parent (x+1, y) is a{i}_2.
Variables are ordered (i ascending, then j), which is also the coordinate order
of evaluation points.
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.utils.errors import DomainError


class Side(str, Enum):
    """Which parent an edge comes from."""

    LEFT = "left"
    RIGHT = "right"

    @property
    def j(self) -> int:
        return 1 if self is Side.LEFT else 2


@dataclass(frozen=True, order=True)
class Vertex:
    """A lattice point (x, y)."""

    x: int
    y: int

    def __str__(self) -> str:
        return f"({self.x},{self.y})"


@dataclass(frozen=True, order=True)
class EdgeVar:
    """
    Transfer coefficient a{i}_{j}.

    i identifies the head vertex (enumeration index i + n), j is 1 for the
    left-parent edge and 2 for the right-parent edge.
    """

    i: int
    j: int

    @property
    def position(self) -> int:
        """0-based position in the canonical variable order."""
        return 2 * (self.i - 1) + (self.j - 1)

    @classmethod
    def from_position(cls, position: int) -> "EdgeVar":
        return cls(position // 2 + 1, position % 2 + 1)

    def __str__(self) -> str:
        return f"a{self.i}_{self.j}"


@dataclass(frozen=True)
class Triangle:
    """
    A k-triangle: the sub-lattice {(a, b) : a >= x, b >= y, a + b <= x + y + k - 1}
    hanging above its bottom corner (x, y). It is isomorphic to TSN(k).
    """

    corner: Vertex
    k: int

    @property
    def top(self) -> int:
        """Coordinate sum of the triangle's top level."""
        return self.corner.x + self.corner.y + self.k - 1

    @property
    def size(self) -> int:
        return self.k * (self.k + 1) // 2

    def contains(self, v: Vertex) -> bool:
        return v.x >= self.corner.x and v.y >= self.corner.y and v.x + v.y <= self.top

    def is_well_formed(self, n: int) -> bool:
        return self.k >= 1 and self.corner.x >= 0 and self.corner.y >= 0 and self.top < n

    def vertices(self) -> List[Vertex]:
        cx, cy = self.corner.x, self.corner.y
        return [
            Vertex(cx + dx, cy + dy)
            for dx in range(self.k)
            for dy in range(self.k - dx)
        ]

    def extension(self) -> "Triangle":
        """The (k+1)-triangle holding this triangle and every parent of its vertices."""
        return Triangle(self.corner, self.k + 1)

    def __str__(self) -> str:
        return f"{self.k}-triangle@{self.corner}"


class Lattice:
    """
    TSN(n). Immutable once built; use get_lattice(n) to share instances.

    Example:
        >>> lat = get_lattice(3)
        >>> lat.index_of(Vertex(0, 2)), lat.index_of(Vertex(0, 0))
        (1, 6)
    """

    def __init__(self, n: int):
        if n < 1:
            raise DomainError(f"Lattice length must be positive, got {n}")
        self.n = n
        self.size = n * (n + 1) // 2
        self.num_vars = n * (n - 1)
        self._vertices: Tuple[Vertex, ...] = tuple(
            Vertex(x, n - level - x)
            for level in range(1, n + 1)
            for x in range(n - level + 1)
        )
        self._index: Dict[Vertex, int] = {v: idx + 1 for idx, v in enumerate(self._vertices)}

    # ============================================
    # Coordinates and enumeration
    # ============================================

    def contains(self, v: Vertex) -> bool:
        return v.x >= 0 and v.y >= 0 and v.x + v.y < self.n

    def _check(self, v: Vertex) -> None:
        if not self.contains(v):
            raise DomainError(f"Vertex {v} is not in TSN({self.n})")

    def index_of(self, v: Vertex) -> int:
        self._check(v)
        i = self.n - v.x - v.y
        return (i - 1) * self.n - (i - 1) * (i - 2) // 2 + v.x + 1

    def vertex_at(self, index: int) -> Vertex:
        if not 1 <= index <= self.size:
            raise DomainError(f"Index {index} is not in 1..{self.size} for TSN({self.n})")
        return self._vertices[index - 1]

    def vertices(self) -> Tuple[Vertex, ...]:
        return self._vertices

    def level(self, v: Vertex) -> int:
        self._check(v)
        return self.n - v.x - v.y

    def is_source(self, v: Vertex) -> bool:
        return self.level(v) == 1

    def sources(self) -> Tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def left_side(self) -> Tuple[int, ...]:
        return tuple(sorted(self.index_of(Vertex(0, y)) for y in range(self.n)))

    def right_side(self) -> Tuple[int, ...]:
        return tuple(sorted(self.index_of(Vertex(x, 0)) for x in range(self.n)))

    # ============================================
    # Edges
    # ============================================

    def parents(self, v: Vertex) -> Tuple[Optional[Vertex], Optional[Vertex]]:
        """(left parent, right parent); sources have neither."""
        self._check(v)
        if v.x + v.y + 1 < self.n:
            return Vertex(v.x, v.y + 1), Vertex(v.x + 1, v.y)
        return None, None

    def children(self, v: Vertex) -> Tuple[Vertex, ...]:
        self._check(v)
        kids = []
        if v.x > 0:
            kids.append(Vertex(v.x - 1, v.y))
        if v.y > 0:
            kids.append(Vertex(v.x, v.y - 1))
        return tuple(kids)

    def edge_var(self, head: Vertex, side: Side) -> EdgeVar:
        if self.is_source(head):
            raise DomainError(f"Vertex {head} is a source and has no incoming edges")
        return EdgeVar(self.index_of(head) - self.n, Side(side).j)

    def edge_vars(self) -> List[EdgeVar]:
        return [EdgeVar.from_position(pos) for pos in range(self.num_vars)]

    def edges(self) -> List[Tuple[int, int]]:
        """All edges as (parent index, child index), in variable order."""
        out = []
        for head in self._vertices[self.n:]:
            left, right = self.parents(head)
            out.append((self.index_of(left), self.index_of(head)))
            out.append((self.index_of(right), self.index_of(head)))
        return out

    @cached_property
    def edge_positions(self) -> Dict[Tuple[int, int], int]:
        """(parent index, child index) -> variable position."""
        return {edge: pos for pos, edge in enumerate(self.edges())}

    @cached_property
    def child_indices(self) -> Tuple[Tuple[int, ...], ...]:
        """child_indices[idx] lists the children of vertex idx (index 0 unused)."""
        table: List[Tuple[int, ...]] = [()]
        for v in self._vertices:
            table.append(tuple(self.index_of(c) for c in self.children(v)))
        return tuple(table)

    # ============================================
    # Symmetries
    # ============================================

    def rotate(self, v: Vertex) -> Vertex:
        self._check(v)
        return Vertex(self.n - 1 - v.x - v.y, v.x)

    def reflect(self, v: Vertex) -> Vertex:
        self._check(v)
        return Vertex(v.y, v.x)

    def rotate_indices(self, labels: Iterable[int]) -> Tuple[int, ...]:
        return tuple(sorted(self.index_of(self.rotate(self.vertex_at(i))) for i in labels))

    def reflect_indices(self, labels: Iterable[int]) -> Tuple[int, ...]:
        return tuple(sorted(self.index_of(self.reflect(self.vertex_at(i))) for i in labels))

    def orbit(self, labels: Iterable[int]) -> List[Tuple[int, ...]]:
        """Distinct images of a vertex set under the group generated by rotate and reflect."""
        start = tuple(sorted(labels))
        images = []
        current = start
        for _ in range(3):
            images.append(current)
            images.append(self.reflect_indices(current))
            current = self.rotate_indices(current)
        seen: Dict[FrozenSet[int], None] = {}
        for image in images:
            seen.setdefault(frozenset(image), None)
        return [tuple(sorted(s)) for s in seen]

    # ============================================
    # Triangles
    # ============================================

    def triangles(self, k: Optional[int] = None) -> List[Triangle]:
        lengths = [k] if k is not None else range(1, self.n + 1)
        return [
            Triangle(Vertex(x, s - x), length)
            for length in lengths
            for s in range(self.n - length + 1)
            for x in range(s + 1)
        ]

    def __repr__(self) -> str:
        return f"Lattice(n={self.n})"


@lru_cache(maxsize=None)
def get_lattice(n: int) -> Lattice:
    """Get or create the shared TSN(n) instance"""
    return Lattice(n)


# Helper functions


def index_of(v: Vertex, n: int) -> int:
    return get_lattice(n).index_of(v)


def parents(v: Vertex, n: int) -> Tuple[Optional[Vertex], Optional[Vertex]]:
    return get_lattice(n).parents(v)


def edge_var(head: Vertex, side: Side, n: int) -> EdgeVar:
    return get_lattice(n).edge_var(head, side)


def rotate(v: Vertex, n: int) -> Vertex:
    return get_lattice(n).rotate(v)


def reflect(v: Vertex, n: int) -> Vertex:
    return get_lattice(n).reflect(v)


def triangles(n: int) -> List[Triangle]:
    return get_lattice(n).triangles()
