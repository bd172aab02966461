"""
Receiver placements: the n vertices of TSN(n) labeled by one receiver.
"""

from dataclasses import dataclass
from typing import List, Tuple

from src.models.lattice import Lattice, Vertex, get_lattice
from src.utils.errors import DomainError


@dataclass(frozen=True, order=True)
class Placement:
    """
    A sorted set of n distinct enumeration indices.

    Example:
        >>> p = Placement.parse("10,1,5,8", n=4)
        >>> str(p)
        '1,5,8,10'
    """

    n: int
    labels: Tuple[int, ...]

    def __post_init__(self):
        labels = tuple(sorted(self.labels))
        object.__setattr__(self, "labels", labels)
        size = self.n * (self.n + 1) // 2
        if self.n < 1:
            raise DomainError(f"Lattice length must be positive, got {self.n}")
        if len(set(labels)) != len(labels):
            raise DomainError(f"Placement {{{self}}} repeats a label")
        if len(labels) != self.n:
            raise DomainError(f"Placement {{{self}}} has {len(labels)} labels, TSN({self.n}) needs {self.n}")
        if labels and (labels[0] < 1 or labels[-1] > size):
            raise DomainError(f"Placement {{{self}}} has labels outside 1..{size}")

    @classmethod
    def parse(cls, text: str, n: int) -> "Placement":
        """Parse a comma-separated index list such as "1,4,5,10"."""
        try:
            labels = tuple(int(part) for part in text.replace(" ", "").split(",") if part)
        except ValueError as e:
            raise DomainError(f"Cannot parse placement '{text}': {e}") from e
        return cls(n, labels)

    @classmethod
    def left_side(cls, n: int) -> "Placement":
        return cls(n, get_lattice(n).left_side())

    @classmethod
    def right_side(cls, n: int) -> "Placement":
        return cls(n, get_lattice(n).right_side())

    @classmethod
    def source_level(cls, n: int) -> "Placement":
        return cls(n, get_lattice(n).sources())

    @property
    def lattice(self) -> Lattice:
        return get_lattice(self.n)

    def vertices(self) -> List[Vertex]:
        lat = self.lattice
        return [lat.vertex_at(i) for i in self.labels]

    def rotate(self) -> "Placement":
        return Placement(self.n, self.lattice.rotate_indices(self.labels))

    def reflect(self) -> "Placement":
        return Placement(self.n, self.lattice.reflect_indices(self.labels))

    def orbit(self) -> List["Placement"]:
        return [Placement(self.n, image) for image in self.lattice.orbit(self.labels)]

    def __str__(self) -> str:
        return ",".join(str(i) for i in self.labels)
