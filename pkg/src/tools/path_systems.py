"""
Path systems and minor polynomials.

The minor of a placement is the maximal minor of the labeling matrix at the
placement's columns. It equals the signed sum, over every system of
vertex-disjoint source-to-label paths, of the product of the edge variables
the system uses. Rows are sources in index order, columns are labels in
ascending index order; a system's sign is the parity of the matching.

Besides the path enumeration this module holds two independent oracles:
- all_systems: every (not necessarily disjoint) path tuple, whose signed sum
  must collapse to the same polynomial
- symbolic_det: the labeling matrix built column by column with sympy and
  expanded directly
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import sympy as sp

from src.config import get_settings
from src.helpers.census import iter_valid_placements
from src.models.lattice import Lattice, get_lattice
from src.models.placement import Placement
from src.models.polynomial import MinorPolynomial, positions_mask
from src.schemas.run_schemas import TermProfile
from src.utils.errors import BudgetExceededError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathSystem:
    """
    One path per source, source i ending at label column sigma[i].

    positions lists the variables used, sorted, with repetitions when paths
    of a non-disjoint tuple share an edge.
    """

    paths: Tuple[Tuple[int, ...], ...]
    sigma: Tuple[int, ...]
    sign: int
    positions: Tuple[int, ...]

    @property
    def is_disjoint(self) -> bool:
        used = [v for path in self.paths for v in path]
        return len(used) == len(set(used))

    @property
    def mask(self) -> int:
        return positions_mask(self.positions)


def permutation_sign(sigma: Sequence[int]) -> int:
    inversions = sum(1 for a in range(len(sigma)) for b in range(a + 1, len(sigma)) if sigma[a] > sigma[b])
    return -1 if inversions % 2 else 1


def _reaches(lat: Lattice, u: int, w: int) -> bool:
    vu, vw = lat.vertex_at(u), lat.vertex_at(w)
    return vw.x <= vu.x and vw.y <= vu.y


def _path_positions(lat: Lattice, path: Sequence[int]) -> List[int]:
    return [lat.edge_positions[(u, v)] for u, v in zip(path, path[1:])]


def _paths_avoiding(lat: Lattice, u: int, target: int, used: Set[int]) -> Iterator[List[int]]:
    """Downward paths u -> target whose vertices after u avoid `used`."""
    if u == target:
        yield [u]
        return
    for c in lat.child_indices[u]:
        if c in used or not _reaches(lat, c, target):
            continue
        for tail in _paths_avoiding(lat, c, target, used):
            yield [u] + tail


@lru_cache(maxsize=None)
def all_paths(n: int, source: int, target: int) -> Tuple[Tuple[int, ...], ...]:
    """Every downward path between two vertices of TSN(n)."""
    lat = get_lattice(n)
    if not _reaches(lat, source, target):
        return ()
    return tuple(tuple(path) for path in _paths_avoiding(lat, source, target, set()))


# ============================================
# Vertex-disjoint systems
# ============================================


def disjoint_systems(p: Placement) -> List[PathSystem]:
    """
    Every vertex-disjoint path system of a placement.

    Backtracks over the sources in index order, letting each choose an unused
    label and a path avoiding the vertices already taken. Invalid placements
    have none.

    Example:
        >>> len(disjoint_systems(Placement.parse("1,4,5,10", n=4)))
        3
    """
    lat = p.lattice
    labels = p.labels
    column = {label: col for col, label in enumerate(labels)}
    sources = lat.sources()
    systems: List[PathSystem] = []

    def backtrack(i: int, used: Set[int], chosen: List[List[int]], sigma: List[int]) -> None:
        if i == len(sources):
            positions = sorted(pos for path in chosen for pos in _path_positions(lat, path))
            systems.append(
                PathSystem(
                    paths=tuple(tuple(path) for path in chosen),
                    sigma=tuple(sigma),
                    sign=permutation_sign(sigma),
                    positions=tuple(positions),
                )
            )
            return

        s = sources[i]
        for label in labels:
            if column[label] in sigma or not _reaches(lat, s, label):
                continue
            for path in _paths_avoiding(lat, s, label, used):
                used.update(path)
                chosen.append(path)
                sigma.append(column[label])
                backtrack(i + 1, used, chosen, sigma)
                sigma.pop()
                chosen.pop()
                used.difference_update(path)

    backtrack(0, set(), [], [])
    logger.debug(f"Placement {{{p}}}: {len(systems)} disjoint path systems")
    return systems


def minor(p: Placement) -> MinorPolynomial:
    """Signed sum over the vertex-disjoint path systems of a placement."""
    terms: Dict[int, int] = {}
    for system in disjoint_systems(p):
        mask = system.mask
        if mask in terms:
            raise DomainError(f"Two disjoint systems of {{{p}}} share the edge set {system.positions}")
        terms[mask] = system.sign
    return MinorPolynomial(p.n, terms, label=str(p))


# ============================================
# Oracles
# ============================================


def all_systems(p: Placement, limit: Optional[int] = None) -> List[PathSystem]:
    """
    Every tuple of source-to-label paths over every matching, disjoint or not.

    Args:
        p: Placement (validity not required)
        limit: Largest number of tuples to build (default: all_systems_limit)

    Raises:
        BudgetExceededError: When the number of tuples exceeds the limit
    """
    limit = limit if limit is not None else get_settings().all_systems_limit
    lat = p.lattice
    sources = lat.sources()
    labels = p.labels

    total = 0
    for sigma in permutations(range(len(labels))):
        count = 1
        for s, col in zip(sources, sigma):
            count *= len(all_paths(p.n, s, labels[col]))
        total += count
    if total > limit:
        raise BudgetExceededError("path tuples", total, limit, hint="raise all_systems_limit")

    systems: List[PathSystem] = []
    for sigma in permutations(range(len(labels))):
        choices = [all_paths(p.n, s, labels[col]) for s, col in zip(sources, sigma)]
        sign = permutation_sign(sigma)
        for paths in product(*choices):
            positions = sorted(pos for path in paths for pos in _path_positions(lat, path))
            systems.append(PathSystem(paths=tuple(paths), sigma=tuple(sigma), sign=sign, positions=tuple(positions)))
    return systems


def signed_sum(systems: Sequence[PathSystem]) -> Dict[Tuple[int, ...], int]:
    """Signed sum of path tuples keyed by variable multiset; zero coefficients dropped."""
    acc: Counter = Counter()
    for system in systems:
        acc[system.positions] += system.sign
    return {key: c for key, c in acc.items() if c != 0}


def cancellation_holds(p: Placement, limit: Optional[int] = None) -> bool:
    """The signed sum over all path tuples equals the minor."""
    expected = {positions: c for positions, c in minor(p)}
    return signed_sum(all_systems(p, limit)) == expected


@lru_cache(maxsize=None)
def edge_symbols(n: int) -> Tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(str(var)) for var in get_lattice(n).edge_vars())


def labeling_matrix(n: int) -> sp.Matrix:
    """
    Symbolic labeling matrix of TSN(n), one column per vertex.

    Source columns form the standard basis; every other column is the
    variable-weighted sum of its two parents' columns.
    """
    lat = get_lattice(n)
    symbols = edge_symbols(n)
    columns: List[sp.Matrix] = [sp.zeros(n, 1)]
    for s in lat.sources():
        col = sp.zeros(n, 1)
        col[s - 1] = 1
        columns.append(col)
    for idx in range(n + 1, lat.size + 1):
        left, right = lat.parents(lat.vertex_at(idx))
        base = 2 * (idx - n - 1)
        columns.append(
            symbols[base] * columns[lat.index_of(left)] + symbols[base + 1] * columns[lat.index_of(right)]
        )
    return sp.Matrix.hstack(*columns[1:])


def to_sympy(poly: MinorPolynomial) -> sp.Expr:
    symbols = edge_symbols(poly.n)
    return sp.Add(*(coeff * sp.Mul(*(symbols[pos] for pos in positions)) for positions, coeff in poly))


def symbolic_det(p: Placement) -> MinorPolynomial:
    """Expand the placement's maximal minor of the labeling matrix with sympy."""
    if p.n == 1:
        return MinorPolynomial.one(1)
    matrix = labeling_matrix(p.n)
    sub = matrix.extract(list(range(p.n)), [label - 1 for label in p.labels])
    det = sp.expand(sub.det(method="berkowitz"))
    symbols = edge_symbols(p.n)
    terms: Dict[int, int] = {}
    for exponents, coeff in sp.Poly(det, *symbols).terms():
        if coeff == 0:
            continue
        if any(e > 1 for e in exponents):
            raise DomainError(f"Minor of {{{p}}} is not multilinear")
        mask = positions_mask(pos for pos, e in enumerate(exponents) if e)
        terms[mask] = int(coeff)
    return MinorPolynomial(p.n, terms, label=str(p))


# ============================================
# Side receivers and profiles
# ============================================


def side_product(n: int) -> MinorPolynomial:
    return minor(Placement.left_side(n)) * minor(Placement.right_side(n))


def side_product_check(n: int) -> bool:
    """
    The left-side and right-side minors multiply to a single monomial that
    holds every edge variable exactly once, with coefficient +1 or -1.
    """
    try:
        prod = side_product(n)
    except DomainError:
        return False
    if not prod.is_monomial():
        return False
    (mask, coeff), = prod.terms.items()
    full = (1 << get_lattice(n).num_vars) - 1
    return mask == full and abs(coeff) == 1


def term_profile(n: int) -> TermProfile:
    """Number of valid placements by number of minor terms."""
    histogram = Counter(minor(p).term_count for p in iter_valid_placements(n))
    return TermProfile(n=n, by_terms=dict(sorted(histogram.items())))
