"""
Placement Validator Tool

Decides whether a receiver placement is valid, i.e. whether n vertex-disjoint
paths lead from the sources to its labels.

Two independent deciders:
- the triangle criterion: valid iff no k-triangle holds more than k labels
- a max-flow oracle (networkx, unit vertex capacities) that also returns a
  witness path system
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from src.models.lattice import Triangle, get_lattice
from src.models.placement import Placement

logger = logging.getLogger(__name__)

_SOURCE = "S"
_SINK = "T"


@dataclass
class DisjointPathsResult:
    """Result of the flow oracle."""

    placement: Placement
    exists: bool
    paths: List[List[int]] = field(default_factory=list)
    flow_value: int = 0


def _label_counts(p: Placement) -> List[Tuple[Triangle, int]]:
    vertices = p.vertices()
    return [(t, sum(1 for v in vertices if t.contains(v))) for t in p.lattice.triangles()]


def overcrowded_triangles(p: Placement) -> List[Tuple[Triangle, int]]:
    """Every triangle holding more labels than its length, with its label count."""
    return [(t, count) for t, count in _label_counts(p) if count > t.k]


def crowded_triangles(p: Placement) -> List[Tuple[Triangle, int]]:
    """Triangles holding exactly as many labels as their length."""
    return [(t, count) for t, count in _label_counts(p) if count == t.k]


def first_violation(p: Placement) -> Optional[Tuple[Triangle, int]]:
    """The smallest overcrowded triangle, if any."""
    violations = overcrowded_triangles(p)
    if not violations:
        return None
    return min(violations, key=lambda tc: (tc[0].k, tc[0].corner.x + tc[0].corner.y, tc[0].corner.x))


def is_distributed(p: Placement) -> bool:
    vertices = p.vertices()
    for t in p.lattice.triangles():
        if sum(1 for v in vertices if t.contains(v)) > t.k:
            return False
    return True


def is_valid(p: Placement) -> bool:
    """A placement is valid exactly when it is distributed."""
    return is_distributed(p)


def _flow_graph(n: int, labels: Sequence[int]) -> nx.DiGraph:
    lat = get_lattice(n)
    g = nx.DiGraph()
    g.add_nodes_from(range(1, lat.size + 1))
    g.add_edges_from(lat.edges())
    g.add_edges_from((_SOURCE, s) for s in lat.sources())
    g.add_edges_from((label, _SINK) for label in labels)
    return g


def disjoint_paths_exist(p: Placement) -> DisjointPathsResult:
    """
    Max-flow oracle with unit vertex capacities.

    By Menger's theorem the number of internally vertex-disjoint paths from a
    super-source (feeding every source) to a super-sink (fed by every label)
    is the max flow; the placement is valid iff it reaches n.
    """
    g = _flow_graph(p.n, p.labels)
    try:
        raw = list(nx.node_disjoint_paths(g, _SOURCE, _SINK))
    except nx.NetworkXNoPath:
        raw = []

    paths = [[v for v in path if v not in (_SOURCE, _SINK)] for path in raw]
    exists = len(paths) == p.n
    logger.debug(f"Flow oracle {{{p}}}: {len(paths)}/{p.n} disjoint paths")
    return DisjointPathsResult(
        placement=p,
        exists=exists,
        paths=sorted(paths) if exists else [],
        flow_value=len(paths),
    )


def check_path_system(p: Placement, paths: Sequence[Sequence[int]]) -> bool:
    """
    Check a witness: one path per source, lattice edges only, endpoints equal
    to the labels, pairwise vertex-disjoint.
    """
    lat = p.lattice
    if len(paths) != p.n or any(len(path) == 0 for path in paths):
        return False

    starts = sorted(path[0] for path in paths)
    ends = sorted(path[-1] for path in paths)
    if starts != list(lat.sources()) or ends != list(p.labels):
        return False

    edges = lat.edge_positions
    for path in paths:
        for u, v in zip(path, path[1:]):
            if (u, v) not in edges:
                return False

    used = [v for path in paths for v in path]
    return len(used) == len(set(used))
