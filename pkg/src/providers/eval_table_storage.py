"""
EvalTable Storage - Disk cache of per-placement evaluation bitmaps

One file per (n, placement, q, search space). Layout, little-endian:

    magic      4s   b"TSNE"
    version    H
    n          B
    q          B
    kind       B    0 = F_q^k, 1 = nonzero points, 2 = gauge-fixed nonzero points
    labels     B    count, followed by that many H
    var_hash   32s  sha256 of variable order, reduction polynomial, pinned variables
    npoints    Q
    bitmap     ceil(npoints / 8) bytes

Any header mismatch is treated as a cache miss, never as data.
"""

import hashlib
import logging
import os
import struct
from pathlib import Path
from typing import Optional, Sequence

from src.models.lattice import get_lattice
from src.tools.finite_field import Field
from src.tools.point_space import gauge_tree_positions
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

MAGIC = b"TSNE"
VERSION = 1
_HEAD = struct.Struct("<4sHBBBB")
_KINDS = {"all": 0, "nz": 1, "gauge": 2}
_TAIL = struct.Struct("<32sQ")


def variable_order_hash(n: int, field: Field, kind: str) -> bytes:
    """Digest binding a bitmap to the variable order, the field construction and the pinned variables."""
    order = ",".join(str(v) for v in get_lattice(n).edge_vars())
    pinned = gauge_tree_positions(n) if kind == "gauge" else ()
    key = f"{order}|q={field.q}|reduction={field.reduction}|pinned={pinned}"
    return hashlib.sha256(key.encode()).digest()


class EvalTableStorage:
    """
    Store and reload EvalTable bitmaps under cache_dir/evaltables/.

    Writes go to a temporary file first and are renamed into place.
    """

    def __init__(self, cache_dir: str | Path):
        self.root = Path(cache_dir) / "evaltables"

    def path_for(self, n: int, labels: Sequence[int], q: int, kind: str) -> Path:
        name = "-".join(str(label) for label in labels)
        return self.root / f"n{n}" / f"q{q}_{kind}" / f"{name}.bin"

    def _header(self, n: int, labels: Sequence[int], field: Field, kind: str, npoints: int) -> bytes:
        if kind not in _KINDS:
            raise DomainError(f"Unknown point space kind '{kind}'")
        return (
            _HEAD.pack(MAGIC, VERSION, n, field.q, _KINDS[kind], len(labels))
            + struct.pack(f"<{len(labels)}H", *labels)
            + _TAIL.pack(variable_order_hash(n, field, kind), npoints)
        )

    def save(self, n: int, labels: Sequence[int], field: Field, kind: str, npoints: int, bits: int) -> Path:
        """Write one bitmap; returns the file path."""
        path = self.path_for(n, labels, field.q, kind)
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = self._header(n, labels, field, kind, npoints) + bits.to_bytes((npoints + 7) // 8, "little")
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_bytes(payload)
        tmp.replace(path)
        logger.debug(f"Cached EvalTable {path}")
        return path

    def load(self, n: int, labels: Sequence[int], field: Field, kind: str, npoints: int) -> Optional[int]:
        """The cached bitmap, or None on a miss or any header mismatch."""
        path = self.path_for(n, labels, field.q, kind)
        if not path.exists():
            return None

        try:
            data = path.read_bytes()
        except OSError as e:
            logger.warning(f"Cannot read cached EvalTable {path}: {e}")
            return None

        header = self._header(n, labels, field, kind, npoints)
        nbytes = (npoints + 7) // 8
        if len(data) != len(header) + nbytes or data[: len(header)] != header:
            logger.warning(f"Stale or corrupt EvalTable {path}, recomputing")
            return None
        return int.from_bytes(data[len(header):], "little")

    def clear(self) -> int:
        """Delete every cached bitmap; returns the number of files removed."""
        removed = 0
        if self.root.exists():
            for path in self.root.rglob("*.bin"):
                path.unlink()
                removed += 1
        return removed
