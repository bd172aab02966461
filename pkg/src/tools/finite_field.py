"""
Finite Field Tool

Small fields F_q (q <= 16) as full lookup tables, built once with galois and
checked against the field axioms.

Elements are the integers 0..q-1 encoding polynomial coefficients in base p,
so over F_4 = F_2[a]/(a^2 + a + 1) the elements are 0, 1, a = 2, a + 1 = 3.
"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import galois
import numpy as np

from src.models.polynomial import MinorPolynomial, mask_positions
from src.utils.errors import DomainError

logger = logging.getLogger(__name__)

# Reduction polynomials, coefficients from the highest degree down
REDUCTION_POLYNOMIALS: Dict[int, List[int]] = {
    4: [1, 1, 1],  # a^2 + a + 1
    8: [1, 0, 1, 1],  # a^3 + a + 1
    9: [1, 2, 2],  # a^2 + 2a + 2
    16: [1, 0, 0, 1, 1],  # a^4 + a + 1
}

SUPPORTED_ORDERS = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


class Field:
    """
    F_q with add / mul / neg / inv tables (numpy uint8).

    Example:
        >>> f = make_field(4)
        >>> f.mul_e(2, 3)
        1
        >>> f.element_str(3)
        'a+1'
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_ORDERS:
            if q < 2 or not galois.is_prime_power(q):
                raise DomainError(f"q={q} is not a prime power")
            raise DomainError(f"F_{q} is not supported (supported: {', '.join(map(str, SUPPORTED_ORDERS))})")

        self.q = q
        self.reduction: Optional[List[int]] = REDUCTION_POLYNOMIALS.get(q)
        if self.reduction is not None:
            self.gf = galois.GF(q, irreducible_poly=self.reduction)
        else:
            self.gf = galois.GF(q)
        self.p = int(self.gf.characteristic)
        self.m = int(self.gf.degree)

        x = self.gf.elements
        self.add = (x[:, None] + x[None, :]).view(np.ndarray).astype(np.uint8)
        self.mul = (x[:, None] * x[None, :]).view(np.ndarray).astype(np.uint8)
        self.neg = (-x).view(np.ndarray).astype(np.uint8)
        self.inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            self.inv[a] = int(np.nonzero(self.mul[a] == 1)[0][0])

        self._check_axioms()
        logger.debug(f"Built F_{q} (p={self.p}, m={self.m}, reduction={self.reduction})")

    # ============================================
    # Verification
    # ============================================

    def _check_axioms(self) -> None:
        q = self.q
        e = np.arange(q)
        a, b, c = e[:, None, None], e[None, :, None], e[None, None, :]
        add, mul = self.add, self.mul
        checks = {
            "additive identity": np.array_equal(add[0], e),
            "multiplicative identity": np.array_equal(mul[1], e),
            "commutativity": np.array_equal(add, add.T) and np.array_equal(mul, mul.T),
            "additive associativity": np.array_equal(add[add[a, b], c], add[a, add[b, c]]),
            "multiplicative associativity": np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]),
            "distributivity": np.array_equal(mul[a, add[b, c]], add[mul[a, b], mul[a, c]]),
            "additive inverses": bool(np.all(add[e, self.neg] == 0)),
            "multiplicative inverses": bool(np.all(mul[e[1:], self.inv[1:]] == 1)),
            "frobenius": all(self.pow_e(int(v), q) == int(v) for v in e),
        }
        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            raise DomainError(f"F_{q} tables fail: {', '.join(failed)}")

    # ============================================
    # Element arithmetic
    # ============================================

    def _element(self, e: int) -> int:
        if not 0 <= e < self.q:
            raise DomainError(f"{e} is not an element of F_{self.q}")
        return e

    def add_e(self, a: int, b: int) -> int:
        return int(self.add[self._element(a), self._element(b)])

    def mul_e(self, a: int, b: int) -> int:
        return int(self.mul[self._element(a), self._element(b)])

    def neg_e(self, a: int) -> int:
        return int(self.neg[self._element(a)])

    def inv_e(self, a: int) -> int:
        if self._element(a) == 0:
            raise DomainError("0 has no multiplicative inverse")
        return int(self.inv[a])

    def pow_e(self, a: int, k: int) -> int:
        result = 1
        for _ in range(k):
            result = int(self.mul[result, a])
        return result

    def from_int(self, c: int) -> int:
        """Image of an integer coefficient in the prime subfield."""
        return c % self.p

    def element_str(self, e: int) -> str:
        """Polynomial form of an element, e.g. 'a+1' in F_4."""
        self._element(e)
        if self.m == 1 or e < self.p:
            return str(e)
        parts = []
        for degree in range(self.m - 1, -1, -1):
            coeff = (e // self.p**degree) % self.p
            if coeff == 0:
                continue
            if degree == 0:
                parts.append(str(coeff))
            else:
                power = "a" if degree == 1 else f"a^{degree}"
                parts.append(power if coeff == 1 else f"{coeff}{power}")
        return "+".join(parts)

    def __repr__(self) -> str:
        return f"Field(q={self.q})"


@lru_cache(maxsize=None)
def make_field(q: int) -> Field:
    """Get or create the verified F_q instance"""
    return Field(q)


def evaluate(poly: MinorPolynomial, point: Sequence[int], field: Field) -> int:
    """
    Evaluate a polynomial at a point of F_q^k, k = n(n-1).

    Integer coefficients are reduced mod p before being multiplied in.
    """
    k = poly.n * (poly.n - 1)
    if len(point) != k:
        raise DomainError(f"Point has {len(point)} coordinates, TSN({poly.n}) has {k} variables")
    coords = [field._element(int(v)) for v in point]
    total = 0
    for mask, coeff in poly.terms.items():
        term = field.from_int(coeff)
        for pos in mask_positions(mask):
            term = int(field.mul[term, coords[pos]])
        total = int(field.add[total, term])
    return total
