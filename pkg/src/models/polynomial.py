"""
Multilinear integer polynomials over the edge variables of TSN(n).

A monomial is a bitmask over variable positions (bit 2(i-1)+(j-1) is a{i}_{j});
a polynomial maps masks to nonzero integer coefficients.
"""

import re
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from src.models.lattice import EdgeVar
from src.utils.errors import DomainError

_VAR_RE = re.compile(r"^a(\d+)_([12])$")


def mask_positions(mask: int) -> Tuple[int, ...]:
    """Ascending variable positions set in a monomial mask."""
    out = []
    pos = 0
    while mask:
        if mask & 1:
            out.append(pos)
        mask >>= 1
        pos += 1
    return tuple(out)


def positions_mask(positions) -> int:
    mask = 0
    for pos in positions:
        if mask >> pos & 1:
            raise DomainError(f"Variable {EdgeVar.from_position(pos)} repeated in a multilinear monomial")
        mask |= 1 << pos
    return mask


def _monomial_str(mask: int) -> str:
    return "*".join(str(EdgeVar.from_position(pos)) for pos in mask_positions(mask)) or "1"


@dataclass(frozen=True)
class MinorPolynomial:
    """
    Signed sum of multilinear monomials.

    Printing sorts terms by their ascending tuple of variable positions, e.g.
    "a2_2*a5_1 + a3_1*a5_2"; the zero polynomial prints as "0".
    """

    n: int
    terms: Dict[int, int] = field(default_factory=dict)
    label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "terms", {m: c for m, c in self.terms.items() if c != 0})

    # ============================================
    # Constructors
    # ============================================

    @classmethod
    def zero(cls, n: int) -> "MinorPolynomial":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "MinorPolynomial":
        return cls(n, {0: 1})

    @classmethod
    def parse(cls, text: str, n: int) -> "MinorPolynomial":
        """
        Parse the printed form back, e.g. "a1_2*a4_1 - a2_1*a4_2".

        Only unit coefficients and "1" as the empty monomial are accepted.
        """
        text = text.strip()
        if not text:
            raise DomainError("Cannot parse an empty polynomial")
        if text == "0":
            return cls.zero(n)
        tokens = re.split(r"\s*([+-])\s*", "+" + text if text[0] not in "+-" else text)
        terms: Dict[int, int] = {}
        for sign, body in zip(tokens[1::2], tokens[2::2]):
            mask = 0
            if body != "1":
                positions = []
                for name in body.split("*"):
                    match = _VAR_RE.match(name)
                    if not match:
                        raise DomainError(f"Cannot parse variable '{name}' in '{text}'")
                    positions.append(EdgeVar(int(match.group(1)), int(match.group(2))).position)
                mask = positions_mask(positions)
            terms[mask] = terms.get(mask, 0) + (1 if sign == "+" else -1)
        return cls(n, terms)

    # ============================================
    # Inspection
    # ============================================

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def variable_mask(self) -> int:
        mask = 0
        for m in self.terms:
            mask |= m
        return mask

    def variables(self) -> List[EdgeVar]:
        return [EdgeVar.from_position(pos) for pos in mask_positions(self.variable_mask)]

    def sorted_terms(self) -> List[Tuple[Tuple[int, ...], int]]:
        """(positions, coefficient) pairs in printing order."""
        return sorted((mask_positions(m), c) for m, c in self.terms.items())

    def __iter__(self) -> Iterator[Tuple[Tuple[int, ...], int]]:
        return iter(self.sorted_terms())

    # ============================================
    # Arithmetic
    # ============================================

    def _check_same_lattice(self, other: "MinorPolynomial") -> None:
        if self.n != other.n:
            raise DomainError(f"Polynomials over TSN({self.n}) and TSN({other.n}) cannot be combined")

    def __neg__(self) -> "MinorPolynomial":
        return MinorPolynomial(self.n, {m: -c for m, c in self.terms.items()}, self.label)

    def __add__(self, other: "MinorPolynomial") -> "MinorPolynomial":
        self._check_same_lattice(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return MinorPolynomial(self.n, terms)

    def __sub__(self, other: "MinorPolynomial") -> "MinorPolynomial":
        return self + (-other)

    def __mul__(self, other: "MinorPolynomial") -> "MinorPolynomial":
        """Product; every pair of multiplied monomials must use disjoint variables."""
        self._check_same_lattice(other)
        terms: Dict[int, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    shared = ", ".join(str(EdgeVar.from_position(p)) for p in mask_positions(m1 & m2))
                    raise DomainError(f"Product leaves the multilinear representation (shared: {shared})")
                terms[m1 | m2] = terms.get(m1 | m2, 0) + c1 * c2
        return MinorPolynomial(self.n, terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MinorPolynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def equals_up_to_sign(self, other: "MinorPolynomial") -> bool:
        return self == other or self == -other

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (positions, coeff) in enumerate(self.sorted_terms()):
            body = _monomial_str(positions_mask(positions))
            magnitude = abs(coeff)
            if magnitude != 1:
                body = f"{magnitude}*{body}" if positions else str(magnitude)
            if idx == 0:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f"{'-' if coeff < 0 else '+'} {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MinorPolynomial(n={self.n}, '{self}')"
