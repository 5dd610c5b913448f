"""Weight expansions of rationals a >= 1.

The weight expansion of ``a = p/q`` is the sequence of squares cut off by
running the Euclidean algorithm on a rectangle of side lengths ``1`` and
``a``: ``floor(a)`` unit squares, then ``l_1`` squares of side
``a - floor(a)``, and so on.  The block multiplicities are exactly the
continued-fraction digits of ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import as_fraction, format_rational

__all__ = ["WeightExpansion", "weight_expansion", "length", "continued_fraction"]


@dataclass(frozen=True)
class WeightExpansion:
    """Decreasing weights stored as ``(value, multiplicity)`` blocks."""

    a: Fraction
    blocks: tuple[tuple[Fraction, int], ...]

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return tuple(w for w, mult in self.blocks for _ in range(mult))

    @property
    def length(self) -> int:
        return sum(mult for _, mult in self.blocks)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(mult for _, mult in self.blocks)

    @property
    def block_lengths(self) -> tuple[int, ...]:
        return self.multiplicities

    @property
    def last_denominator(self) -> int:
        """``q`` for ``a = p/q`` in lowest terms; the last weight is ``1/q``."""
        return self.a.denominator

    @property
    def ell0(self) -> int:
        return self.blocks[0][1]

    def square_sum(self) -> Fraction:
        return sum((w * w * mult for w, mult in self.blocks), Fraction(0))

    def __str__(self):
        return ", ".join(f"{format_rational(w)}^x{mult}" for w, mult in self.blocks)


def continued_fraction(a) -> tuple[int, ...]:
    """Continued-fraction digits ``[c0; c1, ...]`` of a positive rational."""
    a = as_fraction(a)
    p, q = a.numerator, a.denominator
    digits = []
    while q:
        c, r = divmod(p, q)
        digits.append(c)
        p, q = q, r
    return tuple(digits)


@lru_cache(maxsize=4096)
def _expansion(a: Fraction) -> WeightExpansion:
    # Euclid on (p, q): the square side at each stage is (current q) / a.denominator.
    p, q = a.numerator, a.denominator
    blocks = []
    while q:
        c, r = divmod(p, q)
        blocks.append((Fraction(q, a.denominator), c))
        p, q = q, r
    return WeightExpansion(a, tuple(blocks))


def weight_expansion(a) -> WeightExpansion:
    a = as_fraction(a)
    if a < 1:
        raise ValueError(f"weight expansion needs a >= 1, got {format_rational(a)}")
    return _expansion(a)


def length(a) -> int:
    """Total number of weights ``l(a)``."""
    return weight_expansion(a).length
