"""Obstruction functions, the volume constraint, RF(b) and c_b(8).

Every comparison against the volume constraint ``sqrt(a / 2b)`` is done on
squares, so all decisions stay inside Q.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .classes import ClassSxS, diophantine_check, make_S, make_T
from .exactnum import QuadExt, as_fraction, format_rational, rational_sqrt
from .weights import weight_expansion

__all__ = [
    "ObstructionReport",
    "IntervalIndex",
    "ExcludedPoint",
    "UnknownRFValue",
    "VolumeBound",
    "pairing",
    "mu",
    "volume_bound",
    "is_obstructive_at",
    "is_obstructive_on_b_interval",
    "interval_endpoints",
    "interval_index",
    "determining_class",
    "rf",
    "cb8",
    "cb_lower_bound",
    "classify_center8",
]


class UnknownRFValue(ValueError):
    """RF(b) is not determined at b = ((n+1)/n)^2."""


class UnsortedTailWarning(UserWarning):
    pass


def _sorted_tail(c: ClassSxS) -> tuple[int, ...]:
    tail = c.tail
    if any(x < y for x, y in zip(tail, tail[1:])):
        warnings.warn(
            f"tail of {c} is not non-increasing; sorting before pairing with weights",
            UnsortedTailWarning,
            stacklevel=3,
        )
        tail = tuple(sorted(tail, reverse=True))
    return tail


def pairing(tail: Sequence[int], a) -> Fraction:
    """``<m, w(a)>``; the shorter vector is padded with zeros."""
    weights = weight_expansion(a).entries
    return sum((Fraction(m) * w for m, w in zip(tail, weights)), Fraction(0))


def mu(c: ClassSxS, a, b) -> Fraction:
    a, b = as_fraction(a), as_fraction(b)
    den = c.d + b * c.e
    if den <= 0:
        raise ValueError(f"d + b*e must be positive for {c} at b = {format_rational(b)}")
    return pairing(_sorted_tail(c), a) / den


@dataclass(frozen=True, eq=False)
class VolumeBound:
    """The volume constraint ``sqrt(a / 2b)`` as an exact comparison object."""

    a: Fraction
    b: Fraction

    @property
    def square(self) -> Fraction:
        return self.a / (2 * self.b)

    def as_quad(self) -> QuadExt:
        return QuadExt.sqrt(self.square)

    def _cmp(self, other) -> int:
        if isinstance(other, VolumeBound):
            x, y = self.square, other.square
        else:
            other = as_fraction(other)
            if other < 0:
                return 1
            x, y = self.square, other * other
        return (x > y) - (x < y)

    def __eq__(self, other):
        if not isinstance(other, (VolumeBound, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self):
        root = rational_sqrt(self.square)
        return hash(root if root is not None else ("sqrt", self.square))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return math.sqrt(float(self.square))

    def __str__(self):
        root = rational_sqrt(self.square)
        if root is not None:
            return format_rational(root)
        return f"sqrt({format_rational(self.square)})"


def volume_bound(a, b) -> VolumeBound:
    a, b = as_fraction(a), as_fraction(b)
    if a <= 0 or b <= 0:
        raise ValueError("volume constraint needs a, b > 0")
    return VolumeBound(a, b)


@dataclass(frozen=True)
class ObstructionReport:
    cls: ClassSxS
    a: Fraction
    b: Fraction
    mu_num: Fraction
    mu_den: Fraction
    obstructive: bool
    margin_sq: Fraction

    @property
    def mu(self) -> Fraction:
        return self.mu_num / self.mu_den

    def to_dict(self) -> dict:
        return {
            "class": {"d": self.cls.d, "e": self.cls.e, "m": list(self.cls.tail)},
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "mu_num": format_rational(self.mu_num),
            "mu_den": format_rational(self.mu_den),
            "obstructive": self.obstructive,
            "margin_sq": format_rational(self.margin_sq),
        }


def is_obstructive_at(c: ClassSxS, a, b) -> ObstructionReport:
    """``mu_b(c)(a) > sqrt(a/2b)``, decided via ``2b<m,w>^2 > a(d+be)^2``."""
    a, b = as_fraction(a), as_fraction(b)
    den = c.d + b * c.e
    if den <= 0:
        raise ValueError(f"d + b*e must be positive for {c} at b = {format_rational(b)}")
    num = pairing(_sorted_tail(c), a)
    margin = 2 * b * num * num - a * den * den
    return ObstructionReport(c, a, b, num, den, num > 0 and margin > 0, margin)


def is_obstructive_on_b_interval(c: ClassSxS, a, b_lo, b_hi) -> bool:
    """Whether ``c`` is obstructive at ``a`` for some ``b`` in ``[b_lo, b_hi]``.

    ``2b<m,w>^2 / (a(d+be)^2)`` has b-derivative of the sign of ``d - be``,
    so its maximum on the interval sits at ``d/e`` clamped to the ends.
    Because the inequality is strict and the ratio continuous, the answer is
    the same for the open interval.
    """
    a, b_lo, b_hi = as_fraction(a), as_fraction(b_lo), as_fraction(b_hi)
    if not b_lo <= b_hi:
        raise ValueError("empty b-interval")
    if c.e <= 0:
        b_star = b_hi
    else:
        b_star = min(max(Fraction(c.d, c.e), b_lo), b_hi)
    return is_obstructive_at(c, a, b_star).obstructive


@dataclass(frozen=True)
class IntervalIndex:
    n: int

    @property
    def endpoints(self) -> tuple[Fraction, Fraction]:
        return interval_endpoints(self.n)

    def contains(self, b) -> bool:
        lo, hi = self.endpoints
        return lo < as_fraction(b) < hi


@dataclass(frozen=True)
class ExcludedPoint:
    """Marks ``b = ((n+1)/n)^2``, the common endpoint of ``I_n`` and ``I_{n-1}``."""

    n: int

    @property
    def b(self) -> Fraction:
        return Fraction(self.n + 1, self.n) ** 2


def interval_endpoints(n: int) -> tuple[Fraction, Fraction]:
    """``I_n = (((n+2)/(n+1))^2, ((n+1)/n)^2)``."""
    if n < 1:
        raise ValueError("I_n is defined for n >= 1")
    return Fraction(n + 2, n + 1) ** 2, Fraction(n + 1, n) ** 2


def interval_index(b) -> IntervalIndex | ExcludedPoint:
    """The ``n`` with ``b`` in ``I_n`` for ``1 < b < 2``, or an excluded point."""
    b = as_fraction(b)
    if not 1 < b < 2:
        raise ValueError(f"b must lie in (1, 2), got {format_rational(b)}")
    # b in I_n  <=>  n < 1/(sqrt(b) - 1) < n + 1; start from a float guess.
    guess = 1.0 / (math.sqrt(float(b)) - 1.0) if float(b) > 1.0 else 1e18
    n = max(1, int(guess))
    while Fraction(n + 1, n) ** 2 < b:
        n -= 1
    while Fraction(n + 2, n + 1) ** 2 >= b:
        n += 1
    # Now ((n+2)/(n+1))^2 < b <= ((n+1)/n)^2.
    if b == Fraction(n + 1, n) ** 2:
        return ExcludedPoint(n)
    return IntervalIndex(n)


def determining_class(n: int) -> tuple[str, ClassSxS]:
    """The class fixing RF and c_b(8) on ``I_n``: ``T_k`` for n = 2k, ``S_{k+1}`` for n = 2k+1."""
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        return f"T{n // 2}", make_T(n // 2)
    return f"S{n // 2 + 1}", make_S(n // 2 + 1)


def _class_for(b: Fraction) -> tuple[str, ClassSxS, int]:
    idx = interval_index(b)
    if isinstance(idx, ExcludedPoint):
        raise UnknownRFValue(
            f"RF is unknown at the excluded point b = {format_rational(idx.b)} "
            f"= ({idx.n + 1}/{idx.n})^2"
        )
    name, cls = determining_class(idx.n)
    return name, cls, idx.n


def rf(b) -> Fraction:
    """Rigid-flexible value ``RF(b) = 2b * mu_b(C)(8)^2`` for b in (1, 2)."""
    b = as_fraction(b)
    _, cls, _ = _class_for(b)
    return 2 * b * mu(cls, 8, b) ** 2


def cb8(b) -> Fraction:
    """``c_b(8)`` for b in (1, 2) off the excluded points."""
    b = as_fraction(b)
    _, cls, _ = _class_for(b)
    return mu(cls, 8, b)


def cb_lower_bound(a, b, classes: Iterable[ClassSxS]) -> Fraction | VolumeBound:
    """Max of the volume constraint and ``mu`` over a finite list of classes.

    Returns the winning ``mu`` as a Fraction if some class beats the volume,
    otherwise the :class:`VolumeBound` itself.
    """
    a, b = as_fraction(a), as_fraction(b)
    best: Fraction | VolumeBound = volume_bound(a, b)
    for c in classes:
        if not diophantine_check(c):
            raise ValueError(f"{c} does not satisfy the Diophantine equations")
        value = mu(c.ordered(), a, b)
        if isinstance(best, VolumeBound):
            if best < value:
                best = value
        elif value > best:
            best = value
    return best


def _center8_shapes(m: int) -> list[tuple[int, ...]]:
    shapes = [(m,) * 8, (m,) * 7 + (m - 1,), (m + 1,) + (m,) * 7]
    return [s for s in shapes if min(s) >= 0]


def classify_center8(e_max: int) -> list[ClassSxS]:
    """All ``<d, e; m>`` with ``d >= e``, ``e <= e_max`` and a length-8 tail of
    shape ``(m^x8)``, ``(m^x7, m-1)`` or ``(m+1, m^x7)`` solving the
    Diophantine equations.
    """
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    found = []
    for e in range(1, e_max + 1):
        d = e
        # Cauchy-Schwarz on 8 entries: (2(d+e)-1)^2 <= 8(2de+1), i.e. 4(d-e)^2 <= 4(d+e)+7.
        while 4 * (d - e) ** 2 <= 4 * (d + e) + 7:
            m_hi = -(-2 * (d + e) // 8) + 1
            for m in range(0, m_hi + 1):
                for tail in _center8_shapes(m):
                    c = ClassSxS(d, e, tail)
                    if diophantine_check(c):
                        found.append(c)
            d += 1
    return sorted(set(found), key=lambda c: (c.e, c.d, c.tail))
