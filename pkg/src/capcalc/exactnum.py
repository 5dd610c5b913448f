"""Exact scalars: rationals and the real quadratic field Q(sqrt(r)).

Rationals are plain :class:`fractions.Fraction` objects.  :class:`QuadExt`
holds ``x + y*sqrt(r)`` with rational ``x, y`` and a rational radicand
``r > 0`` carried on every value.  Nothing in here ever rounds.
"""

from __future__ import annotations

import decimal
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC

__all__ = [
    "Fraction",
    "QuadExt",
    "RadicandMismatch",
    "as_fraction",
    "parse_rational",
    "format_rational",
    "rational_sqrt",
    "quad_sign",
    "quad_compare",
    "to_decimal",
]


class RadicandMismatch(ValueError):
    """Two quadratic values with different radicands were combined."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal literal like ``"1.24"``."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_sqrt(r: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    r = as_fraction(r)
    if r < 0:
        return None
    # Fraction is always in lowest terms, so r is a square iff both parts are.
    p, q = r.numerator, r.denominator
    sp, sq = isqrt(p), isqrt(q)
    if sp * sp == p and sq * sq == q:
        return Fraction(sp, sq)
    return None


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


class QuadExt:
    """The real number ``base + coeff*sqrt(radicand)``.

    Values are immutable.  A perfect-square radicand is folded into ``base``
    on construction, so such values always have ``coeff == 0``.
    """

    __slots__ = ("_base", "_coeff", "_radicand")

    def __init__(self, base=0, coeff=0, radicand=1):
        base = as_fraction(base)
        coeff = as_fraction(coeff)
        radicand = as_fraction(radicand)
        if radicand <= 0:
            raise ValueError("radicand must be positive")
        if coeff:
            root = rational_sqrt(radicand)
            if root is not None:
                base += coeff * root
                coeff = Fraction(0)
        object.__setattr__(self, "_base", base)
        object.__setattr__(self, "_coeff", coeff)
        object.__setattr__(self, "_radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def __reduce__(self):
        return (QuadExt, (self._base, self._coeff, self._radicand))

    @classmethod
    def sqrt(cls, radicand) -> "QuadExt":
        return cls(0, 1, radicand)

    @property
    def base(self) -> Fraction:
        return self._base

    @property
    def coeff(self) -> Fraction:
        return self._coeff

    @property
    def radicand(self) -> Fraction:
        return self._radicand

    @property
    def is_rational(self) -> bool:
        return self._coeff == 0

    def as_rational(self) -> Fraction:
        if self._coeff:
            raise ValueError(f"{self} is irrational")
        return self._base

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "QuadExt | None":
        if isinstance(other, QuadExt):
            if other._coeff and self._coeff and other._radicand != self._radicand:
                raise RadicandMismatch(
                    f"cannot combine sqrt({format_rational(self._radicand)}) "
                    f"with sqrt({format_rational(other._radicand)})"
                )
            return other
        if isinstance(other, (int, _RationalABC)):
            return QuadExt(other, 0, self._radicand)
        return None

    def _common_radicand(self, other: "QuadExt") -> Fraction:
        # A rational value fits into any Q(sqrt(r)); keep the irrational side's r.
        return self._radicand if self._coeff or not other._coeff else other._radicand

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self._base + o._base, self._coeff + o._coeff, self._common_radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self._base, -self._coeff, self._radicand)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self._base - o._base, self._coeff - o._coeff, self._common_radicand(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = self._common_radicand(o)
        x1, y1, x2, y2 = self._base, self._coeff, o._base, o._coeff
        return QuadExt(x1 * x2 + y1 * y2 * r, x1 * y2 + x2 * y1, r)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``x**2 - y**2 * r``."""
        return self._base * self._base - self._coeff * self._coeff * self._radicand

    def conjugate(self) -> "QuadExt":
        return QuadExt(self._base, -self._coeff, self._radicand)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(r))")
        num = self * o.conjugate()
        return QuadExt(num._base / n, num._coeff / n, num._radicand)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- ordering -----------------------------------------------------------

    def sign(self) -> int:
        x, y = self._base, self._coeff
        sx, sy = _sign(x), _sign(y)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # Opposite signs: whichever of |x|, |y|*sqrt(r) is larger wins.
        lhs = x * x
        rhs = y * y * self._radicand
        if lhs > rhs:
            return sx
        if lhs < rhs:
            return sy
        return 0

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if self._coeff == 0 and other._coeff == 0:
                return self._base == other._base
            return (
                self._base == other._base
                and self._coeff == other._coeff
                and self._radicand == other._radicand
            )
        if isinstance(other, (int, _RationalABC)):
            return self._coeff == 0 and self._base == other
        return NotImplemented

    def __hash__(self):
        if self._coeff == 0:
            return hash(self._base)
        return hash((self._base, self._coeff, self._radicand))

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __bool__(self):
        return self.sign() != 0

    # -- display ------------------------------------------------------------

    def __float__(self):
        return float(to_decimal(self, 20))

    def __str__(self):
        x = format_rational(self._base)
        if self._coeff == 0:
            return x
        return f"{x} + {format_rational(self._coeff)}*sqrt({format_rational(self._radicand)})"

    def __repr__(self):
        return f"QuadExt({self})"


def quad_sign(v: QuadExt) -> int:
    """Exact sign of ``v`` as -1, 0 or +1."""
    return v.sign()


def quad_compare(u: QuadExt, v: QuadExt) -> int:
    """-1, 0, +1 as ``u`` is less than, equal to, or greater than ``v``."""
    if not isinstance(u, QuadExt):
        u = QuadExt(u)
    return (u - v).sign()


def to_decimal(value, digits: int = 15) -> decimal.Decimal:
    """Decimal approximation with ``digits`` significant digits (display only)."""
    ctx = decimal.Context(prec=digits + 10)
    if isinstance(value, QuadExt):
        x, y, r = value.base, value.coeff, value.radicand
        total = ctx.divide(decimal.Decimal(x.numerator), decimal.Decimal(x.denominator))
        if y:
            root = ctx.sqrt(ctx.divide(decimal.Decimal(r.numerator), decimal.Decimal(r.denominator)))
            total = ctx.add(
                total,
                ctx.multiply(
                    ctx.divide(decimal.Decimal(y.numerator), decimal.Decimal(y.denominator)), root
                ),
            )
    else:
        q = as_fraction(value)
        total = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return decimal.Context(prec=digits).plus(total)
