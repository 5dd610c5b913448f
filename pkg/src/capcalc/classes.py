"""Homology classes of blow-ups, Cremona moves and exceptionality.

Two coordinate systems are used.  ``ClassP2`` is ``(d; m_1, ..., m_n)`` in
the basis of a blown-up projective plane.  ``ClassSxS`` is
``<d, e; m_1, ..., m_n>`` in the basis of a blown-up ``S^2 x S^2``; it is
converted to the plane basis with :func:`to_p2`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

__all__ = [
    "ClassP2",
    "ClassSxS",
    "Verdict",
    "ExceptionalityResult",
    "cremona",
    "defect",
    "to_p2",
    "diophantine_check",
    "diophantine_check_p2",
    "is_exceptional",
    "make_S",
    "make_T",
    "parse_tail",
    "format_tail",
]

DEFAULT_MAX_MOVES = 1000


def _descending(tail) -> tuple[int, ...]:
    return tuple(sorted(tail, reverse=True))


def format_tail(tail) -> str:
    """Compress runs, e.g. ``(4, 4, 4, 3)`` -> ``"4^x3, 3"``."""
    parts = []
    i = 0
    tail = list(tail)
    while i < len(tail):
        j = i
        while j < len(tail) and tail[j] == tail[i]:
            j += 1
        run = j - i
        parts.append(str(tail[i]) if run == 1 else f"{tail[i]}^x{run}")
        i = j
    return ", ".join(parts)


def parse_tail(text: str) -> tuple[int, ...]:
    """Parse ``"4^x7,3"`` / ``"4x7,3"`` / ``"4,4,4"`` into an integer tuple."""
    out: list[int] = []
    for chunk in text.replace(" ", "").split(","):
        if not chunk:
            continue
        for sep in ("^x", "^", "x"):
            if sep in chunk:
                value, count = chunk.split(sep, 1)
                out.extend([int(value)] * int(count))
                break
        else:
            out.append(int(chunk))
    return tuple(out)


@dataclass(frozen=True)
class ClassP2:
    degree: int
    tail: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tail", tuple(int(m) for m in self.tail))

    def ordered(self) -> "ClassP2":
        return ClassP2(self.degree, _descending(self.tail))

    def stripped(self) -> "ClassP2":
        """Drop zero entries; they carry no information."""
        return ClassP2(self.degree, tuple(m for m in self.tail if m != 0))

    def padded(self, n: int = 3) -> "ClassP2":
        if len(self.tail) >= n:
            return self
        return ClassP2(self.degree, self.tail + (0,) * (n - len(self.tail)))

    def __str__(self):
        return f"({self.degree}; {format_tail(self.tail)})"


@dataclass(frozen=True)
class ClassSxS:
    d: int
    e: int
    tail: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tail", tuple(int(m) for m in self.tail))

    def ordered(self) -> "ClassSxS":
        return ClassSxS(self.d, self.e, _descending(self.tail))

    def positive_length(self) -> int:
        return sum(1 for m in self.tail if m > 0)

    def __str__(self):
        return f"<{self.d}, {self.e}; {format_tail(self.tail)}>"


def cremona(c: ClassP2) -> ClassP2:
    """One Cremona transform on the first three tail entries (no reordering)."""
    c = c.padded(3)
    d, (m1, m2, m3) = c.degree, c.tail[:3]
    return ClassP2(
        2 * d - m1 - m2 - m3,
        (d - m2 - m3, d - m1 - m3, d - m1 - m2) + c.tail[3:],
    )


def defect(c: ClassP2) -> int:
    c = c.padded(3)
    return c.degree - c.tail[0] - c.tail[1] - c.tail[2]


def to_p2(c: ClassSxS) -> ClassP2:
    """Change of basis ``<d, e; m> -> (d + e - m1; d - m1, e - m1, m2, ...)``."""
    m1 = c.tail[0] if c.tail else 0
    return ClassP2(c.d + c.e - m1, (c.d - m1, c.e - m1) + c.tail[1:])


def diophantine_check(c: ClassSxS) -> bool:
    """``sum m = 2(d+e) - 1`` and ``sum m^2 = 2de + 1``."""
    return (
        sum(c.tail) == 2 * (c.d + c.e) - 1
        and sum(m * m for m in c.tail) == 2 * c.d * c.e + 1
    )


def diophantine_check_p2(c: ClassP2) -> bool:
    """``sum m = 3d - 1`` and ``sum m^2 = d^2 + 1``."""
    return sum(c.tail) == 3 * c.degree - 1 and sum(m * m for m in c.tail) == c.degree**2 + 1


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ExceptionalityResult:
    verdict: Verdict
    reason: str
    trace: tuple[ClassP2, ...] = field(default=())

    @property
    def moves(self) -> int:
        return max(len(self.trace) - 1, 0)

    def __bool__(self):
        return self.verdict is Verdict.YES


def _is_base_class(c: ClassP2) -> bool:
    s = c.stripped()
    return s.degree == 0 and s.tail == (-1,)


def is_exceptional(c: ClassSxS | ClassP2, max_moves: int = DEFAULT_MAX_MOVES) -> ExceptionalityResult:
    """Decide whether ``c`` is an exceptional class by Cremona reduction.

    The trace records the ordered, zero-stripped vector before each move and
    the final vector.
    """
    if isinstance(c, ClassSxS):
        if not diophantine_check(c):
            return ExceptionalityResult(Verdict.NO, "Diophantine equations fail")
        v = to_p2(c)
    else:
        if not diophantine_check_p2(c):
            return ExceptionalityResult(Verdict.NO, "Diophantine equations fail")
        v = c

    trace: list[ClassP2] = []
    for _ in range(max_moves + 1):
        v = v.stripped().ordered()
        trace.append(v)
        if _is_base_class(v):
            return ExceptionalityResult(Verdict.YES, "reduces to (0; -1)", tuple(trace))
        if v.degree < 0:
            # Moves with negative defect only lower the degree, so 0 is out of reach.
            return ExceptionalityResult(Verdict.NO, "degree became negative", tuple(trace))
        if defect(v) >= 0:
            return ExceptionalityResult(Verdict.NO, "reduced vector is not (0; -1)", tuple(trace))
        if len(trace) > max_moves:
            break
        v = cremona(v)
    return ExceptionalityResult(
        Verdict.INCONCLUSIVE, f"no verdict after {max_moves} moves", tuple(trace)
    )


def make_S(k: int) -> ClassSxS:
    """``S_k = <2k^2 + k, 2k^2 - k; (k^2)^x7, k^2 - 1>``."""
    if k < 1:
        raise ValueError("S_k is defined for k >= 1")
    k2 = k * k
    return ClassSxS(2 * k2 + k, 2 * k2 - k, (k2,) * 7 + (k2 - 1,))


def make_T(k: int) -> ClassSxS:
    """``T_k = <(2k+1)(k+1), k(2k+1); k^2 + k + 1, (k^2 + k)^x7>``."""
    if k < 1:
        raise ValueError("T_k is defined for k >= 1")
    m = k * k + k
    return ClassSxS((2 * k + 1) * (k + 1), k * (2 * k + 1), (m + 1,) + (m,) * 7)
