"""Reduction at a point: Cremona moves on ``((b+1)L; bL, L, w(a))`` over Q(L).

``L = sqrt(a/2b)`` is the volume constraint.  If the moves reach an ordered
vector with non-negative entries and non-negative defect, the ellipsoid
``E(1, a)`` embeds into ``P(L, Lb)``, i.e. the capacity equals the volume
constraint at ``(a, b)``.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .exactnum import QuadExt, as_fraction, format_rational
from .weights import weight_expansion

__all__ = [
    "Outcome",
    "ReductionVector",
    "ReductionTrace",
    "VerifyReport",
    "volume_lambda",
    "initial_vector",
    "reduce_at_point",
    "h_of",
    "m_threshold",
    "verify_volume_fills",
]

DEFAULT_MAX_MOVES = 200


def _desc_key(u: QuadExt, v: QuadExt) -> int:
    # Sort descending; equal reals share one representation, so no tie-break is needed.
    return (v - u).sign()


@dataclass(frozen=True)
class ReductionVector:
    head: QuadExt
    tail: tuple[QuadExt, ...]

    @property
    def radicand(self) -> Fraction:
        return self.head.radicand

    def ordered(self) -> "ReductionVector":
        nonzero = [t for t in self.tail if t.sign() != 0]
        return ReductionVector(self.head, tuple(sorted(nonzero, key=cmp_to_key(_desc_key))))

    def defect(self) -> QuadExt:
        top = list(self.tail[:3]) + [QuadExt(0)] * (3 - min(3, len(self.tail)))
        return self.head - top[0] - top[1] - top[2]

    def move(self) -> "ReductionVector":
        """Cremona move on the first three tail entries: add the defect to each."""
        delta = self.defect()
        tail = list(self.tail) + [QuadExt(0)] * max(0, 3 - len(self.tail))
        tail[:3] = [t + delta for t in tail[:3]]
        return ReductionVector(self.head + delta, tuple(tail))

    def nonnegative(self) -> bool:
        return self.head.sign() >= 0 and all(t.sign() >= 0 for t in self.tail)

    def __str__(self):
        return f"({self.head}; " + ", ".join(str(t) for t in self.tail) + ")"


class Outcome(str, enum.Enum):
    SUCCESS = "success"
    FAILED_NEGATIVE_ENTRY = "failed_negative_entry"
    INCONCLUSIVE_MAX_MOVES = "inconclusive_max_moves"


@dataclass(frozen=True)
class ReductionTrace:
    a: Fraction
    b: Fraction
    steps: tuple[tuple[ReductionVector, QuadExt], ...]
    outcome: Outcome

    @property
    def moves(self) -> int:
        return len(self.steps) - 1

    @property
    def final(self) -> ReductionVector:
        return self.steps[-1][0]

    def to_dict(self, with_steps: bool = False) -> dict:
        out = {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "outcome": self.outcome.value,
            "moves": self.moves,
        }
        if with_steps:
            out["steps"] = [{"vector": str(v), "defect": str(d)} for v, d in self.steps]
        return out


def volume_lambda(a, b) -> QuadExt:
    a, b = as_fraction(a), as_fraction(b)
    return QuadExt.sqrt(a / (2 * b))


def initial_vector(a, b) -> ReductionVector:
    """``((b+1)L; bL, L, w(a))``, ordered, with ``L = sqrt(a/2b)``."""
    a, b = as_fraction(a), as_fraction(b)
    if a < 1 or b < 1:
        raise ValueError("need a >= 1 and b >= 1")
    lam = volume_lambda(a, b)
    weights = [QuadExt(w, 0, lam.radicand) for w in weight_expansion(a).entries]
    return ReductionVector((b + 1) * lam, (b * lam, lam, *weights)).ordered()


def reduce_at_point(a, b, max_moves: int = DEFAULT_MAX_MOVES) -> ReductionTrace:
    a, b = as_fraction(a), as_fraction(b)
    v = initial_vector(a, b)
    steps = []
    for _ in range(max_moves + 1):
        delta = v.defect()
        steps.append((v, delta))
        if not v.nonnegative():
            return ReductionTrace(a, b, tuple(steps), Outcome.FAILED_NEGATIVE_ENTRY)
        if delta.sign() >= 0:
            return ReductionTrace(a, b, tuple(steps), Outcome.SUCCESS)
        if len(steps) > max_moves:
            break
        v = v.move().ordered()
    return ReductionTrace(a, b, tuple(steps), Outcome.INCONCLUSIVE_MAX_MOVES)


def h_of(k: int, a, b) -> QuadExt:
    """``h(k) = bL - 1 + k(L - 2)``."""
    lam = volume_lambda(a, b)
    b = as_fraction(b)
    return b * lam - 1 + k * (lam - 2)


def m_threshold(p, q) -> Fraction:
    """``4q^2/(2+p)^2``: for ``p >= 2``, ``(b+p)L >= q`` on all of ``b in [1, 2]``
    exactly when ``a >= m(p, q)``.
    """
    p, q = as_fraction(p), as_fraction(q)
    if p < 2:
        raise ValueError("m(p, q) needs p >= 2")
    if q <= 0:
        raise ValueError("m(p, q) needs q > 0")
    return 4 * q * q / (2 + p) ** 2


@dataclass
class VerifyReport:
    points: list[ReductionTrace] = field(default_factory=list)

    @property
    def failures(self) -> list[ReductionTrace]:
        return [t for t in self.points if t.outcome is not Outcome.SUCCESS]

    @property
    def all_success(self) -> bool:
        return not self.failures

    @property
    def max_moves(self) -> int:
        return max((t.moves for t in self.points), default=0)

    def to_dict(self) -> dict:
        return {
            "schema_version": "capcalc.verify/1",
            "all_success": self.all_success,
            "max_moves": self.max_moves,
            "points": [t.to_dict(with_steps=t.outcome is not Outcome.SUCCESS) for t in self.points],
        }


def _reduce_pair(args):
    a, b, max_moves = args
    return reduce_at_point(a, b, max_moves)


def verify_volume_fills(
    a_samples: Iterable,
    b_samples: Sequence,
    max_moves: int = DEFAULT_MAX_MOVES,
    jobs: int = 1,
) -> VerifyReport:
    """Run :func:`reduce_at_point` on the grid ``a_samples x b_samples``."""
    grid = [(as_fraction(a), as_fraction(b), max_moves) for a in a_samples for b in b_samples]
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_reduce_pair, grid, chunksize=8))
    else:
        traces = [_reduce_pair(g) for g in grid]
    return VerifyReport(traces)
