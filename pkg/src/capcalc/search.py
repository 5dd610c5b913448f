"""Exhaustive search for obstructive classes centered in a window of a-values.

For every candidate center ``a = 8 + p/q`` and every ``(d, e)`` pair the
search lists the tails ``m`` solving the Diophantine equations whose length
equals ``l(a)`` and whose block structure matches ``w(a)``, then decides
exactly whether the class is obstructive for some ``b`` in the b-window and
whether it is exceptional.
"""

from __future__ import annotations

import json
import logging
import os
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Callable, Iterator, Sequence

import mpmath

from .classes import ClassSxS, Verdict, is_exceptional
from .exactnum import QuadExt, as_fraction, format_rational, parse_rational
from .obstruction import ObstructionReport, is_obstructive_at, is_obstructive_on_b_interval
from .weights import WeightExpansion, weight_expansion

__all__ = [
    "SearchConfig",
    "ErrorData",
    "SearchReport",
    "BoundValues",
    "REFERENCE_PAIR_COUNT",
    "extend",
    "extend_with_length",
    "block_tails",
    "candidate_centers",
    "de_pairs",
    "block_filter",
    "tails_for",
    "error_data",
    "bound_functions",
    "certify_no_obstruction",
    "SCHEMA_VERSION",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = "capcalc.search/1"
REFERENCE_PAIR_COUNT = 934


@dataclass(frozen=True)
class SearchConfig:
    q_max: int = 11
    e_max: int = 40
    d_lo_offset: int = -2
    a_window: tuple[Fraction, Fraction] = (Fraction(8), Fraction(9))
    b_window: tuple[Fraction, Fraction] = (Fraction(1), Fraction(2))
    # Explicit centers override the q_max / a_window enumeration.
    centers: tuple[Fraction, ...] | None = None
    # "blocks" generates block-shaped tails directly; "extend" enumerates all
    # Diophantine tails of length l(a) with Extend, then filters (slower).
    method: str = "blocks"

    def __post_init__(self):
        if self.q_max < 2:
            raise ValueError("q_max must be >= 2")
        if self.e_max < 0:
            raise ValueError("e_max must be >= 0")
        if self.method not in ("blocks", "extend"):
            raise ValueError(f"unknown tail method {self.method!r}")

    @staticmethod
    def d_hi(e: int) -> int:
        return 2 * e + 2


# -- tail enumeration ---------------------------------------------------------


@lru_cache(maxsize=None)
def extend(l2: int, l1: int, prev: int = 0) -> tuple[tuple[int, ...], ...]:
    """All non-increasing positive tuples with square sum ``l2`` and sum ``l1``.

    ``prev`` caps the first entry; 0 means no cap.
    """
    if l2 < l1 or l2 < 0 or l1 < 0:
        return ()
    if l2 == l1:
        return ((1,) * l2,)
    start = isqrt(l2) if prev == 0 else min(prev, isqrt(l2))
    out = []
    for i in range(start, 0, -1):
        for rest in extend(l2 - i * i, l1 - i, i):
            out.append((i,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def extend_with_length(l2: int, l1: int, n: int, prev: int = 0) -> tuple[tuple[int, ...], ...]:
    """``extend`` restricted to tuples of exactly ``n`` entries."""
    if l2 < l1 or l2 < 0 or l1 < 0 or l1 < n:
        return ()
    if n == 0:
        return ((),) if l1 == 0 and l2 == 0 else ()
    if l1 * l1 > n * l2:
        return ()
    if l2 == l1:
        return ((1,) * n,) if l1 == n else ()
    start = isqrt(l2) if prev == 0 else min(prev, isqrt(l2))
    out = []
    for i in range(start, 0, -1):
        if l1 > i * n:
            break
        for rest in extend_with_length(l2 - i * i, l1 - i, n - 1, i):
            out.append((i,) + rest)
    return tuple(out)


def _block_shapes(s: int, hi: int) -> Iterator[tuple[tuple[int, ...], bool]]:
    """Shapes allowed on a block of ``s`` equal weights, entries in [1, hi].

    Yields ``(segment, non_constant)``.
    """
    for m in range(hi, 0, -1):
        yield (m,) * s, False
        if s >= 2:
            if m >= 2:
                yield (m,) * (s - 1) + (m - 1,), True
            if m + 1 <= hi:
                yield (m + 1,) + (m,) * (s - 1), True


def block_tails(l2: int, l1: int, expansion: WeightExpansion) -> list[tuple[int, ...]]:
    """Tails of length ``l(a)`` with the given norms that pass :func:`block_filter`."""
    sizes = expansion.block_lengths
    suffix = [0] * (len(sizes) + 1)
    for i in range(len(sizes) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + sizes[i]
    out: list[tuple[int, ...]] = []

    def walk(i: int, r1: int, r2: int, cap: int, used: bool, acc: tuple[int, ...]):
        if i == len(sizes):
            if r1 == 0 and r2 == 0:
                out.append(acc)
            return
        s = sizes[i]
        hi = min(cap, isqrt(r2)) if cap else isqrt(r2)
        for seg, nonconst in _block_shapes(s, hi):
            if nonconst and used:
                continue
            n1 = r1 - sum(seg)
            n2 = r2 - sum(x * x for x in seg)
            rest = suffix[i + 1]
            if n1 < rest or n2 < n1:
                continue
            if n1 * n1 > rest * n2:
                continue
            last = seg[-1]
            if n1 > rest * last or n2 > rest * last * last:
                continue
            walk(i + 1, n1, n2, last, used or nonconst, acc + seg)

    walk(0, l1, l2, 0, False, ())
    return out


def candidate_centers(cfg: SearchConfig | int) -> list[Fraction]:
    """``8 + p/q`` with ``1 <= p < q <= q_max`` in lowest terms, ascending."""
    q_max = cfg if isinstance(cfg, int) else cfg.q_max
    if q_max < 2:
        raise ValueError("q_max must be >= 2")
    return sorted(
        Fraction(8) + Fraction(p, q)
        for q in range(2, q_max + 1)
        for p in range(1, q)
        if gcd(p, q) == 1
    )


def de_pairs(cfg: SearchConfig) -> list[tuple[int, int]]:
    """Candidate ``(d, e)`` with ``max(1, e + d_lo_offset) <= d <= 2e + 2``.

    For ``e = 1`` the range is widened to ``d <= 5``.
    """
    pairs = []
    for e in range(1, cfg.e_max + 1):
        hi = cfg.d_hi(e)
        if e == 1:
            hi = max(hi, 5)
        for d in range(max(1, e + cfg.d_lo_offset), hi + 1):
            pairs.append((d, e))
    if cfg.e_max == 40 and cfg.d_lo_offset == -2 and len(pairs) != REFERENCE_PAIR_COUNT:
        warnings.warn(
            f"{len(pairs)} (d, e) pairs for e <= 40, not {REFERENCE_PAIR_COUNT}; "
            "the search uses the larger, inclusive range",
            stacklevel=2,
        )
    return pairs


def _split_blocks(tail: Sequence[int], sizes: Sequence[int]) -> Iterator[Sequence[int]]:
    i = 0
    for s in sizes:
        yield tail[i : i + s]
        i += s


def _segment_kind(seg: Sequence[int]) -> str | None:
    """'const', 'nonconst' or None if the block has no allowed shape."""
    if all(x == seg[0] for x in seg):
        return "const"
    m = seg[-1]
    if seg[0] == m + 1 and all(x == m for x in seg[1:]):
        return "nonconst"
    m = seg[0]
    if seg[-1] == m - 1 and all(x == m for x in seg[:-1]):
        return "nonconst"
    return None


def block_filter(tail: Sequence[int], a) -> bool:
    """Every block of ``w(a)`` carries a constant, ``(m.., m-1)`` or
    ``(m+1, m..)`` segment of the tail, with at most one non-constant block.
    """
    w = weight_expansion(a)
    if len(tail) != w.length:
        raise ValueError(f"tail length {len(tail)} != l(a) = {w.length}")
    nonconst = 0
    for seg in _split_blocks(tuple(tail), w.block_lengths):
        kind = _segment_kind(seg)
        if kind is None:
            return False
        if kind == "nonconst":
            nonconst += 1
    return nonconst <= 1


def tails_for(d: int, e: int, a, method: str = "blocks") -> list[tuple[int, ...]]:
    w = weight_expansion(a)
    l2, l1 = 2 * d * e + 1, 2 * (d + e) - 1
    if method == "blocks":
        return block_tails(l2, l1, w)
    return [t for t in extend_with_length(l2, l1, w.length) if block_filter(t, a)]


# -- error terms and the q/e bound ---------------------------------------------


@dataclass(frozen=True)
class ErrorData:
    """Error vector of ``m`` against the scaled weights ``(d+be)/sqrt(2ab) * w(a)``.

    With this scaling ``<eps, w(a)> > 0`` exactly when the class is
    obstructive at ``(a, b)``.  ``eps``, ``v_i``, ``sigma`` and
    ``sigma_prime`` live in Q(sqrt(2ab)); ``v_M`` lives in Q(sqrt(2b/a)).
    """

    h: Fraction
    eps: tuple[QuadExt, ...]
    sigma: QuadExt
    sigma_prime: QuadExt
    v_M: QuadExt
    v_i: tuple[QuadExt, ...]

    def norm_sq(self) -> QuadExt:
        return sum((x * x for x in self.eps), QuadExt(0))

    def pairing_with(self, weights: Sequence[Fraction]) -> QuadExt:
        return sum((x * w for x, w in zip(self.eps, weights)), QuadExt(0))


def error_data(c: ClassSxS, a, b) -> ErrorData:
    a, b = as_fraction(a), as_fraction(b)
    w = weight_expansion(a)
    weights = w.entries
    tail = tuple(c.tail) + (0,) * max(0, len(weights) - len(c.tail))
    weights = weights + (Fraction(0),) * max(0, len(tail) - len(weights))
    scale = c.d + b * c.e
    inv_root = QuadExt(0, 1 / (2 * a * b), 2 * a * b)  # 1/sqrt(2ab)
    v_i = tuple(inv_root * (scale * wi) for wi in weights)
    eps = tuple(QuadExt(m) - v for m, v in zip(tail, v_i))
    l0 = w.ell0
    last_block = w.blocks[-1][1]
    sigma = sum((x * x for x in eps[l0 : w.length]), QuadExt(0))
    sigma_prime = sum(eps[l0 : w.length - last_block], QuadExt(0))
    v_M = QuadExt(0, scale / (w.last_denominator * (b + 1)), 2 * b / a)
    return ErrorData(c.d - b * c.e, eps, sigma, sigma_prime, v_M, v_i)


@dataclass(frozen=True)
class BoundValues:
    """Both sides of the e-bound at ``a = 8 + 1/q`` (mpmath floats)."""

    lower: mpmath.mpf
    upper: mpmath.mpf
    delta: mpmath.mpf
    vacuous: bool


def bound_functions(q, h, b, v_M=Fraction(1, 3), dps: int = 50) -> BoundValues:
    """``l(q, h, b)`` and ``u(q, h, b)`` with ``sigma`` at its ceiling ``1 - h^2/2b``.

    ``v_M`` defaults to its floor ``1/3``, which makes ``u`` an upper
    envelope independent of the class.
    """
    with mpmath.workdps(dps):
        q = mpmath.mpf(as_fraction(q).numerator) / as_fraction(q).denominator
        h = mpmath.mpf(as_fraction(h).numerator) / as_fraction(h).denominator
        b = mpmath.mpf(as_fraction(b).numerator) / as_fraction(b).denominator
        v_M = mpmath.mpf(as_fraction(v_M).numerator) / as_fraction(v_M).denominator
        if q < 2:
            raise ValueError("q must be >= 2")
        a = 8 + 1 / q
        delta = a + 1 - 2 * (b + 1) / mpmath.sqrt(2 * b) * mpmath.sqrt(a) - 1 / q
        sigma = 1 - h * h / (2 * b)
        tilt = 1 - h * (1 - 1 / b)
        vacuous = delta <= 0 or sigma <= 0
        if vacuous:
            return BoundValues(mpmath.inf, mpmath.inf, +delta, True)
        k = mpmath.sqrt(2 * b * a) / delta
        lower = k * (mpmath.sqrt(sigma * q) - tilt)
        upper = k * (sigma / (delta * v_M) - tilt)
        return BoundValues(+lower, +upper, +delta, False)


# -- the certificate ------------------------------------------------------------


@dataclass
class SearchReport:
    centers_checked: list[Fraction] = field(default_factory=list)
    pairs_checked: int = 0
    classes_generated: int = 0
    obstructive_found: list[ObstructionReport] = field(default_factory=list)
    wall_time: float = 0.0
    # Obstructive on the b-window but not exceptional; informational.
    obstructive_nonexceptional: int = 0
    inconclusive: list[str] = field(default_factory=list)
    work_items: int = 0

    @property
    def certified(self) -> bool:
        return not self.obstructive_found and not self.inconclusive

    def to_dict(self, include_time: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "centers_checked": [format_rational(a) for a in self.centers_checked],
            "pairs_checked": self.pairs_checked,
            "classes_generated": self.classes_generated,
            "obstructive_found": [r.to_dict() for r in self.obstructive_found],
            "obstructive_nonexceptional": self.obstructive_nonexceptional,
            "inconclusive": list(self.inconclusive),
            "work_items": self.work_items,
        }
        if include_time:
            out["wall_time"] = self.wall_time
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SearchReport":
        found = []
        for r in data.get("obstructive_found", []):
            c = ClassSxS(r["class"]["d"], r["class"]["e"], tuple(r["class"]["m"]))
            found.append(
                ObstructionReport(
                    c,
                    parse_rational(r["a"]),
                    parse_rational(r["b"]),
                    parse_rational(r["mu_num"]),
                    parse_rational(r["mu_den"]),
                    bool(r["obstructive"]),
                    parse_rational(r["margin_sq"]),
                )
            )
        return cls(
            centers_checked=[parse_rational(a) for a in data.get("centers_checked", [])],
            pairs_checked=int(data.get("pairs_checked", 0)),
            classes_generated=int(data.get("classes_generated", 0)),
            obstructive_found=found,
            wall_time=float(data.get("wall_time", 0.0)),
            obstructive_nonexceptional=int(data.get("obstructive_nonexceptional", 0)),
            inconclusive=list(data.get("inconclusive", [])),
            work_items=int(data.get("work_items", 0)),
        )


def _b_star(c: ClassSxS, b_lo: Fraction, b_hi: Fraction) -> Fraction:
    if c.e <= 0:
        return b_hi
    return min(max(Fraction(c.d, c.e), b_lo), b_hi)


def _check_center(args) -> list[tuple[tuple[int, int], int, int, list[ObstructionReport], list[str]]]:
    """Process every ``(d, e)`` pair for one center; returns per-pair results."""
    a, pairs, b_window, method = args
    b_lo, b_hi = b_window
    results = []
    for d, e in pairs:
        tails = tails_for(d, e, a, method)
        found, inconclusive, nonexc = [], [], 0
        for tail in tails:
            c = ClassSxS(d, e, tail)
            if not is_obstructive_on_b_interval(c, a, b_lo, b_hi):
                continue
            verdict = is_exceptional(c).verdict
            if verdict is Verdict.YES:
                found.append(is_obstructive_at(c, a, _b_star(c, b_lo, b_hi)))
            elif verdict is Verdict.INCONCLUSIVE:
                inconclusive.append(f"{c} at a={format_rational(a)}")
            else:
                nonexc += 1
        results.append(((d, e), len(tails), nonexc, found, inconclusive))
    return results


def _in_window(a: Fraction, window) -> bool:
    lo, hi = window
    return lo < a < hi


def _centers(cfg: SearchConfig) -> list[Fraction]:
    if cfg.centers is not None:
        return sorted(as_fraction(a) for a in cfg.centers)
    return [a for a in candidate_centers(cfg) if _in_window(a, cfg.a_window)]


def _load_checkpoint(path) -> tuple[dict | None, SearchReport | None]:
    if not path or not os.path.exists(path):
        return None, None
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    cursor = data.get("cursor")
    partial = SearchReport.from_dict(data["partial"]) if "partial" in data else None
    return cursor, partial


def _save_checkpoint(path, cursor: dict, report: SearchReport):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"cursor": cursor, "partial": report.to_dict()}, fh, indent=1)
    os.replace(tmp, path)


ProgressSink = Callable[[int, int, Fraction], None]


def certify_no_obstruction(
    cfg: SearchConfig = SearchConfig(),
    progress: ProgressSink | None = None,
    jobs: int = 1,
    checkpoint: str | os.PathLike | None = None,
) -> SearchReport:
    """Run the search; an empty ``obstructive_found`` is the certificate.

    The checkpoint holds the cursor ``{center, d, e}`` of the last finished
    center plus the partial report, and is rewritten after every center.
    """
    start = time.perf_counter()
    centers = _centers(cfg)
    pairs = de_pairs(cfg) if cfg.e_max > 0 else []
    report = SearchReport(pairs_checked=len(pairs))
    if not pairs or not centers:
        report.wall_time = time.perf_counter() - start
        return report

    cursor, partial = _load_checkpoint(checkpoint)
    if cursor is not None and partial is not None:
        done_center = parse_rational(cursor["center"])
        report = partial
        report.pairs_checked = len(pairs)
        centers = [a for a in centers if a > done_center]
        log.info("resuming after center %s", cursor["center"])

    b_window = (as_fraction(cfg.b_window[0]), as_fraction(cfg.b_window[1]))
    tasks = [(a, pairs, b_window, cfg.method) for a in centers]

    def merge(a: Fraction, results):
        report.centers_checked.append(a)
        for (d, e), n_tails, nonexc, found, inconclusive in results:
            report.work_items += 1
            report.classes_generated += n_tails
            report.obstructive_nonexceptional += nonexc
            report.obstructive_found.extend(found)
            report.inconclusive.extend(inconclusive)
        if checkpoint:
            d, e = pairs[-1]
            _save_checkpoint(checkpoint, {"center": format_rational(a), "d": d, "e": e}, report)

    total = len(tasks)
    if jobs > 1 and total > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map() yields in submission order, so merging stays deterministic.
            for i, (task, results) in enumerate(zip(tasks, pool.map(_check_center, tasks)), 1):
                merge(task[0], results)
                if progress:
                    progress(i, total, task[0])
    else:
        for i, task in enumerate(tasks, 1):
            merge(task[0], _check_center(task))
            if progress:
                progress(i, total, task[0])

    report.centers_checked.sort()
    report.obstructive_found.sort(key=lambda r: (r.a, r.cls.e, r.cls.d, r.cls.tail))
    report.wall_time = time.perf_counter() - start
    return report
