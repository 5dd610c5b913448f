"""Acceptance checks; each prints one PASS/FAIL line."""

import random
import time
import warnings
from contextlib import contextmanager
from fractions import Fraction

import pytest
from sympy.utilities.iterables import partitions

from capcalc.classes import ClassSxS, Verdict, is_exceptional, make_S, make_T
from capcalc.cli import emit_rf_curve
from capcalc.obstruction import (
    IntervalIndex,
    classify_center8,
    interval_endpoints,
    interval_index,
    is_obstructive_at,
    mu,
    rf,
)
from capcalc.reduction import Outcome, m_threshold, reduce_at_point, verify_volume_fills
from capcalc.search import SearchConfig, candidate_centers, certify_no_obstruction, extend


@pytest.fixture
def report(capsys):
    """Yields a context manager that times a block and prints its verdict."""

    @contextmanager
    def check(label: str, limit_s: float | None = None):
        start = time.perf_counter()
        ok = False
        detail = ""
        try:
            yield
            elapsed = time.perf_counter() - start
            detail = f"{elapsed * 1000:.1f} ms"
            if limit_s is not None:
                assert elapsed < limit_s, f"took {elapsed:.3f}s, limit {limit_s}s"
            ok = True
        except AssertionError as exc:
            detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
            raise
        finally:
            with capsys.disabled():
                print(f"\n[{'PASS' if ok else 'FAIL'}] {label} ({detail})")

    return check


def test_ac01_rf_at_b2(report):
    with report("AC1 RF(2) endpoint equals 289/36", 1e-3):
        assert 2 * 2 * mu(make_T(1), 8, 2) ** 2 == Fraction(289, 36)


def _random_in(lo: Fraction, hi: Fraction, rng: random.Random) -> Fraction:
    while True:
        den = rng.randint(2, 10**6)
        b = lo + (hi - lo) * Fraction(rng.randint(1, den - 1), den)
        if lo < b < hi:
            return b


def test_ac02_rf_formulas_on_I3_I4(report):
    rng = random.Random(20240531)
    with report("AC2 RF formulas on I3 and I4 (100 points each)", 1.0):
        lo, hi = interval_endpoints(3)
        for _ in range(100):
            b = _random_in(lo, hi, rng)
            assert rf(b) == 2 * b * (Fraction(31) / (10 + 6 * b)) ** 2
        lo, hi = interval_endpoints(4)
        for _ in range(100):
            b = _random_in(lo, hi, rng)
            assert rf(b) == 2 * b * (Fraction(49) / (15 + 10 * b)) ** 2


def test_ac03_families_exceptional(report):
    with report("AC3 S_k and T_k exceptional for k = 1..25 within 5k+10 moves", 1.0):
        for k in range(1, 26):
            for c in (make_S(k), make_T(k)):
                res = is_exceptional(c)
                assert res.verdict is Verdict.YES, (c, res.reason)
                assert res.moves <= 5 * k + 10, (c, res.moves)


def _family(n: int) -> ClassSxS:
    return make_T(n // 2) if n % 2 == 0 else make_S(n // 2 + 1)


def test_ac04_obstructive_support_at_8(report):
    grid = [1 + Fraction(i, 2001) for i in range(1, 2001)]
    with report("AC4 family members obstructive at a=8 exactly on their interval", 10.0):
        where: dict[int, list[int]] = {}
        for i, b in enumerate(grid):
            idx = interval_index(b)
            if isinstance(idx, IntervalIndex):
                where.setdefault(idx.n, []).append(i)
        assert where, "grid misses every interval"
        for n, positions in where.items():
            c = _family(n).ordered()
            lo, hi = interval_endpoints(n)
            assert positions == list(range(positions[0], positions[-1] + 1))
            for i in positions:
                assert is_obstructive_at(c, 8, grid[i]).obstructive, (n, grid[i])
            # 2b<m,w>^2 - 8(d+be)^2 is concave in b (e > 0), so the obstructive
            # b form one interval; false on both grid neighbours pins it down.
            assert c.e > 0
            for j in (positions[0] - 1, positions[-1] + 1):
                if 0 <= j < len(grid):
                    assert not is_obstructive_at(c, 8, grid[j]).obstructive, (n, grid[j])
        # Full scan for the classes that own many grid points.
        for n in range(2, 21):
            c = _family(n).ordered()
            lo, hi = interval_endpoints(n)
            for b in grid:
                assert is_obstructive_at(c, 8, b).obstructive == (lo < b < hi), (n, b)


def _brute_center8(e_max: int) -> set[ClassSxS]:
    out = set()
    for e in range(1, e_max + 1):
        for d in range(e, e + 40):
            s1, s2 = 2 * (d + e) - 1, 2 * d * e + 1
            for m in range(0, d + e + 1):
                for tail in ((m,) * 8, (m,) * 7 + (m - 1,), (m + 1,) + (m,) * 7):
                    if min(tail) >= 0 and sum(tail) == s1 and sum(x * x for x in tail) == s2:
                        out.add(ClassSxS(d, e, tail))
    return out


def test_ac05_classification_at_8(report):
    with report("AC5 classify_center8(40) is exactly S_k, T_k with e <= 40", 30.0):
        got = set(classify_center8(40))
        families = {c for k in range(1, 40) for c in (make_S(k), make_T(k)) if c.e <= 40}
        assert got == families
        assert got == _brute_center8(40)


def test_ac06_search_certificate_desk_scale(report):
    with report("AC6 no obstructive classes for q <= 11, e <= 15"):
        res = certify_no_obstruction(SearchConfig(q_max=11, e_max=15))
        assert len(res.centers_checked) == 41
        assert res.obstructive_found == [] and res.certified


@pytest.mark.slow
def test_ac06b_search_certificate_full_range(report):
    with report("AC6b no obstructive classes for q <= 11, e <= 40"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = certify_no_obstruction(SearchConfig(q_max=11, e_max=40))
        assert res.obstructive_found == [] and res.certified


def _partition_oracle(l2: int, l1: int) -> set[tuple[int, ...]]:
    if l1 == 0:
        return {()} if l2 == 0 else set()
    out = set()
    for p in partitions(l1):
        parts = tuple(sorted((k for k, mult in p.items() for _ in range(mult)), reverse=True))
        if sum(x * x for x in parts) == l2:
            out.add(parts)
    return out


def test_ac07_extend_oracle(report):
    extend.cache_clear()
    with report("AC7 extend equals partition oracle for l1 <= 12, l2 <= 60", 10.0):
        for l1 in range(0, 13):
            for l2 in range(0, 61):
                got = extend(l2, l1)
                assert len(got) == len(set(got))
                assert set(got) == _partition_oracle(l2, l1), (l2, l1)


def test_ac08_candidate_centers(report):
    with report("AC8 candidate_centers(11) has 41 elements", 0.1):
        assert len(candidate_centers(11)) == 41


def test_ac09_volume_fills_above_9(report):
    a_samples = [Fraction(9) + Fraction(i, 4) for i in range(29)]
    b_samples = [Fraction(1), Fraction(5, 4), Fraction(3, 2), Fraction(7, 4), Fraction(2)]
    assert a_samples[-1] == 16
    with report("AC9a reduction succeeds on the 29 x 5 grid within 50 moves", 5.0):
        rep = verify_volume_fills(a_samples, b_samples, max_moves=50)
        assert len(rep.points) == 145
        assert rep.all_success
        assert rep.max_moves <= 50
    with report("AC9b reduction fails below RF at b = 8/5", 1.0):
        b, a = Fraction(8, 5), Fraction(8001, 1000)
        assert a < rf(b)
        assert reduce_at_point(a, b).outcome is not Outcome.SUCCESS


def test_ac10_m_anchors(report):
    with report("AC10 m(2,6)=9, m(3,8)=256/25, m(6,14)=49/4", 0.1):
        assert m_threshold(2, 6) == 9
        assert m_threshold(3, 8) == Fraction(256, 25)
        assert m_threshold(6, 14) == Fraction(49, 4)


def test_ac11_rf_curve_endpoint(report):
    with report("AC11 rf-curve over (1.24, 2) ends at (2, 8.027777778)", 1.0):
        rows = emit_rf_curve(Fraction(124, 100), Fraction(2), 76)
        last = rows[-1]
        assert last.b == 2 and last.rf == Fraction(289, 36)
        assert round(float(last.rf), 9) == round(8 + 1 / 36, 9) == 8.027777778
        assert all(r.rf is None for r in rows if r.cls == "unknown")
        assert all(r.rf is not None and r.rf > 8 for r in rows if r.cls != "unknown")
