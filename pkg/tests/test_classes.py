import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capcalc.classes import (
    ClassP2,
    ClassSxS,
    Verdict,
    cremona,
    diophantine_check,
    diophantine_check_p2,
    format_tail,
    is_exceptional,
    make_S,
    make_T,
    parse_tail,
    to_p2,
)

# Exceptional classes of the plane blown up in at most 8 points, up to order.
KNOWN_DEL_PEZZO = {
    (1, (1, 1)),
    (2, (1, 1, 1, 1, 1)),
    (3, (2, 1, 1, 1, 1, 1, 1)),
    (4, (2, 2, 2, 1, 1, 1, 1, 1)),
    (5, (2, 2, 2, 2, 2, 2, 1, 1)),
    (6, (3, 2, 2, 2, 2, 2, 2, 2)),
}

p2_classes = st.builds(
    ClassP2,
    st.integers(-5, 30),
    st.lists(st.integers(-5, 20), min_size=0, max_size=10).map(tuple),
)


def p2_invariants(c: ClassP2):
    return 3 * c.degree - sum(c.tail), c.degree**2 - sum(m * m for m in c.tail)


@given(p2_classes)
def test_cremona_is_involution(c):
    assert cremona(cremona(c)) == c.padded(3)


@given(p2_classes)
def test_cremona_preserves_pairings(c):
    assert p2_invariants(cremona(c)) == p2_invariants(c.padded(3))


@given(
    st.integers(0, 40),
    st.integers(0, 40),
    st.lists(st.integers(0, 20), min_size=1, max_size=10).map(tuple),
)
def test_basis_change_preserves_diophantine(d, e, tail):
    c = ClassSxS(d, e, tail)
    assert diophantine_check(c) == diophantine_check_p2(to_p2(c))


def test_parse_format_tail():
    assert parse_tail("4^x7,3") == (4,) * 7 + (3,)
    assert parse_tail("2x3, 1") == (2, 2, 2, 1)
    assert format_tail((4,) * 7 + (3,)) == "4^x7, 3"
    assert parse_tail(format_tail((5, 5, 2, 1, 1))) == (5, 5, 2, 1, 1)


def test_family_formulas():
    assert make_S(1) == ClassSxS(3, 1, (1,) * 7 + (0,))
    assert make_S(2) == ClassSxS(10, 6, (4,) * 7 + (3,))
    assert make_T(1) == ClassSxS(6, 3, (3,) + (2,) * 7)
    assert make_T(2) == ClassSxS(15, 10, (7,) + (6,) * 7)
    with pytest.raises(ValueError):
        make_S(0)


@pytest.mark.parametrize("k", range(1, 26))
def test_families_are_exceptional(k):
    for c in (make_S(k), make_T(k)):
        assert diophantine_check(c)
        res = is_exceptional(c)
        assert res.verdict is Verdict.YES
        assert res.moves <= 5 * k + 10


def test_small_example_and_trace_end():
    res = is_exceptional(ClassSxS(2, 2, (2, 1, 1, 1, 1, 1)))
    assert res.verdict is Verdict.YES
    assert res.trace[-1] == ClassP2(0, (-1,))


def test_rejections():
    assert is_exceptional(ClassSxS(3, 3, (1, 1, 1))).verdict is Verdict.NO
    # (3; 1^x8) solves the plane equations?  No: 3*3-1 = 8 but 9+1 != 8.
    assert is_exceptional(ClassP2(3, (1,) * 8)).verdict is Verdict.NO


def test_del_pezzo_oracle():
    """Brute force over degree <= 6 and at most 8 non-negative entries."""
    found = set()
    for d in range(1, 7):
        for n in range(1, 9):
            for tail in itertools.combinations_with_replacement(range(d, 0, -1), n):
                c = ClassP2(d, tail)
                if diophantine_check_p2(c):
                    assert is_exceptional(c).verdict is Verdict.YES, c
                    found.add((d, tail))
    assert found == KNOWN_DEL_PEZZO


@st.composite
def cremona_orbit(draw):
    """Walk from (1; 1, 1) by permuting and applying Cremona moves."""
    c = ClassP2(1, (1, 1) + (0,) * draw(st.integers(1, 8)))
    for _ in range(draw(st.integers(0, 12))):
        perm = draw(st.permutations(range(len(c.tail))))
        c = cremona(ClassP2(c.degree, tuple(c.tail[i] for i in perm)))
    return c


@settings(max_examples=300)
@given(cremona_orbit())
def test_orbit_of_line_class_is_exceptional(c):
    if c.degree > 0 and all(m >= 0 for m in c.tail):
        assert diophantine_check_p2(c)
        assert is_exceptional(c).verdict is Verdict.YES


def test_diophantine_solution_that_is_not_exceptional():
    c = ClassP2(5, (3, 3) + (1,) * 8)
    assert diophantine_check_p2(c)
    assert is_exceptional(c).verdict is Verdict.NO


def test_move_budget_reports_inconclusive():
    assert is_exceptional(make_T(10), max_moves=3).verdict is Verdict.INCONCLUSIVE
