from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bk2stieltjes.exact import (
    Method,
    alternating_sequence,
    bk2_falling_factorial,
    bk2_recurrence,
    certify_cm,
    difference_table,
    stirling_first_signed,
)

F = Fraction
LISTED = [F(1), F(1, 2), F(-1, 12), F(1, 24), F(-19, 720), F(3, 160)]


def test_recurrence_matches_listed_values():
    table = bk2_recurrence(5)
    assert list(table.values) == LISTED
    assert table.method is Method.RECURRENCE


def test_n0_is_constant_term():
    assert bk2_recurrence(0).values == (F(1),)
    assert bk2_falling_factorial(0).values == (F(1),)


def test_falling_factorial_small_cases():
    # n=2: (1/2)(s(2,1)/2 + s(2,2)/3) = (1/2)(-1/2 + 1/3)
    assert bk2_falling_factorial(2).values == (F(1), F(1, 2), F(-1, 12))
    assert list(bk2_falling_factorial(5).values) == LISTED


def test_negative_order_rejected():
    with pytest.raises(ValueError):
        bk2_recurrence(-1)
    with pytest.raises(ValueError):
        bk2_falling_factorial(-1)


def test_stirling_rows_expand_falling_factorial():
    rows = stirling_first_signed(7)
    for n, row in enumerate(rows):
        for s in range(-3, 6):
            falling = 1
            for j in range(n):
                falling *= s - j
            assert sum(c * s**k for k, c in enumerate(row)) == falling


def test_cross_method_agreement_to_200():
    assert bk2_recurrence(200).values == bk2_falling_factorial(200).values


def test_b6_cross_method():
    assert bk2_recurrence(6)[6] == bk2_falling_factorial(6)[6]


def test_sign_pattern():
    b = bk2_recurrence(120).values
    for n in range(1, len(b)):
        assert (b[n] > 0) == (n % 2 == 1)


def test_denominators():
    b = bk2_recurrence(5).values
    assert [v.denominator for v in b[1:]] == [2, 12, 24, 720, 160]


def test_alternating_sequence_strips_signs():
    a = alternating_sequence(bk2_recurrence(5))
    assert a == [F(1, 2), F(1, 12), F(1, 24), F(19, 720), F(3, 160)]
    assert a[0] > a[1] > a[2]
    with pytest.raises(ValueError):
        alternating_sequence([F(1)])


def test_difference_examples():
    a = alternating_sequence(bk2_recurrence(5))
    t = difference_table(a, 2)
    assert t.rows[1][0] == F(-5, 12)
    assert t.rows[2][0] == F(3, 8)
    const = difference_table([F(7, 3)] * 3, 1)
    assert all(d == 0 for d in const.rows[1])


def test_difference_order_too_large():
    with pytest.raises(ValueError):
        difference_table([F(1), F(2)], 2)


def test_repeated_differences_equal_binomial_sum():
    a = alternating_sequence(bk2_recurrence(30))
    t = difference_table(a, 20)
    for k, row in enumerate(t.rows):
        for n, d in enumerate(row):
            assert d == sum((-1) ** m * comb(k, m) * a[n + k - m] for m in range(k + 1))


fractions = st.fractions(max_denominator=50).map(Fraction)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(fractions, fractions), min_size=2, max_size=10),
    fractions,
    fractions,
)
def test_differences_are_linear(pairs, alpha, beta):
    s = [p for p, _ in pairs]
    t = [q for _, q in pairs]
    k = len(pairs) - 1
    combo = difference_table([alpha * x + beta * y for x, y in zip(s, t)], k)
    ds, dt = difference_table(s, k), difference_table(t, k)
    for rc, rs, rt in zip(combo.rows, ds.rows, dt.rows):
        assert list(rc) == [alpha * x + beta * y for x, y in zip(rs, rt)]


def test_certificate_for_alternating_sequence():
    a = alternating_sequence(bk2_recurrence(21))
    cert = certify_cm(difference_table(a, 10))
    assert cert.holds and cert.first_violation is None
    assert (cert.max_index, cert.max_order) == (20, 10)


def test_certificate_reaches_order_100():
    a = alternating_sequence(bk2_recurrence(101))
    assert certify_cm(difference_table(a, 100)).holds


def test_increasing_sequence_fails_at_first_difference():
    cert = certify_cm(difference_table([F(0), F(1)], 1))
    assert not cert.holds
    assert cert.first_violation == (1, 0, F(1))


def test_geometric_sequence_is_cm():
    r = F(1, 3)
    assert certify_cm(difference_table([r**n for n in range(15)], 14)).holds


def test_violation_scan_is_k_major():
    # order-0 violation at n=3 must be reported before the order-1 one at n=0
    seq = [F(1), F(2), F(3), F(-1)]
    assert certify_cm(difference_table(seq, 3)).first_violation == (0, 3, F(-1))
