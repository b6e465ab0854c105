"""Rédei 4-ranks against an independent class group computed from reduced forms."""
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bqf_oracle import RealClassGroup, class_group_ratio
from unramified2.clgroup import cross_check_d4, redei_4rank, redei_4rank_rows, redei_matrix, two_torsion_order
from unramified2.count import f_total
from unramified2.discs import factor_prime_discriminants, is_fundamental, sieve_segment
from unramified2.group2 import preset

D4 = preset("D4:C4")


def test_frozen_4ranks():
    # Cl(-39) = C4, Cl(-20) = C2, Cl(-4020) has 4-rank 1, Cl(-15015) has 4-rank 1
    got = {d: redei_4rank(factor_prime_discriminants(d)).rk4 for d in (-39, -20, -4020, -15015, -5460)}
    assert got == {-39: 1, -20: 0, -4020: 1, -15015: 1, -5460: 0}


def test_redei_rows_sum_to_zero():
    for d in (-15015, -5460, 780, 1365):
        m = redei_matrix(factor_prime_discriminants(d))
        assert not (m.sum(axis=1) % 2).any()


def test_imaginary_against_form_oracle():
    for m in range(3, 6000):
        d = -m
        if not is_fundamental(d):
            continue
        fact = factor_prime_discriminants(d)
        assert redei_4rank(fact).cl42 == class_group_ratio(d), d
        assert cross_check_d4(fact), d


def test_real_fields_use_the_narrow_class_group():
    checked = 0
    for d in range(5, 2500):
        if not is_fundamental(d):
            continue
        fact = factor_prime_discriminants(d)
        narrow = RealClassGroup(d).ratio(narrow=True)
        assert redei_4rank(fact).cl42 == narrow, d
        f = f_total(D4, fact=fact).value
        assert f / (1 << fact.omega) == Fraction(narrow - 1, 4), d
        checked += 1
    assert checked > 700


def test_real_ordinary_group_differs_at_136():
    grp = RealClassGroup(136)
    assert grp.ratio(narrow=True) == 2
    assert grp.ratio(narrow=False) == 1
    assert f_total(D4, fact=factor_prime_discriminants(136)).value == 1


@pytest.mark.parametrize("sign", [-1, 1])
def test_vectorized_rank_matches_scalar(sign):
    from unramified2.discs import minus_rows_batch

    batch = sieve_segment(sign, 1, 20000)
    for w in range(1, 6):
        sel = batch.select(batch.omega == w)
        if len(sel) == 0:
            continue
        fast = redei_4rank_rows(minus_rows_batch(sel.prime_discs[:, :w], sel.primes[:, :w]))
        slow = [redei_4rank(sel.factorization(i)).rk4 for i in range(len(sel))]
        assert fast.tolist() == slow


@given(st.integers(-(10**6), 10**6).filter(is_fundamental))
def test_rank_bounds(d):
    fact = factor_prime_discriminants(d)
    rk4 = redei_4rank(fact).rk4
    assert 0 <= rk4 <= fact.omega - 1
    assert two_torsion_order(fact) == 1 << (fact.omega - 1)
    assert cross_check_d4(fact)
