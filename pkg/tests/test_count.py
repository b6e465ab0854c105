"""Tests for the counting functions f_T and f."""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unramified2.count import (
    f_t,
    f_t_batch,
    f_total,
    f_total_for_batch,
    subset_specs,
    surjective_assignments,
    tuple_indicator,
    tuple_indicator_direct,
)
from unramified2.discs import factor_prime_discriminants, is_fundamental, sieve_segment
from unramified2.group2 import PRESETS, preset

DS = [-20, -84, -420, -4020, -5460, -1155, -3315, 1365, -15015, -39, -195, 780]

# f(d) per preset, frozen from the scalar path.
FROZEN = {
    "D4:C4": [0, 0, 0, 4, 0, 0, 0, 0, 8, 1, 0, 0],
    "D4oC4:Q8": [0, 0, 2, 2, 4, 2, 2, 0, 4, 0, 0, 0],
    "D4oC4:C4xC2": [0, 0, 0, 18, 0, 0, 0, 0, 76, 0, 0, 0],
    "D4xC2:D4": [0, 0, 0, 0, 8, 2, 6, 2, 8, 0, 1, 4],
}

fundamentals = st.integers(-(10**5), 10**5).filter(is_fundamental)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_frozen_values(name):
    spec = preset(name)
    got = [f_total(spec, fact=factor_prime_discriminants(d)).value for d in DS]
    assert got == [Fraction(v) for v in FROZEN[name]]


@given(fundamentals, st.sampled_from(sorted(PRESETS)))
def test_indicator_two_ways(d, name):
    fact = factor_prime_discriminants(d)
    spec = preset(name)
    if fact.omega > 6:
        return
    for assign in surjective_assignments(spec.r, fact.omega):
        val = tuple_indicator(fact, assign, spec)
        assert val == tuple_indicator_direct(fact, assign, spec)
        assert val in (0, 1 << fact.omega)


@given(fundamentals, st.sampled_from(sorted(PRESETS)))
def test_f_t_is_a_nonnegative_integer(d, name):
    fact = factor_prime_discriminants(d)
    for sub in subset_specs(preset(name)):
        v = f_t(sub, fact).value
        assert v >= 0 and v.denominator == 1


def test_f_t_below_rank_is_zero():
    spec = preset("D4oC4:Q8")
    assert f_t(spec, factor_prime_discriminants(-39)).raw_sum == 0


def test_ord2_exponent_variant_fails_at_minus_20():
    """Cl(Q(sqrt -20)) = C2 has no D4 extension, and only the plain symbol says so."""
    spec = preset("D4:C4")
    fact = factor_prime_discriminants(-20)
    assert f_t(spec, fact).value == 0
    assert f_t(spec, fact, ord2_exponent=True).value == 1


@pytest.mark.parametrize("sign", [-1, 1])
@pytest.mark.parametrize("name", sorted(PRESETS))
def test_batch_matches_scalar(sign, name):
    spec = preset(name)
    batch = sieve_segment(sign, 1, 6000)
    fast = f_total_for_batch(spec, batch)
    for i in range(len(batch)):
        fact = batch.factorization(i)
        assert fast[i] == f_total(spec, fact=fact).value, fact.d


def test_f_t_batch_rejects_nothing_on_integral_input():
    spec = preset("D4:C4")
    rows = np.array([[0, 0], [3, 3]], dtype=np.uint16)
    assert f_t_batch(spec, rows).tolist() == [1, 0]


def test_f_total_accepts_ext_and_h():
    spec = preset("D4xC2:D4")
    fact = factor_prime_discriminants(-5460)
    assert f_total(spec.ext, spec.functional, fact).value == f_total(spec, fact=fact).value
