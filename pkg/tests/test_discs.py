"""Tests for Kronecker symbols, fundamental discriminants and the sieve."""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unramified2.discs import (
    SweepRange,
    factor_prime_discriminants,
    is_fundamental,
    kronecker,
    minus_rows_batch,
    segments,
    sieve_batches,
    sieve_fundamental,
    sieve_segment,
)

SMALL_PRIMES = [p for p in range(3, 200) if all(p % k for k in range(2, int(p**0.5) + 1))]


def euler_symbol(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def kronecker_at_two(a: int) -> int:
    if a % 2 == 0:
        return 0
    return 1 if a % 8 in (1, 7) else -1


def fundamental_by_definition(d: int) -> bool:
    def squarefree(m):
        return all(m % (k * k) for k in range(2, int(abs(m) ** 0.5) + 1))

    if d % 4 == 1:
        return d != 1 and squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(abs(m))
    return False


@given(st.integers(-10**6, 10**6), st.sampled_from(SMALL_PRIMES))
def test_kronecker_odd_prime_is_euler(a, p):
    assert kronecker(a, p) == euler_symbol(a, p)


@given(st.integers(-10**6, 10**6))
def test_kronecker_at_two(a):
    assert kronecker(a, 2) == kronecker_at_two(a)


@given(st.integers(-10**4, 10**4), st.integers(1, 500), st.integers(1, 500))
def test_kronecker_multiplicative_in_bottom(a, m, n):
    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


def test_kronecker_sign_conventions():
    assert kronecker(-1, -1) == -1
    assert kronecker(5, 0) == 0 and kronecker(1, 0) == 1
    assert kronecker(-4, 3) == -1
    assert kronecker(8, 7) == 1


def test_is_fundamental_matches_definition():
    for d in range(-3000, 3000):
        assert is_fundamental(d) == fundamental_by_definition(d), d


@given(st.integers(-10**6, 10**6).filter(is_fundamental))
def test_factorization_multiplies_back(d):
    fact = factor_prime_discriminants(d)
    assert np.prod(fact.prime_discs, dtype=object) == d
    assert list(fact.primes) == sorted(fact.primes)
    for q in fact.prime_discs:
        assert is_fundamental(q)
    assert fact.omega == len(set(fact.primes))


def test_factorization_frozen():
    f = factor_prime_discriminants(-4020)
    assert f.prime_discs == (-4, -3, 5, -67) and f.primes == (2, 3, 5, 67) and f.ord2 == 2
    assert factor_prime_discriminants(-15015).prime_discs == (-3, 5, -7, -11, 13)
    assert factor_prime_discriminants(136).prime_discs == (8, 17)
    assert factor_prime_discriminants(-8).ord2 == 3
    with pytest.raises(ValueError):
        factor_prime_discriminants(20)


def test_symmat_orientation():
    f = factor_prime_discriminants(-15015)
    for a in range(f.omega):
        for b in range(f.omega):
            if a != b:
                assert f.symmat[a, b] == kronecker(f.prime_discs[b], f.primes[a])
            assert ((f.minus_rows[a] >> b) & 1) == (f.symmat[a, b] == -1)


@pytest.mark.parametrize("sign", [-1, 1])
@pytest.mark.parametrize("alpha", [None, 0, 2, 3])
def test_sieve_matches_scalar_scan(sign, alpha):
    X = 6000
    got = [f.d for f in sieve_fundamental(SweepRange(sign, X, alpha))]
    want = [sign * m for m in range(1, X) if is_fundamental(sign * m)]
    if alpha is not None:
        want = [d for d in want if factor_prime_discriminants(d).ord2 == alpha]
    assert got == want


@given(st.integers(0, 10**6), st.integers(1, 3000), st.sampled_from([-1, 1]))
def test_sieve_segment_factorizations(lo, width, sign):
    batch = sieve_segment(sign, lo, lo + width)
    for i in range(len(batch)):
        f = batch.factorization(i)
        assert f == factor_prime_discriminants(f.d)


def test_segments_cover_range():
    segs = segments(100, 30)
    assert segs == [(0, 30), (30, 60), (60, 90), (90, 100)]
    assert sum(len(b) for b in sieve_batches(SweepRange(-1, 5000), size=777)) == sum(
        1 for m in range(1, 5000) if is_fundamental(-m)
    )


def test_minus_rows_batch_matches_scalar():
    batch = sieve_segment(-1, 1000, 40000)
    for w in range(1, 6):
        sel = batch.select(batch.omega == w)
        rows = minus_rows_batch(sel.prime_discs[:, :w], sel.primes[:, :w])
        for i in range(0, len(sel), 37):
            assert tuple(int(x) for x in rows[i]) == sel.factorization(i).minus_rows


def test_empty_and_invalid_ranges():
    assert len(sieve_segment(-1, 50, 50)) == 0
    assert len(sieve_segment(-1, 0, 4)) == 1  # d = -3 only
    with pytest.raises(ValueError):
        SweepRange(0, 100)
    with pytest.raises(ValueError):
        SweepRange(-1, 100, alpha=1)
