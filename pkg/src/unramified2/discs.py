"""Fundamental discriminants, prime-discriminant factorizations and sieves.

A fundamental discriminant d factors uniquely as a product of pairwise
coprime prime discriminants: p* = (-1)^((p-1)/2) p for odd p, and one of
-4, 8, -8 for the even part.  The sieve works on |d| in segments of 2^20 and
returns numpy batches; :func:`sieve_fundamental` wraps it as a stream of
:class:`DiscFactorization` objects.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isqrt
from typing import Iterator

import numpy as np

SEGMENT = 1 << 20
MAX_PRIMES = 9  # 2*3*5*...*23 already exceeds 2^31


def kronecker(a: int, n: int) -> int:
    """The Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v & 1 and a % 8 in (3, 5):
            result = -result
    # now n odd positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return _squarefree(abs(d))
    if d % 4 == 0:
        m = d // 4
        if m % 4 in (2, 3):
            return _squarefree(abs(m))
    return False


def _squarefree(m: int) -> bool:
    p = 2
    while p * p <= m:
        if m % (p * p) == 0:
            return False
        p += 1 if p == 2 else 2
    return True


def _odd_primes(m: int) -> list[int]:
    out = []
    p = 3
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            m //= p
        p += 2
    if m > 1:
        out.append(m)
    return out


def prime_disc(p: int) -> int:
    return p if p % 4 == 1 else -p


@dataclass(frozen=True)
class DiscFactorization:
    """d with its prime discriminants ``prime_discs`` over the ``primes``.

    Ordered by underlying prime, so an even factor comes first.
    ``symmat[a, b] = (q_b / p_a)`` for a != b; the diagonal is 0.
    """

    d: int
    prime_discs: tuple[int, ...]
    primes: tuple[int, ...]

    @property
    def omega(self) -> int:
        return len(self.prime_discs)

    @property
    def ord2(self) -> int:
        return {0: 0, -4: 2, 8: 3, -8: 3}[self.prime_discs[0] if self.primes[0] == 2 else 0]

    @cached_property
    def symmat(self) -> np.ndarray:
        w = self.omega
        out = np.zeros((w, w), dtype=np.int8)
        for a in range(w):
            for b in range(w):
                if a != b:
                    out[a, b] = kronecker(self.prime_discs[b], self.primes[a])
        return out

    @cached_property
    def minus_rows(self) -> tuple[int, ...]:
        """Row words: bit b of row a is set iff (q_b / p_a) = -1."""
        return tuple(sum(1 << b for b in range(self.omega) if self.symmat[a, b] == -1) for a in range(self.omega))


def factor_prime_discriminants(d: int) -> DiscFactorization:
    if not is_fundamental(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    m = abs(d)
    alpha = 0
    while m % 2 == 0:
        m //= 2
        alpha += 1
    odd = _odd_primes(m)
    qs = [prime_disc(p) for p in odd]
    prod = 1
    for x in qs:
        prod *= x
    if alpha:
        q2 = d // prod
        assert q2 in (-4, 8, -8), (d, q2)
        return DiscFactorization(d, (q2, *qs), (2, *odd))
    assert prod == d
    return DiscFactorization(d, tuple(qs), tuple(odd))


@dataclass(frozen=True)
class SweepRange:
    """Fundamental d with 0 < sign*d < xmax and ord_2(d) = alpha (None = all)."""

    sign: int
    xmax: int
    alpha: int | None = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.alpha not in (None, 0, 2, 3):
            raise ValueError("alpha must be 0, 2, 3 or None")


@dataclass
class DiscBatch:
    """A block of discriminants as parallel arrays.

    ``prime_discs`` and ``primes`` have shape (N, MAX_PRIMES); unused slots
    hold 0 and 1.
    """

    d: np.ndarray
    omega: np.ndarray
    prime_discs: np.ndarray
    primes: np.ndarray
    alpha: np.ndarray

    def __len__(self):
        return len(self.d)

    def select(self, mask) -> "DiscBatch":
        return DiscBatch(self.d[mask], self.omega[mask], self.prime_discs[mask], self.primes[mask], self.alpha[mask])

    def factorization(self, i: int) -> DiscFactorization:
        w = int(self.omega[i])
        return DiscFactorization(int(self.d[i]), tuple(int(x) for x in self.prime_discs[i, :w]), tuple(int(x) for x in self.primes[i, :w]))


_PRIME_CACHE: dict[int, np.ndarray] = {}


def primes_upto(n: int) -> np.ndarray:
    if n not in _PRIME_CACHE:
        sieve = np.ones(n + 1, dtype=bool)
        sieve[:2] = False
        for k in range(2, isqrt(n) + 1):
            if sieve[k]:
                sieve[k * k :: k] = False
        _PRIME_CACHE[n] = np.nonzero(sieve)[0].astype(np.int64)
    return _PRIME_CACHE[n]


def sieve_segment(sign: int, lo: int, hi: int, alpha: int | None = None) -> DiscBatch:
    """Fundamental d = sign*m for lo <= m < hi, ascending in m."""
    lo = max(lo, 2)
    if hi <= lo:
        return _empty_batch()
    m = np.arange(lo, hi, dtype=np.int64)
    a0 = (m & 1) == 1
    a2 = ((m & 3) == 0) & (((m >> 2) & 1) == 1)
    a3 = ((m & 7) == 0) & (((m >> 3) & 1) == 1)
    alph = np.where(a0, 0, np.where(a2, 2, 3)).astype(np.int8)
    odd = m >> alph
    keep = a0 | a2 | a3
    sm = sign * m
    keep &= ~a0 | ((sm & 3) == 1)
    keep &= ~a2 | (((sign * odd) & 3) == 3)
    if alpha is not None:
        keep &= alph == alpha
    n = hi - lo
    fac = np.zeros((n, MAX_PRIMES - 1), dtype=np.int64)
    cnt = np.zeros(n, dtype=np.int8)
    rem = odd.copy()
    for p in primes_upto(isqrt(hi - 1) + 1)[1:]:
        p = int(p)
        start = (-lo) % p
        if start >= n:
            continue
        rows = np.arange(start, n, p)
        fac[rows, cnt[rows]] = p
        cnt[rows] += 1
        rem[rows] //= p
        p2 = p * p
        s2 = (-lo) % p2
        if s2 < n:
            keep[s2::p2] = False
    big = rem > 1
    fac[big, cnt[big]] = rem[big]
    cnt[big] += 1
    idx = np.nonzero(keep)[0]
    if len(idx) == 0:
        return _empty_batch()
    fac, cnt, alph = fac[idx], cnt[idx], alph[idx]
    d = sign * m[idx]
    N = len(idx)
    q = np.zeros((N, MAX_PRIMES), dtype=np.int64)
    p = np.ones((N, MAX_PRIMES), dtype=np.int64)
    even = alph > 0
    shift = even.astype(np.int64)
    cols = np.arange(MAX_PRIMES - 1)
    valid = cols[None, :] < cnt[:, None]
    rows_i, cols_i = np.nonzero(valid)
    pv = fac[rows_i, cols_i]
    qv = np.where(pv % 4 == 1, pv, -pv)
    p[rows_i, cols_i + shift[rows_i]] = pv
    q[rows_i, cols_i + shift[rows_i]] = qv
    # even part: d / prod(odd prime discriminants)
    neg_odd = (np.where(valid, fac % 4 == 3, False).sum(axis=1) & 1).astype(np.int64)
    odd_sign = 1 - 2 * neg_odd
    q2 = np.where(alph == 2, -4, 8 * sign * odd_sign)
    q[even, 0] = q2[even]
    p[even, 0] = 2
    omega = (cnt + even).astype(np.int8)
    return DiscBatch(d, omega, q, p, alph)


def _empty_batch() -> DiscBatch:
    z = np.zeros(0, dtype=np.int64)
    return DiscBatch(z, z.astype(np.int8), np.zeros((0, MAX_PRIMES), np.int64), np.ones((0, MAX_PRIMES), np.int64), z.astype(np.int8))


def segments(X: int, size: int = SEGMENT) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, X)) for lo in range(0, X, size)]


def sieve_batches(rng: SweepRange, size: int = SEGMENT) -> Iterator[DiscBatch]:
    if rng.xmax > 1 << 31:
        raise ValueError("X above 2^31 would overflow the int64 symbol kernel")
    for lo, hi in segments(rng.xmax, size):
        yield sieve_segment(rng.sign, lo, hi, rng.alpha)


def sieve_fundamental(rng: SweepRange) -> Iterator[DiscFactorization]:
    """Every fundamental discriminant of the range, ascending in |d|."""
    for batch in sieve_batches(rng):
        for i in range(len(batch)):
            yield batch.factorization(i)


def _powmod(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(base)
    base = base % mod
    exp = exp.copy()
    while np.any(exp):
        odd = (exp & 1).astype(bool)
        result = np.where(odd, (result * base) % mod, result)
        base = (base * base) % mod
        exp >>= 1
    return result


def minus_rows_batch(q: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Vectorized :attr:`DiscFactorization.minus_rows` for a fixed-omega block.

    Args:
        q, p: arrays of shape (N, w) holding the prime discriminants and
            their primes (no padding).

    Returns:
        uint16 array (N, w); bit b of entry a is set iff (q_b / p_a) = -1.
    """
    N, w = q.shape
    if w == 0 or N == 0:
        return np.zeros((N, w), dtype=np.uint16)
    top = np.broadcast_to(q[:, None, :], (N, w, w))
    bot = np.broadcast_to(p[:, :, None], (N, w, w))
    odd_bot = bot != 2
    modv = np.where(odd_bot, bot, 3)
    e = (modv - 1) // 2
    leg = _powmod(np.where(odd_bot, top % modv, 1), e, modv)
    minus = np.where(odd_bot, leg == modv - 1, np.isin(top % 8, (3, 5)))
    minus &= ~np.eye(w, dtype=bool)[None]
    weights = (1 << np.arange(w)).astype(np.uint16)
    return (minus.astype(np.uint16) * weights[None, None, :]).sum(axis=2).astype(np.uint16)
