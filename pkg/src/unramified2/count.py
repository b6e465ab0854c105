"""Counting (G, H, T)-extensions of a quadratic field with discriminant d.

For T = (t_1, ..., t_r) let S_i = {j : B(t_i, t_j) = 1}.  A surjective
assignment of the prime discriminants of d to slots 1..r gives a tuple
(d_1, ..., d_r) with product d, and contributes

    prod_i prod_{p | d_i} (1 + (prod_{j in S_i} d_j / p)),

which is either 0 or 2^omega(d).  Dividing the total by 2^n |Aut_{H,T}| gives
f_T(d); summing over spanning T inside T0 gives f(d).

The symbol at p = 2 is the Kronecker symbol, including when 4 || d.  The
variant that squares it in that case is available as ``ord2_exponent=True``
for comparison; it disagrees with the class group (d = -20 is the smallest
witness).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .discs import DiscBatch, DiscFactorization, kronecker, minus_rows_batch
from .group2 import CentralExtension, PairSpec, is_admissible, spanning_subsets

_PARITY = np.array([bin(i).count("1") & 1 for i in range(1 << 9)], dtype=bool)


@dataclass(frozen=True)
class CountResult:
    value: Fraction
    raw_sum: int

    def __int__(self):
        return int(self.value)


def _slot_symbol(fact: DiscFactorization, assign, a: int, nbrs: list[int], ord2_exponent: bool) -> int:
    sym = 1
    for b, slot in enumerate(assign):
        if b != a and slot in nbrs:
            sym *= int(fact.symmat[a, b])
    if ord2_exponent and fact.primes[a] == 2 and fact.ord2 == 2:
        sym *= sym
    return sym


def tuple_indicator(fact: DiscFactorization, assign, spec: PairSpec, ord2_exponent: bool = False) -> int:
    """prod over slots i and primes p | d_i of (1 + (prod_{j in S_i} d_j / p)).

    Args:
        assign: slot index (0-based) for each prime of ``fact``, in order.
    """
    if len(assign) != fact.omega:
        raise ValueError("assignment length must equal omega(d)")
    nbrs = spec.neighbours
    out = 1
    for a, slot in enumerate(assign):
        out *= 1 + _slot_symbol(fact, assign, a, nbrs[slot], ord2_exponent)
        if out == 0:
            return 0
    return out


def tuple_indicator_direct(fact: DiscFactorization, assign, spec: PairSpec) -> int:
    """Same value computed from the slot products d_j, without ``symmat``."""
    r = spec.r
    dj = [1] * r
    for a, slot in enumerate(assign):
        dj[slot] *= fact.prime_discs[a]
    out = 1
    for a, slot in enumerate(assign):
        top = 1
        for j in spec.neighbours[slot]:
            top *= dj[j]
        out *= 1 + kronecker(top, fact.primes[a])
    return out


def surjective_assignments(r: int, w: int):
    for assign in product(range(r), repeat=w):
        if len(set(assign)) == r:
            yield assign


def aut_size(spec: PairSpec) -> int:
    return len(spec.aut)


def f_t(spec: PairSpec, fact: DiscFactorization, ord2_exponent: bool = False) -> CountResult:
    """f_T(d) by summing the indicator over all surjective assignments."""
    if not is_admissible(spec):
        raise ValueError("spec is not admissible")
    raw = 0
    if fact.omega >= spec.r:
        for assign in surjective_assignments(spec.r, fact.omega):
            raw += tuple_indicator(fact, assign, spec, ord2_exponent)
    value = Fraction(raw, (1 << spec.n) * aut_size(spec))
    return CountResult(value, raw)


def subset_specs(spec: PairSpec) -> list[PairSpec]:
    return [spec.with_t(t) for t in spanning_subsets(spec)]


def f_total(ext: CentralExtension | PairSpec, h: int | None = None, fact: DiscFactorization | None = None) -> CountResult:
    """f(d) = sum of f_T(d) over spanning T inside T0.

    Accepts ``f_total(ext, h, fact)`` or ``f_total(spec, fact=fact)``.
    """
    spec = ext if isinstance(ext, PairSpec) else PairSpec(ext, h)
    total, raw = Fraction(0), 0
    for sub in subset_specs(spec):
        res = f_t(sub, fact)
        total += res.value
        raw += res.raw_sum
    return CountResult(total, raw)


# ------------------------------------------------------------ batch kernel


@lru_cache(maxsize=None)
def _assignment_masks(r: int, nbrs: tuple[tuple[int, ...], ...], w: int) -> np.ndarray:
    """For each surjective assignment and prime a, the word of primes b whose
    slot is a neighbour of a's slot.  Shape (A, w), dtype uint16."""
    grid = np.array(np.meshgrid(*[np.arange(r)] * w, indexing="ij")).reshape(w, -1).T
    if w == 0:
        grid = np.zeros((1, 0), dtype=np.int64)
    hit = np.zeros((len(grid), r), dtype=bool)
    for i in range(r):
        hit[:, i] = (grid == i).any(axis=1)
    grid = grid[hit.all(axis=1)]
    nb = np.zeros((r, r), dtype=bool)
    for i, s in enumerate(nbrs):
        nb[i, list(s)] = True
    weights = (1 << np.arange(w)).astype(np.uint16)
    out = np.zeros((len(grid), w), dtype=np.uint16)
    for a in range(w):
        # neighbour flags of each prime b relative to prime a's slot
        flags = nb[grid[:, a][:, None], grid]
        flags[:, a] = False
        out[:, a] = (flags.astype(np.uint16) * weights).sum(axis=1)
    return out


def valid_counts(spec: PairSpec, rows: np.ndarray, chunk_cells: int = 1 << 22) -> np.ndarray:
    """Number of surjective assignments with nonzero indicator, per row.

    Args:
        rows: uint16 array (N, w) of minus-row words for discriminants with
            the same omega = w.
    """
    N, w = rows.shape
    if w < spec.r or N == 0:
        return np.zeros(N, dtype=np.int64)
    masks = _assignment_masks(spec.r, tuple(tuple(s) for s in spec.neighbours), w)
    A = len(masks)
    step = max(1, chunk_cells // max(A, 1))
    out = np.empty(N, dtype=np.int64)
    for s in range(0, N, step):
        blk = rows[s : s + step]
        bad = np.zeros((len(blk), A), dtype=bool)
        for a in range(w):
            bad |= _PARITY[blk[:, a, None] & masks[None, :, a]]
        out[s : s + step] = A - bad.sum(axis=1)
    return out


def f_t_batch(spec: PairSpec, rows: np.ndarray) -> np.ndarray:
    """Exact integer f_T for a block of equal-omega discriminants."""
    N, w = rows.shape
    counts = valid_counts(spec, rows)
    denom = (1 << spec.n) * aut_size(spec)
    numer = counts << w
    if np.any(numer % denom):
        raise AssertionError("non-integral f_T in batch kernel")
    return numer // denom


def f_total_batch(spec: PairSpec, rows: np.ndarray, subs: list[PairSpec] | None = None) -> np.ndarray:
    subs = subset_specs(spec) if subs is None else subs
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for sub in subs:
        out += f_t_batch(sub, rows)
    return out


def f_total_for_batch(spec: PairSpec, batch: DiscBatch, subs: list[PairSpec] | None = None) -> np.ndarray:
    """f(d) for every discriminant of a sieve batch (any mix of omega)."""
    subs = subset_specs(spec) if subs is None else subs
    out = np.zeros(len(batch), dtype=np.int64)
    for w in np.unique(batch.omega):
        w = int(w)
        sel = np.nonzero(batch.omega == w)[0]
        rows = minus_rows_batch(batch.prime_discs[sel, :w], batch.primes[sel, :w])
        out[sel] = f_total_batch(spec, rows, subs)
    return out
