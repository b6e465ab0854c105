"""Rédei-matrix oracle for the 4-rank of the class group.

For d = q_1 ... q_w (prime discriminants over primes p_1, ..., p_w) the Rédei
matrix has entry (i, j), i != j, equal to 1 iff (q_j / p_i) = -1, with the
diagonal chosen so each row sums to 0.  Then rk4 = w - 1 - rank(R).  For
d > 0 this is the 4-rank of the narrow class group.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .discs import DiscFactorization
from .gf2forms import rank


@dataclass(frozen=True)
class RedeiReport:
    d: int
    matrix: np.ndarray
    rk4: int

    @property
    def cl42(self) -> int:
        """|Cl[4] / Cl[2]| = 2^rk4."""
        return 1 << self.rk4


def redei_matrix(fact: DiscFactorization) -> np.ndarray:
    w = fact.omega
    m = np.zeros((w, w), dtype=np.uint8)
    for i, row in enumerate(fact.minus_rows):
        for j in range(w):
            m[i, j] = (row >> j) & 1
        m[i, i] = bin(row).count("1") & 1
    return m


def redei_4rank(fact: DiscFactorization) -> RedeiReport:
    m = redei_matrix(fact)
    return RedeiReport(fact.d, m, fact.omega - 1 - rank(m))


def redei_4rank_rows(rows: np.ndarray) -> np.ndarray:
    """Vectorized rk4 for a block of equal-omega minus-row words (N, w)."""
    N, w = rows.shape
    diag = np.array([bin(i).count("1") & 1 for i in range(1 << w)], dtype=np.uint16)
    full = rows | (diag[rows] << np.arange(w, dtype=np.uint16))
    out = np.empty(N, dtype=np.int64)
    for k in range(N):
        out[k] = w - 1 - rank([int(x) for x in full[k]])
    return out


def two_torsion_order(fact: DiscFactorization) -> int:
    """|Cl[2]| = 2^(omega - 1) (narrow class group when d > 0)."""
    return 1 << (fact.omega - 1)


def cross_check_d4(fact: DiscFactorization) -> bool:
    """f(D4:C4, d) / 2^omega == (|Cl[4]/Cl[2]| - 1) / 4."""
    from .count import f_total
    from .group2 import preset

    f = f_total(preset("D4:C4"), fact=fact).value
    return f / (1 << fact.omega) == Fraction(redei_4rank(fact).cl42 - 1, 4)
