"""Linear algebra and quadratic forms over F2.

Vectors of F2^n are stored as Python ints (bit i is coordinate i, 0-based),
so addition is XOR and every bilinear evaluation is an AND plus a popcount
parity.  Matrices are sequences of such row words.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


def parity(x: int) -> int:
    return x.bit_count() & 1


def vec(bits: Sequence[int] | str) -> int:
    """Pack a 0/1 sequence (or a bit string like "101") into a word.

    The first entry becomes coordinate 0.
    """
    if isinstance(bits, str):
        bits = [int(c) for c in bits]
    out = 0
    for i, b in enumerate(bits):
        if int(b) & 1:
            out |= 1 << i
    return out


def unvec(u: int, n: int) -> tuple[int, ...]:
    return tuple((u >> i) & 1 for i in range(n))


def bitstr(u: int, n: int) -> str:
    return "".join(str(b) for b in unvec(u, n))


def pack_rows(m) -> tuple[list[int], int]:
    """Convert a 2-D 0/1 array-like into (row words, number of columns)."""
    arr = np.asarray(m, dtype=np.uint8) & 1
    if arr.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    return [vec(row) for row in arr], arr.shape[1]


def _as_rows(m) -> list[int]:
    if isinstance(m, np.ndarray) or (len(m) and not isinstance(m[0], (int, np.integer))):
        return pack_rows(m)[0]
    return [int(r) for r in m]


def row_reduce(rows: Iterable[int]) -> list[int]:
    """Reduced row echelon form (pivot = lowest set bit), zero rows dropped."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            piv = r & -r
            basis = [b ^ r if b & piv else b for b in basis]
            basis.append(r)
    basis.sort(key=lambda b: b & -b)
    return basis


def rank(m) -> int:
    """Dimension of the row space of ``m`` over F2.

    Args:
        m: list of row words, or a 2-D 0/1 array.
    """
    return len(row_reduce(_as_rows(m)))


def in_span(basis: Sequence[int], u: int) -> bool:
    """Membership test; ``basis`` must come from :func:`row_reduce`."""
    for b in basis:
        if u & (b & -b):
            u ^= b
    return u == 0


def span(gens: Iterable[int]) -> list[int]:
    """All elements of the span, in increasing order."""
    basis = row_reduce(gens)
    elems = [0]
    for b in basis:
        elems += [e ^ b for e in elems]
    return sorted(elems)


def kernel(rows: Sequence[int], n: int) -> list[int]:
    """Basis of {x in F2^n : parity(row & x) = 0 for every row}."""
    red = row_reduce(rows)
    pivots = {b & -b: b for b in red}
    out = []
    for j in range(n):
        fj = 1 << j
        if fj in pivots:
            continue
        x = fj
        for piv, b in pivots.items():
            if b & fj:
                x |= piv
        out.append(x)
    return out


def complement_basis(sub: Sequence[int], n: int) -> list[int]:
    """Standard basis vectors completing ``sub`` to a basis of F2^n."""
    basis = row_reduce(sub)
    out = []
    for j in range(n):
        cand = row_reduce(basis + [1 << j])
        if len(cand) > len(basis):
            basis = cand
            out.append(1 << j)
    return out


def solve(rows: Sequence[int], rhs: Sequence[int], n: int) -> int | None:
    """One solution x of parity(rows[k] & x) = rhs[k] for all k, or None."""
    aug = [(r, b & 1) for r, b in zip(rows, rhs)]
    piv_rows: list[tuple[int, int, int]] = []
    for r, b in aug:
        for p, pr, pb in piv_rows:
            if r & p:
                r ^= pr
                b ^= pb
        if r == 0:
            if b:
                return None
            continue
        p = r & -r
        piv_rows = [(q, qr ^ r, qb ^ b) if qr & p else (q, qr, qb) for q, qr, qb in piv_rows]
        piv_rows.append((p, r, b))
    x = 0
    for p, _, b in piv_rows:
        if b:
            x |= p
    return x


@dataclass(frozen=True)
class QuadForm:
    """Q(u) = sum_{i<=j} a_ij u_i u_j on F2^n, stored as a symmetric matrix.

    ``rows[i]`` is row i of ``a`` as a word.  Diagonal entries give the
    squares, off-diagonal entries the commutators.
    """

    n: int
    rows: tuple[int, ...]
    diag: int = field(init=False, repr=False, compare=False)
    lower: tuple[int, ...] = field(init=False, repr=False, compare=False)
    offdiag: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or len(self.rows) != self.n:
            raise ValueError("need n >= 1 rows")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full:
                raise ValueError("row wider than n")
            for j in range(self.n):
                if ((r >> j) & 1) != ((self.rows[j] >> i) & 1):
                    raise ValueError("coefficient matrix must be symmetric")
        diag = sum(((r >> i) & 1) << i for i, r in enumerate(self.rows))
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "lower", tuple(r & ((1 << i) - 1) for i, r in enumerate(self.rows)))
        object.__setattr__(self, "offdiag", tuple(r & ~(1 << i) for i, r in enumerate(self.rows)))

    @classmethod
    def from_matrix(cls, a) -> "QuadForm":
        arr = np.asarray(a, dtype=np.uint8) & 1
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected a square matrix")
        return cls(arr.shape[0], tuple(vec(r) for r in arr))

    @classmethod
    def from_coeffs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "QuadForm":
        """Build from 1-based index pairs (i, j) with a_ij = 1."""
        a = np.zeros((n, n), dtype=np.uint8)
        for i, j in pairs:
            a[i - 1, j - 1] = a[j - 1, i - 1] = 1
        return cls.from_matrix(a)

    def matrix(self) -> np.ndarray:
        return np.array([unvec(r, self.n) for r in self.rows], dtype=np.uint8)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def value(self, u: int) -> int:
        acc = u & self.diag
        x = 0
        w = u
        while w:
            i = (w & -w).bit_length() - 1
            x ^= self.lower[i] & u
            w &= w - 1
        return parity(acc) ^ parity(x)

    def polar(self, u: int, v: int) -> int:
        x = 0
        w = u
        while w:
            i = (w & -w).bit_length() - 1
            x ^= self.offdiag[i]
            w &= w - 1
        return parity(x & v)

    def polar_row(self, u: int) -> int:
        """The functional B(u, .) as a word."""
        x = 0
        w = u
        while w:
            i = (w & -w).bit_length() - 1
            x ^= self.offdiag[i]
            w &= w - 1
        return x

    def compose(self, images: Sequence[int]) -> "QuadForm":
        """The form Q o phi, where phi(e_i) = images[i]."""
        n = self.n
        rows = [0] * n
        for i in range(n):
            rows[i] |= self.value(images[i]) << i
            for j in range(i + 1, n):
                if self.polar(images[i], images[j]):
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return QuadForm(n, tuple(rows))


def _check_vec(f: QuadForm, u) -> int:
    if not isinstance(u, (int, np.integer)):
        if len(u) != f.n:
            raise ValueError(f"vector has length {len(u)}, form has n={f.n}")
        return vec(u)
    u = int(u)
    if u < 0 or u >> f.n:
        raise ValueError(f"vector word {u} does not fit in n={f.n}")
    return u


def eval_q(f: QuadForm, u) -> int:
    return f.value(_check_vec(f, u))


def eval_b(f: QuadForm, u, v) -> int:
    return f.polar(_check_vec(f, u), _check_vec(f, v))


def radical(f: QuadForm) -> list[int]:
    """Basis of rad = kernel of the alternating Gram matrix."""
    return kernel(list(f.offdiag), f.n)


@dataclass(frozen=True)
class RadicalDecomposition:
    complement: tuple[int, ...]
    odd: tuple[int, ...]
    singular: tuple[int, ...]


def radical_decompose(f: QuadForm) -> RadicalDecomposition:
    """Split F2^n = V + R + R0 with R + R0 the radical and Q(R0) = 0.

    Q restricted to the radical is additive, hence a linear functional; R0 is
    its kernel and R is spanned by one radical vector with Q = 1 if any.
    """
    rad = row_reduce(radical(f))
    qrow = [f.value(z) for z in rad]
    odd = [z for z, v in zip(rad, qrow) if v]
    if odd:
        z0 = odd[0]
        r0 = row_reduce([z ^ z0 if v else z for z, v in zip(rad, qrow) if z != z0])
        R = (z0,)
    else:
        r0, R = rad, ()
    V = complement_basis(rad, f.n)
    return RadicalDecomposition(tuple(V), R, tuple(r0))


def is_totally_singular(f: QuadForm, gens: Sequence[int]) -> bool:
    return all(f.value(u) == 0 for u in span(gens))


def _coords(basis: Sequence[int], u: int, n: int) -> list[int] | None:
    """Coordinates of u in an independent basis, or None if u is outside."""
    cols = [0] * n
    for k, b in enumerate(basis):
        for i in range(n):
            if (b >> i) & 1:
                cols[i] |= 1 << k
    x = solve(cols, [(u >> i) & 1 for i in range(n)], len(basis))
    if x is None:
        return None
    return [(x >> k) & 1 for k in range(len(basis))]


def hyperbolic_partners(f: QuadForm, us: Sequence[int], inside: Sequence[int]) -> list[int]:
    """Singular v_i in span(inside) with B(u_i, v_j) = delta_ij, B(v_i, v_j) = 0.

    ``us`` must be an independent totally singular family in span(inside),
    and B must be nondegenerate on span(inside).
    """
    inside = row_reduce(inside)
    vs: list[int] = []
    for i, ui in enumerate(us):
        # unknown x = sum c_k inside_k; constraints are linear in c
        cons, rhs = [], []
        for j, uj in enumerate(us):
            cons.append(uj)
            rhs.append(1 if j == i else 0)
        for vj in vs:
            cons.append(vj)
            rhs.append(0)
        rows = [sum(f.polar(c, b) << k for k, b in enumerate(inside)) for c in cons]
        sol = solve(rows, rhs, len(inside))
        if sol is None:
            raise ValueError("form is degenerate on the ambient subspace")
        v = 0
        for k, b in enumerate(inside):
            if (sol >> k) & 1:
                v ^= b
        if f.value(v):
            v ^= ui
        vs.append(v)
    return vs


def disjoint_totally_singular(f: QuadForm, w: Sequence[int]) -> list[int]:
    """A totally singular W' with |W'| = |W| meeting W as little as possible.

    Follows the hyperbolic-pair construction: W0 = W cap V is paired with a
    totally singular W1 in V; if W is larger than W0 the extra generator is
    reflected by swapping the hyperbolic coordinates of its V-part.

    Returns a basis of W'.  The intersection W cap W' is {0} when the form is
    nondegenerate and otherwise lies in <x> with x outside V.

    Raises:
        ValueError: if W is not totally singular or Q vanishes on part of rad.
    """
    wb = row_reduce(w)
    if not is_totally_singular(f, wb):
        raise ValueError("W is not totally singular")
    dec = radical_decompose(f)
    if dec.singular:
        raise ValueError("Q vanishes on a nonzero radical vector (R0 != 0)")
    if not wb:
        return []
    V = list(dec.complement)
    vspace = row_reduce(V)

    def split(u: int) -> tuple[int, int]:
        # u = pV + pR with pR in R
        if in_span(vspace, u):
            return u, 0
        z = dec.odd[0]
        return u ^ z, z

    w0 = [x for x in span(wb) if x and in_span(vspace, x)]
    w0b = row_reduce(w0)
    w1 = hyperbolic_partners(f, w0b, V)
    if len(w0b) == len(wb):
        out = w1
    else:
        extra = next(x for x in wb if not in_span(w0b, x))
        pv, pr = split(extra)
        # pV = sum a_i u_i + sum b_i v_i + w2, w2 orthogonal to W0 + W1;
        # a_i = B(pV, v_i) and b_i = B(pV, u_i) (zero, since W is singular)
        cu = [f.polar(pv, v) for v in w1]
        cv = [f.polar(pv, u) for u in w0b]
        w0_part = 0
        for c, u in zip(cu, w0b):
            if c:
                w0_part ^= u
        w1_part = 0
        for c, v in zip(cv, w1):
            if c:
                w1_part ^= v
        w2 = pv ^ w0_part ^ w1_part
        swapped = 0
        for c, v in zip(cu, w1):
            if c:
                swapped ^= v
        out = list(w1) + [swapped ^ w2 ^ pr]
    out = row_reduce(out)
    if len(out) != len(wb) or not is_totally_singular(f, out):
        raise AssertionError("construction failed its own postcondition")
    return out


def disjoint_postcondition(f: QuadForm, w: Sequence[int], w_new: Sequence[int]) -> bool:
    """Check the output contract of :func:`disjoint_totally_singular`."""
    if len(row_reduce(w)) != len(row_reduce(w_new)) or not is_totally_singular(f, w_new):
        return False
    common = set(span(w)) & set(span(w_new))
    common.discard(0)
    if not common:
        return True
    dec = radical_decompose(f)
    vspace = row_reduce(dec.complement)
    return len(common) == 1 and not in_span(vspace, common.pop())


def singular_vectors(f: QuadForm) -> list[int]:
    return [u for u in range(1 << f.n) if f.value(u) == 0]


@dataclass
class IsotropicReport:
    status: str
    singular_set: list[int]
    worst_T: list[int] | None
    min_slack: int | None
    holds: bool | None
    checked: int = 0


def _bound_over_subsets(f: QuadForm, S: list[int], allowed: list[int]) -> tuple[list[int], int, int]:
    # adjacency words over positions in `allowed`
    m = len(allowed)
    adj = [sum(f.polar(x, y) << j for j, y in enumerate(allowed)) for x in allowed]
    best_slack, best_mask = None, 0
    for mask in range(1 << m):
        size = mask.bit_count()
        perp = 0
        w = mask
        while w:
            i = (w & -w).bit_length() - 1
            if not adj[i] & mask:
                perp += 1
            w &= w - 1
        slack = len(S) - size - perp
        if best_slack is None or slack < best_slack:
            best_slack, best_mask = slack, mask
    worst = [allowed[i] for i in range(m) if (best_mask >> i) & 1]
    return worst, best_slack, 1 << m


def isotropic_bound_report(f: QuadForm, h: int, codim2: int | None = None) -> IsotropicReport:
    """Check |T^perp cap T| <= |S| - |T| over all admissible T.

    S = {u : Q(u) = 0} minus the subspace Hbar.  Hbar is ker h (a hyperplane);
    passing ``codim2`` uses ker h cap ker codim2 instead.  T ranges over all
    subsets of S avoiding ker(Q|rad).
    """
    n = f.n
    funcs = [h] if codim2 is None else [h, codim2]
    if rank(funcs) != len(funcs):
        raise ValueError("functionals must be independent and nonzero")
    S = [u for u in singular_vectors(f) if any(parity(g & u) for g in funcs)]
    if rank(S) < n:
        return IsotropicReport("not-applicable", S, None, None, None)
    r0 = set(span(radical_decompose(f).singular))
    allowed = [u for u in S if u not in r0]
    worst, slack, checked = _bound_over_subsets(f, S, allowed)
    return IsotropicReport("ok", S, worst, slack, slack >= 0, checked)


def all_forms(n: int, include_zero: bool = False):
    """Every symmetric coefficient matrix on F2^n as a QuadForm."""
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for mask in range(0 if include_zero else 1, 1 << len(cells)):
        rows = [0] * n
        for k, (i, j) in enumerate(cells):
            if (mask >> k) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        yield QuadForm(n, tuple(rows))


def nonzero_functionals(n: int) -> range:
    return range(1, 1 << n)


def codim2_pairs(n: int):
    """One representative functional pair per codimension-2 subspace."""
    seen = set()
    for g1, g2 in combinations(range(1, 1 << n), 2):
        key = frozenset((g1, g2, g1 ^ g2))
        if g1 ^ g2 == 0 or key in seen:
            continue
        seen.add(key)
        yield g1, g2
