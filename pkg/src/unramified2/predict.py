"""Predicted limiting constants for f/c^omega.

Everything exact is a :class:`fractions.Fraction`; Cohen-Lenstra masses are
floats with an explicit truncation bound.  Signs are -1 (imaginary fields)
and +1 (real fields).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, prod
from typing import Sequence

from .group2 import GroupElement, PairSpec, conjugacy_count, is_admissible
from .unlinked import LinkageGraph, construct_m, max_disconnected, phi1, BUDGET

GAMMA_BUDGET = 6


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return sign


def _t0(spec: PairSpec) -> PairSpec:
    return spec if spec.is_t0() else spec.with_t(spec.t0)


# ------------------------------------------------------ subspaces and M


def gaussian_binomial(k: int, j: int, q: int = 2) -> int:
    if j < 0 or j > k:
        return 0
    num, den = 1, 1
    for i in range(j):
        num *= q ** (k - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(k: int) -> int:
    """Number of subspaces of F2^k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return sum(gaussian_binomial(k, j) for j in range(k + 1))


def m_moment(k: int, sign: int) -> Fraction:
    """Limiting k-th moment of |Cl[4]/Cl[2]| over imaginary (-1) or real (+1) fields."""
    _check_sign(sign)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if sign < 0:
        return Fraction(subspace_count(k))
    return Fraction(subspace_count(k + 1) - subspace_count(k), 1 << k)


# ------------------------------------------------------ point masses


def component_sizes(spec: PairSpec) -> list[int]:
    return [len(c) for c in spec.components]


def q_pm(spec: PairSpec, sign: int) -> int:
    """Number of ways to pick m_i from each component with every m_i = 0, 1
    mod 4, weighted by binomials, total parity odd for sign -1 and even
    for sign +1."""
    _check_sign(sign)
    want = 1 if sign < 0 else 0
    total = 0
    sizes = component_sizes(spec)
    for ms in product(*[range(s + 1) for s in sizes]):
        if sum(ms) % 2 != want or any(m % 4 > 1 for m in ms):
            continue
        total += prod(comb(s, m) for s, m in zip(sizes, ms))
    return total


@dataclass
class Prediction:
    pairs: list[str]
    sign: int
    k: int
    value: Fraction
    provenance: str
    constants: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "sign": self.sign,
            "k": self.k,
            "value": str(self.value),
            "value_float": float(self.value),
            "provenance": self.provenance,
            "constants": {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.constants.items()},
        }


def pair_constants(spec: PairSpec, sign: int) -> dict:
    s0 = _t0(spec)
    return {
        "n": s0.n,
        "c": conjugacy_count(s0),
        "s": len(s0.components),
        "t0_size": s0.r,
        "aut": len(s0.aut),
        "q_pm": q_pm(s0, sign),
        "bipartite": s0.bipartition is not None,
    }


def point_mass(spec: PairSpec, sign: int, slot_sum: bool = True) -> Fraction:
    """Limit of f/c^omega for a pair whose T0 graph is not complete bipartite.

    The default is |T0| Q / (2^(c - s + n - 1) |Aut_H|).  ``slot_sum=False``
    drops the factor |T0|, which comes from summing over the slot that holds
    the prime 2; random-prime simulations of f/c^omega settle on this smaller
    value for odd and even discriminants alike.
    """
    _check_sign(sign)
    s0 = _t0(spec)
    if s0.bipartition is not None:
        raise ValueError("T0 is complete bipartite; use bipartite_distribution")
    k = pair_constants(s0, sign)
    top = k["q_pm"] * (k["t0_size"] if slot_sum else 1)
    return Fraction(top, (1 << (k["c"] - k["s"] + k["n"] - 1)) * k["aut"])


def gamma_closed_form(specs: Sequence[PairSpec], sign: int, c_hat: int | None = None) -> int:
    """2^w |T^| prod Q_j with w = 2 c_hat - sum c_j + sum s_j + (k - 1).

    ``c_hat`` defaults to the size of the closed-form maximal unlinked sets.
    """
    _check_sign(sign)
    k = len(specs)
    if c_hat is None:
        c_hat = construct_m(specs).size
    w = 2 * c_hat - sum(conjugacy_count(s) for s in specs) + sum(len(s.components) for s in specs) + k - 1
    return (1 << w) * prod(s.r for s in specs) * prod(q_pm(s, sign) for s in specs)


def k_moment(spec: PairSpec, sign: int, k: int, path: str = "pointmass") -> Fraction:
    """k-th moment of f/c^omega for a non-bipartite pair.

    ``path="pointmass"`` raises the point mass to the k-th power;
    ``path="gamma"`` goes through the closed-form Gamma of the k-fold product
    of T0 with the unlinked maximum taken from the graph code.
    """
    s0 = _t0(spec)
    if path == "pointmass":
        return point_mass(s0, sign) ** k
    if path != "gamma":
        raise ValueError("path must be 'pointmass' or 'gamma'")
    if s0.bipartition is not None:
        raise ValueError("T0 is complete bipartite")
    specs = [s0] * k
    graph_size = 2 * s0.r
    if graph_size**k <= BUDGET:
        c_hat = max_disconnected(LinkageGraph(specs)).size
    else:
        c_hat = construct_m(specs).size
    gamma = gamma_closed_form(specs, sign, c_hat)
    # sum over D_X divided by count of D_X: (4/pi^2) / (2/pi^2) = 2
    return Fraction(2 * gamma, (4**c_hat) * (1 << (k * s0.n)) * len(s0.aut) ** k)


def correlation_prediction(pairs: Sequence[PairSpec], sign: int) -> Prediction:
    """Limit of the average of prod_j f_j / c_j^omega over a family of pairs.

    Non-bipartite factors contribute P_j / q_j with P_j = |T0| Q / 2^(c - s),
    so that P_j / q_j is the point mass; bipartite factors enter through the
    alternating sum of M moments.
    """
    _check_sign(sign)
    consts = []
    value = Fraction(1)
    y = 0
    for spec in pairs:
        s0 = _t0(spec)
        if not is_admissible(s0):
            raise ValueError(f"{spec!r} is not admissible")
        kc = pair_constants(s0, sign)
        qj = (1 << (kc["n"] - 1)) * kc["aut"]
        kc["q"] = qj
        value /= qj
        if kc["bipartite"]:
            y += 1
        else:
            pj = Fraction(kc["t0_size"] * kc["q_pm"], 1 << (kc["c"] - kc["s"]))
            kc["P"] = pj
            value *= pj
        consts.append(kc)
    alt = sum((-1) ** i * comb(y, i) * m_moment(y - i, sign) for i in range(y + 1))
    value *= alt
    names = [p.name or repr(p) for p in pairs]
    return Prediction(names, sign, len(pairs), value, "correlations", {"factors": consts, "bipartite_count": y, "alternating_sum": alt})


# ------------------------------------------------------ Cohen-Lenstra


def _eta(r: int) -> float:
    out = 1.0
    for j in range(1, r + 1):
        out *= 1.0 - 2.0**-j
    return out


_ETA_INF = _eta(200)


@dataclass
class CLRankDistribution:
    sign: int
    probabilities: list[float]
    error_bound: float

    def moment(self, k: int) -> float:
        return sum(p * 2.0 ** (i * k) for i, p in enumerate(self.probabilities))


def _cl_u(sign: int) -> int:
    # |H|-weight exponent: 0 for imaginary fields, 1 for real fields
    return 0 if _check_sign(sign) < 0 else 1


def cohen_lenstra_rank_prob(i: int, sign: int, truncation: int = 40) -> float:
    """Probability that a Cohen-Lenstra random abelian 2-group has rank i."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    u = _cl_u(sign)
    return _ETA_INF * 2.0 ** (-i * (i + u)) / (_eta(i) * _eta(i + u))


def cohen_lenstra_distribution(sign: int, truncation: int = 40) -> CLRankDistribution:
    u = _cl_u(sign)
    probs = [cohen_lenstra_rank_prob(i, sign) for i in range(truncation + 1)]
    nxt = truncation + 1
    bound = 2.0 * 2.0 ** (-nxt * (nxt + u)) / _ETA_INF**2
    return CLRankDistribution(sign, probs, bound)


def _partitions(total: int, largest: int | None = None):
    largest = total if largest is None else largest
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


def abelian_aut_order(parts: Sequence[int], p: int = 2) -> int:
    """|Aut| of the abelian p-group with cyclic factors of orders p^parts."""
    lam = sorted(parts)
    n = len(lam)
    out = 1
    for k in range(1, n + 1):
        d = max(l for l in range(1, n + 1) if lam[l - 1] == lam[k - 1])
        c = min(l for l in range(1, n + 1) if lam[l - 1] == lam[k - 1])
        out *= p**d - p ** (k - 1)
        out *= (p ** lam[k - 1]) ** (n - d)
        out *= (p ** (lam[k - 1] - 1)) ** (n - c + 1)
    return out


def cohen_lenstra_partition_sum(sign: int, max_log_order: int = 24, max_rank: int = 8) -> list[Fraction]:
    """Rank probabilities from the weights 1/(|Aut G| |G|^u), summed over all
    abelian 2-groups of order at most 2^max_log_order and renormalized."""
    u = _cl_u(sign)
    mass = [Fraction(0)] * (max_rank + 1)
    for m in range(max_log_order + 1):
        for parts in _partitions(m):
            if len(parts) > max_rank:
                continue
            mass[len(parts)] += Fraction(1, abelian_aut_order(parts) * (1 << (m * u)))
    total = sum(mass)
    return [x / total for x in mass]


@dataclass
class BipartiteDistribution:
    scale: int
    support: list[Fraction]
    mass: CLRankDistribution


def bipartite_distribution(spec: PairSpec, sign: int, truncation: int = 40) -> BipartiteDistribution:
    """Mass P_CL(i) at (2^i - 1)/q, q = 2^(n-1) |Aut_H|."""
    s0 = _t0(spec)
    if s0.bipartition is None:
        raise ValueError("T0 is not complete bipartite; use point_mass")
    q = (1 << (s0.n - 1)) * len(s0.aut)
    support = [Fraction((1 << i) - 1, q) for i in range(truncation + 1)]
    return BipartiteDistribution(q, support, cohen_lenstra_distribution(sign, truncation))


def compositum_density(pairs: Sequence[PairSpec], sign: int) -> float:
    """Density of fields having extensions for every pair at once."""
    if any(not is_admissible(_t0(p)) for p in pairs):
        raise ValueError("non-admissible pair")
    if all(_t0(p).bipartition is None for p in pairs):
        return 1.0
    return 1.0 - cohen_lenstra_rank_prob(0, sign)


# ------------------------------------------------------ local masses


def _euler_phi(m: int) -> int:
    return m - m // 2 if m > 1 else 1


def local_mass(spec: PairSpec, p: int) -> Fraction:
    """Modified local mass at an odd prime by explicit enumeration.

    Ramified part: for each order-2 lift x of T and each subgroup D with
    <x> <= D <= G and D/<x> cyclic, weight |Aut_<x>(D)| times the number of
    ramified local fields with group D.  Unramified part: phi(|D|) over cyclic
    D.  Both are divided by |G|.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    ext = spec.ext
    els = ext.elements()
    order = len(els)
    tset = set(spec.gens)
    ramified = 0
    for x in els:
        if x.u not in tset or ext.element_order(x) != 2:
            continue
        seen = set()
        for y in els:
            if not ext.commutes(x, y):
                continue
            sub = frozenset(_generated(ext, [x, y]))
            if sub in seen:
                continue
            seen.add(sub)
            m = (len(sub) // 2).bit_length() - 1
            ramified += (1 << m) * (2 if m == 0 else 1)
    cyclic = {frozenset(_generated(ext, [g])) for g in els}
    unramified = sum(_euler_phi(len(c)) for c in cyclic)
    mass = Fraction(ramified, order * p) + Fraction(unramified, order)
    want = 1 + Fraction(conjugacy_count(spec), p)
    if mass != want:
        raise AssertionError(f"local mass {mass} differs from 1 + c_T/p = {want}")
    return mass


def _generated(ext, gens: Sequence[GroupElement]) -> set[GroupElement]:
    out = {GroupElement(0, 0)}
    frontier = list(out)
    while frontier:
        g = frontier.pop()
        for s in gens:
            h = ext.mul(g, s)
            if h not in out:
                out.add(h)
                frontier.append(h)
    return out


# ------------------------------------------------------ Gamma brute force


def _unlinked_maximizers(specs: Sequence[PairSpec]) -> list[list[tuple[int, ...]]]:
    fam = max_disconnected(LinkageGraph(specs), full_support=True)
    return [sorted(s) for s in fam.sets]


def _lambda(spec: PairSpec, nset: frozenset, u: int) -> int:
    if u % 2:
        return 0
    i = u // 2 - 1
    nb = spec.neighbours[i]
    return int(bool(nb) and len(nset & set(nb)) % 2 == 1)


def gamma_bruteforce(specs: Sequence[PairSpec], sign: int, alpha: int, odd_without_two: bool = False) -> int:
    """Literal evaluation of the Gamma constant of a product of generating sets.

    Sums over sign-parity subsets N_j, subsets Gamma of factor indices, slot
    tuples Upsilon, maximum unlinked sets with full support and residues
    h_u in {1,3,5,7} (h_u = 1 off the set) satisfying the slot congruences,
    the product of the three characters.

    With ``odd_without_two=True`` and alpha = 0 the Upsilon and Gamma sums
    are dropped, since an odd discriminant has no prime 2 to place in a slot.
    """
    _check_sign(sign)
    if alpha not in (0, 2, 3):
        raise ValueError("alpha must be 0, 2 or 3")
    specs = list(specs)
    k = len(specs)
    families = _unlinked_maximizers(specs)
    c_hat = len(families[0]) if families else 0
    if c_hat > GAMMA_BUDGET:
        raise ValueError(f"c = {c_hat} exceeds the Gamma brute-force budget of {GAMMA_BUDGET}")
    want_odd = 1 if sign < 0 else 0
    n_choices = []
    for s in specs:
        subs = [frozenset(c) for m in range(s.r + 1) for c in combinations(range(s.r), m) if m % 2 == want_odd]
        n_choices.append(subs)
    if alpha == 0 and odd_without_two:
        gamma_sets: list[tuple[int, ...]] = [()]
        upsilons: list[tuple[int, ...] | None] = [None]
    else:
        gamma_sets = [g for m in range(k + 1) for g in combinations(range(k), m)]
        upsilons = list(product(*[range(1, s.r + 1) for s in specs]))

    def phik(u, v):
        return sum(phi1(s, a, b) for s, a, b in zip(specs, u, v)) & 1

    total = 0
    for U in families:
        pair_phi = [(a, b) for a, b in combinations(range(c_hat), 2) if phik(U[a], U[b])]
        for N in product(*n_choices):
            lam = [sum(_lambda(s, nj, uj) for s, nj, uj in zip(specs, N, u)) & 1 for u in U]
            for ups in upsilons:
                # congruence targets per (factor, slot): residue of the slot
                # product mod 4, or None for no condition
                conds = []
                for j, s in enumerate(specs):
                    for i in range(1, s.r + 1):
                        inside = (i - 1) in N[j]
                        members = [a for a, u in enumerate(U) if (U[a][j] + 1) // 2 == i]
                        if ups is not None and i == ups[j] and alpha == 2:
                            conds.append((members, 1 if inside else 3))
                        elif ups is not None and i == ups[j] and alpha == 3:
                            continue
                        else:
                            conds.append((members, 3 if inside else 1))
                for gset in gamma_sets:
                    if ups is None:
                        weight = [0] * c_hat
                    else:
                        weight = []
                        for u in U:
                            g = sum(phi1(specs[i], u[i], 2 * ups[i]) for i in gset)
                            psi = sum(phi1(specs[i], 2 * ups[i], u[i]) for i in range(k))
                            weight.append((g + psi * alpha) & 1)
                    for hs in product((1, 3, 5, 7), repeat=c_hat):
                        ok = True
                        for members, target in conds:
                            r = 1
                            for a in members:
                                r = r * hs[a] % 4
                            if r != target:
                                ok = False
                                break
                        if not ok:
                            continue
                        x = [(h - 1) // 2 & 1 for h in hs]
                        y = [((h * h - 1) // 8) & 1 for h in hs]
                        e = sum(x[a] & x[b] for a, b in pair_phi)
                        e += sum(l & xa for l, xa in zip(lam, x))
                        e += sum(ya & w for ya, w in zip(y, weight))
                        total += -1 if e & 1 else 1
    return total


@dataclass
class GammaCheck:
    pairs: list[str]
    sign: int
    alpha: int
    brute: int
    closed: int

    @property
    def agrees(self) -> bool:
        return self.brute == self.closed


def gamma_check(specs: Sequence[PairSpec], sign: int, alpha: int) -> GammaCheck:
    brute = gamma_bruteforce(specs, sign, alpha)
    c_hat = max_disconnected(LinkageGraph(specs)).size
    return GammaCheck([s.name or repr(s) for s in specs], sign, alpha, brute, gamma_closed_form(specs, sign, c_hat))
