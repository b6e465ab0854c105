"""Linkage graphs on products of doubled generating sets.

For one factor T = (t_1, ..., t_r) the vertex set is 1..2r: vertex 2i-1 is
the "u" copy of t_i and vertex 2i its "v" copy (1-based, as in the formula
expansion where each d_i splits as D_{2i-1} D_{2i}).  Expanding the indicator
puts symbols (D_u / D_v) exactly where

    phi(u, v) = [v even] * [ceil(u/2) in S_{v/2}],

and two vertices are linked when phi(u, v) + phi(v, u) = 1.  For k factors a
vertex is a k-tuple and links add coordinatewise mod 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .gf2forms import QuadForm
from .group2 import PairSpec, conjugacy_count

BUDGET = 64

Vertex = tuple[int, ...]


def phi1(spec: PairSpec, u: int, v: int) -> int:
    if v % 2:
        return 0
    return int((u + 1) // 2 - 1 in spec.neighbours[v // 2 - 1])


def delta1(spec: PairSpec, u: int, v: int) -> int:
    return phi1(spec, u, v) ^ phi1(spec, v, u)


def link1(spec: PairSpec, u: int, v: int) -> int:
    """Edge rule of the doubled graph: a u-copy of t_a meets a v-copy of t_b
    iff B(t_a, t_b) = 1."""
    if (u % 2) == (v % 2):
        return 0
    a, b = (u + 1) // 2 - 1, (v + 1) // 2 - 1
    return spec.form.polar(spec.gens[a], spec.gens[b])


class LinkageGraph:
    """The graph on prod_i [2 r_i] with edges where Delta_k = 1."""

    def __init__(self, factors: Sequence[PairSpec]):
        self.factors = list(factors)
        self.k = len(self.factors)
        self.sizes = [2 * f.r for f in self.factors]
        self.vertices: list[Vertex] = list(product(*[range(1, s + 1) for s in self.sizes]))
        self.index = {v: i for i, v in enumerate(self.vertices)}
        tables = []
        for f, s in zip(self.factors, self.sizes):
            tables.append([[delta1(f, a, b) for b in range(1, s + 1)] for a in range(1, s + 1)])
        self._tables = tables
        self._adj: list[int] | None = None

    def __len__(self):
        return len(self.vertices)

    def phi(self, u: Vertex, v: Vertex) -> int:
        return sum(phi1(f, a, b) for f, a, b in zip(self.factors, u, v)) & 1

    def delta(self, u: Vertex, v: Vertex) -> int:
        return sum(t[a - 1][b - 1] for t, a, b in zip(self._tables, u, v)) & 1

    def support(self, u: Vertex) -> tuple[int, ...]:
        return tuple((a + 1) // 2 for a in u)

    @property
    def adjacency(self) -> list[int]:
        if self._adj is None:
            vs = self.vertices
            adj = [0] * len(vs)
            for i, u in enumerate(vs):
                for j in range(i + 1, len(vs)):
                    if self.delta(u, vs[j]):
                        adj[i] |= 1 << j
                        adj[j] |= 1 << i
            self._adj = adj
        return self._adj

    def support_groups(self) -> list[int]:
        groups: dict[tuple, int] = {}
        for i, u in enumerate(self.vertices):
            key = self.support(u)
            groups[key] = groups.get(key, 0) | (1 << i)
        return [groups[k] for k in sorted(groups)]

    def is_unlinked(self, members) -> bool:
        ms = list(members)
        return all(self.delta(a, b) == 0 for i, a in enumerate(ms) for b in ms[i + 1 :])

    def has_full_support(self, members) -> bool:
        need = set(product(*[range(1, f.r + 1) for f in self.factors]))
        return {self.support(u) for u in members} == need


@dataclass
class UnlinkedFamily:
    sets: list[frozenset]
    kind: str
    size: int

    def key(self) -> list[tuple]:
        return sorted(tuple(sorted(s)) for s in self.sets)


def max_independent(adj: Sequence[int], groups: Sequence[int] = ()) -> tuple[int, list[int]]:
    """All maximum independent sets meeting every group (bit masks).

    Branch and bound: uncovered groups are branched on first (the member
    chosen first in group order fixes the branch, so no set repeats), then
    plain include/exclude on the lowest remaining candidate.
    """
    n = len(adj)
    best = [-1]
    found: list[int] = []
    full = (1 << n) - 1

    def rec(chosen: int, cand: int, size: int):
        if size + cand.bit_count() < best[0]:
            return
        pick, pick_count = 0, None
        for g in groups:
            if g & chosen:
                continue
            gc = g & cand
            if not gc:
                return
            c = gc.bit_count()
            if pick_count is None or c < pick_count:
                pick, pick_count = gc, c
        if pick_count is not None:
            excluded = 0
            w = pick
            while w:
                bit = w & -w
                v = bit.bit_length() - 1
                rec(chosen | bit, cand & ~adj[v] & ~bit & ~excluded, size + 1)
                excluded |= bit
                cand &= ~bit
                if size + cand.bit_count() + 1 < best[0]:
                    break
                w &= w - 1
            return
        if not cand:
            if size > best[0]:
                best[0] = size
                found.clear()
            if size == best[0]:
                found.append(chosen)
            return
        bit = cand & -cand
        v = bit.bit_length() - 1
        rec(chosen | bit, cand & ~adj[v] & ~bit, size + 1)
        rec(chosen, cand & ~bit, size)

    rec(0, full, 0)
    return best[0], sorted(found)


def max_disconnected(graph: LinkageGraph, full_support: bool = True) -> UnlinkedFamily:
    """Largest unlinked vertex sets (with full support if requested)."""
    if len(graph) > BUDGET:
        raise ValueError(f"{len(graph)} vertices exceeds the brute-force budget of {BUDGET}")
    groups = graph.support_groups() if full_support else []
    size, masks = max_independent(graph.adjacency, groups)
    sets = [frozenset(graph.vertices[i] for i in range(len(graph)) if (m >> i) & 1) for m in masks]
    return UnlinkedFamily(sets, "brute-force", size)


# ---------------------------------------------------------- closed form


def _type2_choices(spec: PairSpec) -> list[frozenset]:
    """Unions of one side (odd or even copies) per nontrivial component,
    plus both copies of every isolated vertex."""
    comps = [c for c in spec.components if len(c) > 1]
    isolated = [c[0] for c in spec.components if len(c) == 1]
    fixed = {2 * i + 1 for i in isolated} | {2 * i + 2 for i in isolated}
    out = []
    for sides in product((0, 1), repeat=len(comps)):
        members = set(fixed)
        for side, comp in zip(sides, comps):
            members |= {2 * i + 1 + side for i in comp}
        out.append(frozenset(members))
    return out


def _classes(spec: PairSpec) -> list[set[int]]:
    """The classes A0..A3 of a complete bipartite factor (1-based vertices)."""
    w1, w2 = spec.bipartition
    return [
        {2 * i + 1 for i in w1},
        {2 * i + 2 for i in w1},
        {2 * i + 2 for i in w2},
        {2 * i + 1 for i in w2},
    ]


def _class_product(classes: list[list[set[int]]], code: int) -> list[Vertex]:
    parts = [sorted(cl[(code >> (2 * j)) & 3]) for j, cl in enumerate(classes)]
    return list(product(*parts))


def fk_form_p(factors: Sequence[PairSpec]) -> QuadForm:
    """The form P on F2^{2r} with Delta_r(x, y) = P(class(x) + class(y)).

    Coordinate j of a class code uses bits 2j (low) and 2j+1 (high); class
    A_i has code i.  Every vertex pair is checked before returning.
    """
    if not factors or any(f.bipartition is None for f in factors):
        raise ValueError("every factor must be complete bipartite")
    graph = LinkageGraph(factors)
    classes = [_classes(f) for f in factors]
    r = len(factors)
    dim = 2 * r
    table = {}
    for x in range(1 << dim):
        table[x] = graph.delta(_class_product(classes, x)[0], _class_product(classes, 0)[0])
    for x in range(1 << dim):
        xs = _class_product(classes, x)
        for y in range(1 << dim):
            want = table[x ^ y]
            for a in xs:
                for b in _class_product(classes, y):
                    if graph.delta(a, b) != want:
                        raise AssertionError("Delta is not a function of the class difference")
    rows = [0] * dim
    for i in range(dim):
        rows[i] |= table[1 << i] << i
        for j in range(i + 1, dim):
            if table[(1 << i) | (1 << j)] ^ table[1 << i] ^ table[1 << j]:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    form = QuadForm(dim, tuple(rows))
    if any(form.value(x) != table[x] for x in table):
        raise AssertionError("Delta difference table is not a quadratic form")
    return form


def type1_bases(factors: Sequence[PairSpec]) -> list[frozenset]:
    """Maximum sets V in F2^{2r}, pairwise P(x + y) = 0, whose high bits
    cover F2^r."""
    form = fk_form_p(factors)
    r = len(factors)
    dim = 2 * r
    adj = [sum(form.value(x ^ y) << y for y in range(1 << dim)) for x in range(1 << dim)]
    high_mask = sum(1 << (2 * j + 1) for j in range(r))
    groups: dict[int, int] = {}
    for x in range(1 << dim):
        key = x & high_mask
        groups[key] = groups.get(key, 0) | (1 << x)
    _, masks = max_independent(adj, [groups[k] for k in sorted(groups)])
    return [frozenset(x for x in range(1 << dim) if (m >> x) & 1) for m in masks]


def is_coset(points: frozenset) -> bool:
    base = next(iter(points))
    shifted = {x ^ base for x in points}
    return all((a ^ b) in shifted for a in shifted for b in shifted)


def construct_m(factors: Sequence[PairSpec]) -> UnlinkedFamily:
    """The closed-form family: type-1 sets on complete bipartite factors
    times type-2 choices on the others."""
    for f in factors:
        if f.r == 0 or not f.gens:
            raise ValueError("empty factor")
    bip = [j for j, f in enumerate(factors) if f.bipartition is not None]
    rest = [j for j in range(len(factors)) if j not in bip]
    if bip:
        bfac = [factors[j] for j in bip]
        classes = [_classes(f) for f in bfac]
        type1 = []
        for V in type1_bases(bfac):
            pts = set()
            for code in V:
                pts.update(_class_product(classes, code))
            type1.append(pts)
    else:
        type1 = [{()}]
    type2 = [_type2_choices(factors[j]) for j in rest]
    sets = []
    for r_part in type1:
        for choice in product(*type2):
            members = set()
            for rp in r_part:
                for tail in product(*[sorted(c) for c in choice]):
                    v = [0] * len(factors)
                    for j, a in zip(bip, rp):
                        v[j] = a
                    for j, a in zip(rest, tail):
                        v[j] = a
                    members.add(tuple(v))
            sets.append(frozenset(members))
    kind = "type-1" if not rest else ("type-2" if not bip else "mixed")
    size = len(sets[0]) if sets else 0
    return UnlinkedFamily(sets, kind, size)


@dataclass
class ClassificationReport:
    factors: list[str]
    k: int
    max_size: int
    c_hat: int
    c0_hat: int
    all_t0: bool
    maximizers: int
    family_matches: bool | None
    holds: bool


def verify_classification(factors: Sequence[PairSpec]) -> ClassificationReport:
    """Brute force versus the closed form on one factor list.

    Checks that the maximum equals prod c_{T_i,0} exactly when every factor
    is its T0, and that the maximizers then coincide with construct_m.
    """
    graph = LinkageGraph(factors)
    brute = max_disconnected(graph, full_support=True)
    c_hat = 1
    c0_hat = 1
    for f in factors:
        c_hat *= conjugacy_count(f)
        c0_hat *= conjugacy_count(f.with_t(f.t0))
    all_t0 = all(f.is_t0() for f in factors)
    reached = brute.size == c0_hat
    match = None
    if all_t0:
        fam = construct_m(factors)
        match = fam.key() == brute.key()
    holds = (reached == all_t0) and (match is not False)
    return ClassificationReport(
        [repr(f) for f in factors], len(factors), brute.size, c_hat, c0_hat, all_t0, len(brute.sets), match, holds
    )
