"""Central extensions G of F2^n by F2 realized through an explicit cocycle.

Elements are pairs (u, eps) with u a word in F2^n and eps in F2.  The product
is (u, eps)(v, delta) = (u + v, eps + delta + beta(u, v)) with

    beta(u, v) = sum_{i > j} a_ij u_i v_j + sum_i a_ii u_i v_i,

so beta(u, u) = Q(u) and beta(u, v) + beta(v, u) = B(u, v).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .gf2forms import QuadForm, bitstr, parity, rank, solve, span, vec


@dataclass(frozen=True)
class GroupElement:
    u: int
    eps: int


class CentralExtension:
    """The group of order 2^(n+1) attached to a nonzero symmetric matrix."""

    def __init__(self, form: QuadForm):
        if form.is_zero():
            raise ValueError("a = 0 gives an elementary abelian group; excluded")
        self.form = form
        self.n = form.n

    def __repr__(self):
        return f"CentralExtension(n={self.n}, rows={self.form.rows})"

    def __eq__(self, other):
        return isinstance(other, CentralExtension) and self.form == other.form

    def __hash__(self):
        return hash(self.form)

    @property
    def order(self) -> int:
        return 1 << (self.n + 1)

    def beta(self, u: int, v: int) -> int:
        f = self.form
        x = 0
        w = u
        while w:
            i = (w & -w).bit_length() - 1
            x ^= f.lower[i] & v
            w &= w - 1
        return parity(x) ^ parity(u & v & f.diag)

    def elements(self) -> list[GroupElement]:
        return [GroupElement(u, e) for u in range(1 << self.n) for e in (0, 1)]

    def mul(self, g: GroupElement, k: GroupElement) -> GroupElement:
        return GroupElement(g.u ^ k.u, g.eps ^ k.eps ^ self.beta(g.u, k.u))

    def inv(self, g: GroupElement) -> GroupElement:
        # g^2 = (0, Q(u)) so g^-1 = g * (0, Q(u))
        return GroupElement(g.u, g.eps ^ self.form.value(g.u))

    def power(self, g: GroupElement, m: int) -> GroupElement:
        out = GroupElement(0, 0)
        for _ in range(m % 4):
            out = self.mul(out, g)
        return out

    def element_order(self, g: GroupElement) -> int:
        if g.u == 0:
            return 1 if g.eps == 0 else 2
        return 4 if self.form.value(g.u) else 2

    def commutes(self, g: GroupElement, k: GroupElement) -> bool:
        return self.form.polar(g.u, k.u) == 0


def multiply(ext: CentralExtension, g1: GroupElement, g2: GroupElement) -> GroupElement:
    return ext.mul(g1, g2)


def commutator(ext: CentralExtension, g: GroupElement, k: GroupElement) -> GroupElement:
    return ext.mul(ext.mul(ext.inv(g), ext.inv(k)), ext.mul(g, k))


def centralizer_torsion(ext: CentralExtension, x: GroupElement, m: int) -> int:
    """#{g in C_G(x) : g^(2^m) = 1}, by enumerating all of G."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    count = 0
    for g in ext.elements():
        if not ext.commutes(g, x):
            continue
        if ext.element_order(g) <= (1 << min(m, 2)):
            count += 1
    return count


def maximal_admissible_set(ext: CentralExtension, h: int) -> list[int]:
    """T0 = {u : Q(u) = 0 and h.u = 1}, sorted."""
    if h == 0 or h >> ext.n:
        raise ValueError("h must be a nonzero functional on F2^n")
    return [u for u in range(1 << ext.n) if parity(h & u) and ext.form.value(u) == 0]


def is_admissible_pair(ext: CentralExtension, h: int) -> bool:
    return rank(maximal_admissible_set(ext, h)) == ext.n


def adjacency(form: QuadForm, t: Sequence[int]) -> list[list[int]]:
    """Neighbour lists S_i = {j : B(t_i, t_j) = 1} (0-based positions)."""
    return [[j for j, y in enumerate(t) if form.polar(x, y)] for x in t]


def components(form: QuadForm, t: Sequence[int]) -> list[list[int]]:
    """Connected components of the graph on t (edges where B = 1)."""
    adj = adjacency(form, t)
    seen = [False] * len(t)
    out = []
    for s in range(len(t)):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(sorted(comp))
    return out


def bipartition(form: QuadForm, t: Sequence[int]) -> tuple[list[int], list[int]] | None:
    """Parts (W1, W2) if the graph on t is complete bipartite, else None.

    Complete bipartite means both parts nonempty and every cross pair is an
    edge while no pair inside a part is.  W1 contains position 0.
    """
    if len(t) < 2:
        return None
    adj = adjacency(form, t)
    w2 = adj[0]
    if not w2:
        return None
    w1 = [i for i in range(len(t)) if i not in set(w2)]
    s1, s2 = set(w1), set(w2)
    for i in w1:
        if set(adj[i]) != s2:
            return None
    for j in w2:
        if set(adj[j]) != s1:
            return None
    return w1, w2


class PairSpec:
    """A triple (G, H, T): extension, hyperplane functional h, subset T.

    ``gens`` (the subset T) defaults to T0.  Derived quantities are cached.
    """

    def __init__(self, ext: CentralExtension, h: int, t: Iterable[int] | None = None, name: str | None = None):
        self.ext = ext
        self.functional = h
        self.t0 = maximal_admissible_set(ext, h)
        self.gens = sorted(self.t0 if t is None else set(t))
        self.name = name
        bad = [u for u in self.gens if u not in set(self.t0)]
        if bad:
            raise ValueError(f"elements {bad} are not in T0")

    @property
    def n(self) -> int:
        return self.ext.n

    @property
    def form(self) -> QuadForm:
        return self.ext.form

    @property
    def r(self) -> int:
        return len(self.gens)

    def with_t(self, t: Iterable[int]) -> "PairSpec":
        return PairSpec(self.ext, self.functional, t, self.name)

    def is_t0(self) -> bool:
        return self.gens == self.t0

    def __repr__(self):
        label = f"{self.name}, " if self.name else ""
        return f"PairSpec({label}{to_text(self)}, t={[bitstr(u, self.n) for u in self.gens]})"

    @cached_property
    def neighbours(self) -> list[list[int]]:
        return adjacency(self.form, self.gens)

    @cached_property
    def components(self) -> list[list[int]]:
        return components(self.form, self.gens)

    @cached_property
    def bipartition(self):
        return bipartition(self.form, self.gens)

    @cached_property
    def aut(self) -> list[tuple[int, ...]]:
        return aut_group(self)


def is_admissible(spec: PairSpec) -> bool:
    f, h = spec.form, spec.functional
    ok = all(f.value(u) == 0 and parity(h & u) for u in spec.gens)
    return ok and rank(spec.gens) == spec.n


def conjugacy_count(spec: PairSpec) -> int:
    """c_T = r1 + 2 r2 (non-central members once, central ones twice)."""
    if not spec.gens:
        raise ValueError("T is empty")
    r1 = sum(1 for s in spec.neighbours if s)
    return r1 + 2 * (spec.r - r1)


def conjugacy_orbits(spec: PairSpec) -> int:
    """Orbits of the lifts of T under conjugation by the lifts of T."""
    ext = spec.ext
    lifts = [GroupElement(u, e) for u in spec.gens for e in (0, 1)]
    seen, orbits = set(), 0
    for x in lifts:
        if x in seen:
            continue
        orbits += 1
        frontier = [x]
        seen.add(x)
        while frontier:
            y = frontier.pop()
            for g in lifts:
                z = ext.mul(ext.mul(g, y), ext.inv(g))
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
    return orbits


def h_elements(ext: CentralExtension, h: int) -> list[GroupElement]:
    return [g for g in ext.elements() if not parity(h & g.u)]


def h_abelian_direct(ext: CentralExtension, h: int) -> bool:
    els = h_elements(ext, h)
    return all(ext.mul(x, y) == ext.mul(y, x) for x, y in combinations(els, 2))


def is_h_abelian(ext: CentralExtension, h: int, cross_check: bool = True) -> bool:
    """H abelian iff the graph on T0 is complete bipartite."""
    if not is_admissible_pair(ext, h):
        raise ValueError("pair is not admissible")
    graph = bipartition(ext.form, maximal_admissible_set(ext, h)) is not None
    if cross_check and graph != h_abelian_direct(ext, h):
        raise AssertionError("graph criterion disagrees with direct commutation")
    return graph


def _apply(images: Sequence[int], u: int) -> int:
    out = 0
    w = u
    while w:
        i = (w & -w).bit_length() - 1
        out ^= images[i]
        w &= w - 1
    return out


def _inverse_images(basis: Sequence[int], n: int) -> list[int]:
    """Coordinates of each e_i in ``basis`` (as words over basis positions)."""
    rows = [sum(((b >> i) & 1) << k for k, b in enumerate(basis)) for i in range(n)]
    out = []
    for i in range(n):
        x = solve(rows, [int(j == i) for j in range(n)], len(basis))
        if x is None:
            raise ValueError("basis is not invertible")
        out.append(x)
    return out


def gl_elements(n: int):
    """All invertible n x n matrices as column-image tuples."""
    vecs = range(1, 1 << n)

    def rec(prefix: list[int]):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        sp = set(span(prefix))
        for v in vecs:
            if v not in sp:
                yield from rec(prefix + [v])

    yield from rec([])


def preserves(spec: PairSpec, images: Sequence[int], tset: set[int]) -> bool:
    f, h = spec.form, spec.functional
    for i, x in enumerate(images):
        if parity(h & x) != ((h >> i) & 1):
            return False
    if f.compose(images) != f:
        return False
    return all(_apply(images, u) in tset for u in spec.gens)


def aut_group(spec: PairSpec, method: str = "anchored") -> list[tuple[int, ...]]:
    """Aut_{H,T}: invertible phi with phi(T) = T, h o phi = h, Q o phi = Q.

    Each automorphism is returned as the tuple (phi(e_1), ..., phi(e_n)).
    ``method="anchored"`` maps a basis drawn from T to ordered tuples of T;
    ``method="gl"`` scans all of GL_n (use for n <= 4).
    """
    n = spec.n
    tset = set(spec.gens)
    out = set()
    if method == "gl":
        for images in gl_elements(n):
            if preserves(spec, images, tset):
                out.add(images)
        return sorted(out)
    if rank(spec.gens) != n:
        raise ValueError("T does not span; use method='gl'")
    basis: list[int] = []
    for u in spec.gens:
        if rank(basis + [u]) > len(basis):
            basis.append(u)
    inv = _inverse_images(basis, n)  # e_i in terms of basis coordinates
    for targets in permutations(spec.gens, n):
        if rank(list(targets)) != n:
            continue
        images = tuple(_apply(targets, inv[i]) for i in range(n))
        if preserves(spec, images, tset):
            out.add(images)
    return sorted(out)


def permutation_of_t(spec: PairSpec, images: Sequence[int]) -> list[int]:
    """Position map i -> j with phi(t_i) = t_j."""
    pos = {u: k for k, u in enumerate(spec.gens)}
    return [pos[_apply(images, u)] for u in spec.gens]


def spanning_subsets(spec: PairSpec) -> list[list[int]]:
    """All subsets of T0 spanning F2^n, largest first."""
    t0 = spec.t0
    out = []
    for k in range(len(t0), spec.n - 1, -1):
        for c in combinations(t0, k):
            if rank(list(c)) == spec.n:
                out.append(list(c))
    return out


# ---------------------------------------------------------------- text format

_CELLS_CACHE: dict[int, list[tuple[int, int]]] = {}


def _cells(n: int) -> list[tuple[int, int]]:
    if n not in _CELLS_CACHE:
        _CELLS_CACHE[n] = [(i, j) for i in range(n) for j in range(i, n)]
    return _CELLS_CACHE[n]


def form_to_hex(form: QuadForm) -> str:
    """Upper triangle plus diagonal, row-major, first cell = least bit."""
    x = 0
    for k, (i, j) in enumerate(_cells(form.n)):
        if (form.rows[i] >> j) & 1:
            x |= 1 << k
    return format(x, "x")


def form_from_hex(n: int, text: str) -> QuadForm:
    x = int(text, 16)
    cells = _cells(n)
    if x >> len(cells):
        raise ValueError(f"hex value has more than {len(cells)} bits for n={n}")
    rows = [0] * n
    for k, (i, j) in enumerate(cells):
        if (x >> k) & 1:
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return QuadForm(n, tuple(rows))


_SPEC_RE = re.compile(r"^\s*(\d+)\s*;\s*a\s*=\s*([0-9a-fA-F]+)\s*;\s*h\s*=\s*([01]+)\s*$")


def to_text(spec: PairSpec) -> str:
    return f"{spec.n}; a={form_to_hex(spec.form)}; h={bitstr(spec.functional, spec.n)}"


def parse_spec(text: str) -> PairSpec:
    """Parse ``n; a=<hex>; h=<bits>`` or a preset name."""
    if text in PRESETS:
        return preset(text)
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse group spec {text!r}; expected 'n; a=<hex>; h=<bits>' or a preset")
    n = int(m.group(1))
    bits = m.group(3)
    if len(bits) != n:
        raise ValueError(f"h has {len(bits)} bits, expected {n}")
    ext = CentralExtension(form_from_hex(n, m.group(2)))
    h = vec(bits)
    if h == 0:
        raise ValueError("h must be nonzero")
    return PairSpec(ext, h)


PRESETS: dict[str, tuple[int, list[tuple[int, int]], str]] = {
    "D4:C4": (2, [(1, 2)], "11"),
    "D4oC4:Q8": (3, [(1, 2), (1, 3), (2, 3)], "111"),
    "D4oC4:C4xC2": (3, [(1, 3), (2, 3)], "111"),
    "D4xC2:D4": (3, [(1, 2)], "111"),
}


def preset(name: str) -> PairSpec:
    n, pairs, h = PRESETS[name]
    return PairSpec(CentralExtension(QuadForm.from_coeffs(n, pairs)), vec(h), name=name)


# ------------------------------------------------------- isomorphism classes

def _small_group_name(order: int, abelian: bool, exponent: int, involutions: int, center: int) -> str:
    table = {
        (4, True, 4): "C4",
        (4, True, 2): "C2xC2",
        (8, True, 2): "C2^3",
        (8, True, 4): "C4xC2",
        (8, False, 4): {5: "D4", 1: "Q8"},
        (16, True, 4): "C4xC2^2",
        (16, False, 4): {11: "D4xC2", 3: "Q8xC2", 7: "D4oC4"},
    }
    entry = table.get((order, abelian, exponent))
    if isinstance(entry, dict):
        entry = entry.get(involutions)
    if entry:
        return entry
    return f"G{order}(exp={exponent},inv={involutions},|Z|={center})"


def _describe(ext: CentralExtension, els: list[GroupElement]) -> str:
    abelian = all(ext.commutes(x, y) for x, y in combinations(els, 2))
    exponent = max(ext.element_order(g) for g in els)
    involutions = sum(1 for g in els if ext.element_order(g) == 2)
    center = sum(1 for g in els if all(ext.commutes(g, y) for y in els))
    return _small_group_name(len(els), abelian, exponent, involutions, center)


def group_name(ext: CentralExtension) -> str:
    return _describe(ext, ext.elements())


def subgroup_name(ext: CentralExtension, h: int) -> str:
    return _describe(ext, h_elements(ext, h))


def canonical_key(form: QuadForm, h: int) -> tuple:
    """Minimum of (Q o phi, h o phi) over GL_n; identifies isomorphic pairs."""
    best = None
    for images in gl_elements(form.n):
        g = form.compose(images)
        hh = sum(parity(h & x) << i for i, x in enumerate(images))
        key = (g.rows, hh)
        if best is None or key < best:
            best = key
    return best


@dataclass
class PairSummary:
    text: str
    group: str
    subgroup: str
    c: int
    s: int
    t0_size: int
    aut: int
    bipartite: bool
    preset: str | None = None


def list_admissible(n: int) -> list[PairSummary]:
    """Admissible (G, H) with |G| = 2^(n+1), one per isomorphism class."""
    from .gf2forms import all_forms

    seen: set = set()
    out = []
    gl = list(gl_elements(n))
    preset_keys = {}
    for name, (pn, _, _) in PRESETS.items():
        if pn == n:
            p = preset(name)
            preset_keys[canonical_key(p.form, p.functional)] = name
    for form in all_forms(n):
        for h in range(1, 1 << n):
            ext = CentralExtension(form)
            if not is_admissible_pair(ext, h):
                continue
            if (form.rows, h) in seen:
                continue
            orbit = set()
            for images in gl:
                g = form.compose(images)
                hh = sum(parity(h & x) << i for i, x in enumerate(images))
                orbit.add((g.rows, hh))
            seen |= orbit
            key = min(orbit)
            rep = PairSpec(CentralExtension(QuadForm(n, key[0])), key[1])
            out.append(
                PairSummary(
                    text=to_text(rep),
                    group=group_name(rep.ext),
                    subgroup=subgroup_name(rep.ext, rep.functional),
                    c=conjugacy_count(rep),
                    s=len(rep.components),
                    t0_size=len(rep.t0),
                    aut=len(rep.aut),
                    bipartite=rep.bipartition is not None,
                    preset=preset_keys.get(key),
                )
            )
    out.sort(key=lambda p: (p.c, p.text))
    return out
