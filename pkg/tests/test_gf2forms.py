"""Tests for F2 linear algebra and quadratic forms."""
import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unramified2.gf2forms import (
    QuadForm,
    all_forms,
    bitstr,
    disjoint_postcondition,
    disjoint_totally_singular,
    hyperbolic_partners,
    in_span,
    is_totally_singular,
    isotropic_bound_report,
    kernel,
    parity,
    radical,
    radical_decompose,
    rank,
    row_reduce,
    singular_vectors,
    solve,
    span,
    unvec,
    vec,
)


def rank_numpy(rows, n):
    """Gaussian elimination on a dense 0/1 array, kept independent of the packed code."""
    a = np.array([unvec(r, n) for r in rows], dtype=np.uint8).reshape(len(rows), n)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, a.shape[0]) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


def dense_q(f: QuadForm, u: int) -> int:
    x = np.array(unvec(u, f.n), dtype=np.int64)
    a = f.matrix().astype(np.int64)
    return int(x @ np.triu(a) @ x) & 1


rows_strategy = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, (1 << n) - 1), min_size=0, max_size=10))
)


@st.composite
def forms(draw, nmax=5):
    n = draw(st.integers(1, nmax))
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    picked = draw(st.lists(st.sampled_from(cells), unique=True))
    return QuadForm.from_coeffs(n, [(i + 1, j + 1) for i, j in picked])


def test_vec_roundtrip():
    assert vec("101") == 0b101
    assert vec([0, 1, 1]) == 0b110
    assert bitstr(0b110, 3) == "011"
    assert unvec(vec("1101"), 4) == (1, 1, 0, 1)


def test_rank_known_matrices():
    assert rank(np.eye(4, dtype=np.uint8)) == 4
    assert rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2
    assert rank([0, 0]) == 0


@given(rows_strategy)
def test_rank_matches_dense_elimination(data):
    n, rows = data
    assert rank(rows) == rank_numpy(rows, n)


@given(rows_strategy)
def test_kernel_is_orthogonal_and_complete(data):
    n, rows = data
    ker = kernel(rows, n)
    for x in ker:
        assert all(parity(r & x) == 0 for r in rows)
    assert rank(ker) == len(ker) == n - rank(rows)


@given(rows_strategy, st.integers(0, 255))
def test_solve_agrees_with_brute_force(data, seed):
    n, rows = data
    rhs = [(seed >> i) & 1 for i in range(len(rows))]
    x = solve(rows, rhs, n)
    sols = [y for y in range(1 << n) if all(parity(r & y) == b for r, b in zip(rows, rhs))]
    if x is None:
        assert sols == []
    else:
        assert x in sols


@given(rows_strategy)
def test_span_and_membership(data):
    n, rows = data
    elems = span(rows)
    assert len(elems) == 1 << rank(rows)
    basis = row_reduce(rows)
    inside = set(elems)
    for u in range(1 << n):
        assert in_span(basis, u) == (u in inside)


@given(forms())
def test_polarisation_identity(f):
    for u, v in itertools.product(range(1 << f.n), repeat=2):
        assert f.value(u ^ v) == f.value(u) ^ f.value(v) ^ f.polar(u, v)
    for u in range(1 << f.n):
        assert f.value(u) == dense_q(f, u)
        assert f.polar(u, u) == 0


@given(forms())
def test_radical_decomposition(f):
    rad = radical(f)
    for x in rad:
        assert all(f.polar(x, y) == 0 for y in range(1 << f.n))
    dec = radical_decompose(f)
    assert dec is not None


def test_radical_of_hyperbolic_plane_is_zero():
    f = QuadForm.from_coeffs(2, [(1, 2)])
    assert radical(f) == []
    assert singular_vectors(f) == [0, 1, 2]


@given(forms(4))
def test_hyperbolic_partners(f):
    if radical(f):
        return  # partners need a nondegenerate ambient space
    sing = [u for u in singular_vectors(f) if u]
    everything = [1 << i for i in range(f.n)]
    partners = hyperbolic_partners(f, sing[:1], everything)
    for u, w in zip(sing[:1], partners):
        assert f.polar(u, w) == 1 and f.value(w) == 0


@given(forms(5), st.integers(0, 1 << 10))
def test_disjoint_totally_singular_postcondition(f, seed):
    if radical_decompose(f).singular:
        with pytest.raises(ValueError):
            disjoint_totally_singular(f, [])
        return
    sing = [u for u in singular_vectors(f) if u]
    w = []
    for u in sing:
        if (seed >> (u % 10)) & 1 and is_totally_singular(f, w + [u]):
            w.append(u)
    w_new = disjoint_totally_singular(f, w)
    assert disjoint_postcondition(f, w, w_new)


def test_disjoint_rejects_nonsingular_input():
    f = QuadForm.from_coeffs(2, [(1, 1)])
    with pytest.raises(ValueError):
        disjoint_totally_singular(f, [0b01])


@pytest.mark.parametrize("n", [2, 3])
def test_isotropic_bound_exhaustive_small(n):
    applicable = 0
    for f in all_forms(n):
        for h in range(1, 1 << n):
            rep = isotropic_bound_report(f, h)
            if rep.status == "not-applicable":
                assert rep.holds is None
                continue
            applicable += 1
            assert rep.holds, (f, h, rep)
    assert applicable > 0


def test_isotropic_codim2_small():
    for f in all_forms(3):
        for h, g in itertools.combinations(range(1, 8), 2):
            if rank([h, g]) < 2:
                continue
            rep = isotropic_bound_report(f, h, codim2=g)
            assert rep.holds in (None, True)


def test_form_validation():
    with pytest.raises(ValueError):
        QuadForm(2, (0b01, 0b01))  # not symmetric
    with pytest.raises(ValueError):
        QuadForm(2, (0b100, 0))
