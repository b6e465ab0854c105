"""Tests for predicted constants: moments, point masses, Cohen-Lenstra laws, Gamma."""
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from unramified2.group2 import PRESETS, preset
from unramified2.predict import (
    abelian_aut_order,
    bipartite_distribution,
    cohen_lenstra_distribution,
    cohen_lenstra_partition_sum,
    cohen_lenstra_rank_prob,
    compositum_density,
    correlation_prediction,
    gamma_bruteforce,
    gamma_check,
    gamma_closed_form,
    gaussian_binomial,
    k_moment,
    local_mass,
    m_moment,
    pair_constants,
    point_mass,
    q_pm,
    subspace_count,
)

NON_BIPARTITE = ["D4oC4:Q8", "D4xC2:D4"]
BIPARTITE = ["D4:C4", "D4oC4:C4xC2"]


def count_subspaces_brute(k):
    from unramified2.gf2forms import row_reduce

    seen = set()
    for mask in range(1 << (1 << k)):
        gens = [v for v in range(1 << k) if (mask >> v) & 1]
        seen.add(tuple(row_reduce(gens)))
    return len(seen)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_subspace_count_brute(k):
    assert subspace_count(k) == count_subspaces_brute(k)


def test_gaussian_binomial_values():
    assert [gaussian_binomial(4, j) for j in range(5)] == [1, 15, 35, 15, 1]
    assert gaussian_binomial(3, 5) == 0


def test_m_moment_anchors():
    assert m_moment(1, -1) == 2
    assert m_moment(1, 1) == Fraction(3, 2)
    assert [m_moment(k, -1) for k in range(5)] == [1, 2, 5, 16, 67]


@pytest.mark.parametrize("sign", [-1, 1])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cl_moment_identity(sign, k):
    dist = cohen_lenstra_distribution(sign, 40)
    assert abs(sum(dist.probabilities) - 1) < 1e-12
    assert abs(dist.moment(k) - float(m_moment(k, sign))) < 1e-6


def test_cl_frozen_values():
    neg = [cohen_lenstra_rank_prob(i, -1) for i in range(3)]
    pos = [cohen_lenstra_rank_prob(i, 1) for i in range(3)]
    assert neg == pytest.approx([0.288788, 0.577576, 0.128350], abs=1e-6)
    assert pos == pytest.approx([0.577576, 0.385051, 0.036672], abs=1e-6)


@pytest.mark.parametrize("sign", [-1, 1])
def test_cl_partition_sum_agrees(sign):
    mass = cohen_lenstra_partition_sum(sign, max_log_order=14, max_rank=5)
    for i in range(3):
        assert abs(float(mass[i]) - cohen_lenstra_rank_prob(i, sign)) < 1e-3


def test_abelian_aut_order_small_groups():
    # Aut(C2) = 1, Aut(C4) = 2, Aut(C2^2) = 6, Aut(C4xC2) = 8, Aut(C2^3) = 168
    assert [abelian_aut_order(p) for p in [(1,), (2,), (1, 1), (2, 1), (1, 1, 1)]] == [1, 2, 6, 8, 168]


def test_pair_constants_and_q():
    got = {name: pair_constants(preset(name), -1) for name in PRESETS}
    assert {k: (v["c"], v["aut"], v["t0_size"], v["s"]) for k, v in got.items()} == {
        "D4:C4": (2, 2, 2, 1),
        "D4oC4:Q8": (3, 6, 3, 1),
        "D4oC4:C4xC2": (4, 8, 4, 1),
        "D4xC2:D4": (4, 2, 3, 2),
    }
    assert {k: (q_pm(preset(k), -1), q_pm(preset(k), 1)) for k in PRESETS} == {
        "D4:C4": (2, 1),
        "D4oC4:Q8": (3, 1),
        "D4oC4:C4xC2": (4, 2),
        "D4xC2:D4": (3, 3),
    }


def test_point_masses():
    assert point_mass(preset("D4oC4:Q8"), -1) == Fraction(3, 32)
    assert point_mass(preset("D4oC4:Q8"), 1) == Fraction(1, 32)
    assert point_mass(preset("D4xC2:D4"), -1) == Fraction(9, 32)
    assert point_mass(preset("D4xC2:D4"), 1) == Fraction(9, 32)
    assert point_mass(preset("D4oC4:Q8"), -1, slot_sum=False) == Fraction(1, 32)
    with pytest.raises(ValueError):
        point_mass(preset("D4:C4"), -1)


@pytest.mark.parametrize("name", NON_BIPARTITE)
@pytest.mark.parametrize("sign", [-1, 1])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_gamma_path_matches_point_mass(name, sign, k):
    spec = preset(name)
    assert k_moment(spec, sign, k, path="gamma") == k_moment(spec, sign, k)


def test_correlation_prediction_frozen():
    d4, q8 = preset("D4:C4"), preset("D4oC4:Q8")
    assert correlation_prediction([d4], -1).value == Fraction(1, 4)
    assert correlation_prediction([d4, d4], -1).value == Fraction(1, 8)
    assert correlation_prediction([q8], -1).value == Fraction(3, 32)
    assert correlation_prediction([d4, q8], -1).value == Fraction(3, 128)


@pytest.mark.parametrize("name", BIPARTITE)
@pytest.mark.parametrize("sign", [-1, 1])
def test_bipartite_mean_is_consistent(name, sign):
    bd = bipartite_distribution(preset(name), sign)
    mean = sum(float(v) * p for v, p in zip(bd.support, bd.mass.probabilities))
    assert mean == pytest.approx(float(correlation_prediction([preset(name)], sign).value), abs=1e-9)


def test_compositum_density():
    assert compositum_density([preset("D4oC4:Q8")], -1) == 1.0
    assert compositum_density([preset("D4:C4")], -1) == pytest.approx(1 - 0.288788, abs=1e-6)


@pytest.mark.parametrize("name", sorted(PRESETS))
@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_local_mass(name, p):
    spec = preset(name)
    c = pair_constants(spec, -1)["c"]
    assert local_mass(spec, p) == 1 + Fraction(c, p)


def test_gamma_closed_form_values():
    q8, d4c2 = preset("D4oC4:Q8"), preset("D4xC2:D4")
    assert gamma_closed_form([q8], -1) == 144
    assert gamma_closed_form([q8], 1) == 48
    assert gamma_closed_form([d4c2], -1) == 576


@pytest.mark.parametrize("sign,alpha", [(-1, 0), (-1, 2), (1, 0), (1, 2)])
def test_gamma_brute_force_q8_agrees_for_alpha_0_and_2(sign, alpha):
    assert gamma_check([preset("D4oC4:Q8")], sign, alpha).agrees


def test_gamma_brute_force_known_disagreements():
    """Frozen brute-force values where the closed form does not match."""
    q8, d4c2 = preset("D4oC4:Q8"), preset("D4xC2:D4")
    assert gamma_bruteforce([q8], -1, 3) == 288
    assert gamma_bruteforce([d4c2], -1, 0) == 768
    assert gamma_bruteforce([q8], -1, 0, odd_without_two=True) == 48


@given(st.sampled_from([-1, 1]), st.integers(1, 6))
def test_bipartite_support(sign, i):
    bd = bipartite_distribution(preset("D4:C4"), sign, truncation=10)
    assert bd.support[i] == Fraction((1 << i) - 1, 4)
    assert 0 < bd.mass.probabilities[i] < 1


def test_sign_validation():
    with pytest.raises(ValueError):
        m_moment(1, 0)
    with pytest.raises(ValueError):
        k_moment(preset("D4oC4:Q8"), -1, 1, path="other")
