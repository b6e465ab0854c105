"""Tests for exact sweeps: agreement with scalar code, determinism, checkpoints."""
import json
from collections import Counter
from fractions import Fraction

import pytest

from unramified2.count import f_total
from unramified2.discs import SweepRange, sieve_fundamental
from unramified2.group2 import preset
from unramified2.sweep import (
    SweepConfig,
    _save_checkpoint,
    _segment_histogram,
    collect_histogram,
    sweep_distribution,
    sweep_moments,
    write_report,
)
from unramified2.discs import segments


def scalar_mean(name, sign, X, k=1, c=None):
    spec = preset(name)
    vals = []
    for fact in sieve_fundamental(SweepRange(sign, X)):
        vals.append((f_total(spec, fact=fact).value / c**fact.omega) ** k)
    return sum(vals, Fraction(0)) / len(vals), len(vals)


@pytest.mark.parametrize("name,c", [("D4:C4", 2), ("D4oC4:Q8", 3)])
def test_moments_match_scalar_loop(name, c):
    rep = sweep_moments(SweepConfig([name], -1, 3000, ks=[1, 2], segment=700))
    for row in rep.moments:
        want, n = scalar_mean(name, -1, 3000, row.k, c)
        assert row.empirical == want
    assert rep.count == n


def test_checkpoint_means_are_prefix_means():
    rep = sweep_moments(SweepConfig(["D4:C4"], -1, 4000, segment=512))
    for X, got in zip((1000, 2000), rep.moments[0].checkpoints):
        want, _ = scalar_mean("D4:C4", -1, X, 1, 2)
        assert got == want


def test_segment_size_does_not_change_report():
    a = sweep_moments(SweepConfig(["D4:C4", "D4oC4:Q8"], -1, 20000, ks=[1, 2], segment=1 << 12)).to_json()
    b = sweep_moments(SweepConfig(["D4:C4", "D4oC4:Q8"], -1, 20000, ks=[1, 2], segment=1 << 20)).to_json()
    assert a == b


def test_worker_count_does_not_change_report():
    a = sweep_moments(SweepConfig(["D4:C4"], -1, 30000, segment=1 << 12, workers=1)).to_json()
    b = sweep_moments(SweepConfig(["D4:C4"], -1, 30000, segment=1 << 12, workers=2)).to_json()
    assert a == b


def test_checkpoint_resume(tmp_path):
    cfg = SweepConfig(["D4xC2:D4"], 1, 20000, segment=4096, checkpoint=str(tmp_path / "ck.json"))
    full = collect_histogram(SweepConfig(["D4xC2:D4"], 1, 20000, segment=4096))
    segs = segments(cfg.xmax, cfg.segment)
    partial = Counter()
    for lo, hi in segs[:2]:
        partial.update(_segment_histogram(tuple(cfg.pairs), cfg.sign, cfg.xmax, cfg.alpha, lo, hi))
    _save_checkpoint(cfg.checkpoint, cfg, {0, 1}, partial)
    resumed = collect_histogram(cfg)
    assert resumed == full
    data = json.loads((tmp_path / "ck.json").read_text())
    assert sorted(data["done"]) == list(range(len(segs)))


def test_foreign_checkpoint_is_ignored(tmp_path):
    path = str(tmp_path / "ck.json")
    other = SweepConfig(["D4:C4"], -1, 5000, checkpoint=path)
    collect_histogram(other)
    cfg = SweepConfig(["D4:C4"], -1, 6000, checkpoint=path)
    assert collect_histogram(cfg) == collect_histogram(SweepConfig(["D4:C4"], -1, 6000))


def test_empty_range():
    rep = sweep_moments(SweepConfig(["D4:C4"], -1, 3))
    assert rep.count == 0
    assert rep.moments[0].empirical is None
    assert rep.histogram == {}


def test_invalid_configs():
    with pytest.raises(ValueError):
        SweepConfig(["D4:C4"], -1, 2)
    with pytest.raises(ValueError):
        SweepConfig([], -1, 100)
    with pytest.raises(ValueError):
        SweepConfig(["D4:C4"], -1, 100, ks=[0])
    with pytest.raises(ValueError):
        SweepConfig(["D4:C4"], 2, 100)


def test_distribution_report_bipartite(tmp_path):
    rep = sweep_distribution(SweepConfig(["D4:C4"], -1, 20000))
    dist = rep.distribution
    assert dist["kind"] == "bipartite"
    assert dist["off_support_mass"] == 0.0
    assert sum(x["empirical"] for x in dist["support_mass"]) == pytest.approx(1.0)
    out = tmp_path / "r.json"
    text = write_report(rep, str(out))
    assert out.read_text() == text
    assert json.loads(text)["count"] == rep.count


def test_distribution_report_point_mass():
    rep = sweep_distribution(SweepConfig(["D4oC4:Q8"], -1, 20000))
    assert rep.distribution["kind"] == "point-mass"
    assert Fraction(rep.distribution["predicted"]) == Fraction(3, 32)
    with pytest.raises(ValueError):
        sweep_distribution(SweepConfig(["D4:C4", "D4oC4:Q8"], -1, 100))


def test_alpha_restriction_counts():
    rep = sweep_moments(SweepConfig(["D4:C4"], -1, 10000, alpha=3))
    want = sum(1 for f in sieve_fundamental(SweepRange(-1, 10000, 3)))
    assert rep.count == want
