"""Exact sweeps of f/c^omega over ranges of fundamental discriminants.

Each sieve segment is reduced to a histogram keyed by (band, omega, f_1, ...,
f_m), where band says whether |d| lies below X/4, X/2 or X.  Every reported
number (moments, masses, checkpoint values) is an exact rational computed
from the merged histogram, so the report does not depend on how segments
were split across workers.
"""
from __future__ import annotations

import json
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from multiprocessing import get_context
from typing import Sequence

import numpy as np

from . import predict
from .count import f_total_for_batch, subset_specs
from .discs import SEGMENT, SweepRange, segments, sieve_segment
from .group2 import PairSpec, conjugacy_count, parse_spec

log = logging.getLogger(__name__)

BANDS = (4, 2, 1)  # checkpoints at X/4, X/2, X


@dataclass
class SweepConfig:
    pairs: list[str]
    sign: int
    xmax: int
    alpha: int | None = None
    ks: list[int] = field(default_factory=lambda: [1])
    workers: int = 1
    output: str | None = None
    segment: int = SEGMENT
    checkpoint: str | None = None

    def __post_init__(self):
        if self.xmax < 3:
            raise ValueError("xmax must be at least 3")
        if not self.pairs:
            raise ValueError("at least one pair is required")
        if any(k < 1 for k in self.ks):
            raise ValueError("k must be positive")
        SweepRange(self.sign, self.xmax, self.alpha)

    def key(self) -> dict:
        return {"pairs": list(self.pairs), "sign": self.sign, "xmax": self.xmax, "alpha": self.alpha, "ks": list(self.ks)}


@lru_cache(maxsize=None)
def _load(text: str) -> tuple[PairSpec, list[PairSpec], int]:
    spec = parse_spec(text)
    return spec, subset_specs(spec), conjugacy_count(spec.with_t(spec.t0))


def _segment_histogram(pairs: tuple[str, ...], sign: int, xmax: int, alpha, lo: int, hi: int) -> Counter:
    batch = sieve_segment(sign, lo, hi, alpha)
    if len(batch) == 0:
        return Counter()
    absd = np.abs(batch.d)
    band = np.where(absd < xmax // 4, 0, np.where(absd < xmax // 2, 1, 2))
    cols = [band, batch.omega.astype(np.int64)]
    for text in pairs:
        spec, subs, _ = _load(text)
        cols.append(f_total_for_batch(spec, batch, subs))
    keys, counts = np.unique(np.stack(cols, axis=1), axis=0, return_counts=True)
    return Counter({tuple(int(x) for x in k): int(c) for k, c in zip(keys, counts)})


def _work(args) -> tuple[int, Counter]:
    idx, pairs, sign, xmax, alpha, lo, hi = args
    return idx, _segment_histogram(pairs, sign, xmax, alpha, lo, hi)


def _load_checkpoint(path: str, cfg: SweepConfig) -> tuple[set[int], Counter]:
    if not path or not os.path.exists(path):
        return set(), Counter()
    with open(path) as fh:
        data = json.load(fh)
    if data.get("config") != cfg.key() or data.get("segment") != cfg.segment:
        log.warning("checkpoint %s belongs to a different configuration; ignoring it", path)
        return set(), Counter()
    hist = Counter({tuple(k): v for k, v in data["histogram"]})
    return set(data["done"]), hist


def _save_checkpoint(path: str, cfg: SweepConfig, done: set[int], hist: Counter) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"config": cfg.key(), "segment": cfg.segment, "done": sorted(done), "histogram": sorted([list(k), v] for k, v in hist.items())}, fh)
    os.replace(tmp, path)


def collect_histogram(cfg: SweepConfig) -> Counter:
    """Merged (band, omega, f_1, ..., f_m) histogram over the configured range."""
    pairs = tuple(cfg.pairs)
    for text in pairs:
        _load(text)
    segs = segments(cfg.xmax, cfg.segment)
    done, hist = _load_checkpoint(cfg.checkpoint, cfg)
    jobs = [(i, pairs, cfg.sign, cfg.xmax, cfg.alpha, lo, hi) for i, (lo, hi) in enumerate(segs) if i not in done]

    def absorb(idx, part):
        hist.update(part)
        done.add(idx)
        if cfg.checkpoint:
            _save_checkpoint(cfg.checkpoint, cfg, done, hist)
        log.info("segment %d/%d done", len(done), len(segs))

    if cfg.workers > 1 and len(jobs) > 1:
        with get_context("spawn").Pool(cfg.workers) as pool:
            for idx, part in pool.imap_unordered(_work, jobs):
                absorb(idx, part)
    else:
        for job in jobs:
            absorb(*_work(job))
    return hist


# ------------------------------------------------------------ reports


@dataclass
class MomentRow:
    k: int
    empirical: Fraction | None
    predicted: Fraction | None
    relative_gap: float | None
    checkpoints: list[Fraction | None]


@dataclass
class SweepReport:
    config: dict
    count: int
    counts_at_checkpoints: list[int]
    moments: list[MomentRow]
    histogram: dict[Fraction, Fraction]
    by_omega: list[dict]
    distribution: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def fr(x):
            return None if x is None else str(x)

        return {
            "config": self.config,
            "count": self.count,
            "counts_at_checkpoints": self.counts_at_checkpoints,
            "moments": [
                {
                    "k": m.k,
                    "empirical": fr(m.empirical),
                    "empirical_float": None if m.empirical is None else float(m.empirical),
                    "predicted": fr(m.predicted),
                    "predicted_float": None if m.predicted is None else float(m.predicted),
                    "relative_gap": m.relative_gap,
                    "checkpoints": [fr(x) for x in m.checkpoints],
                    "checkpoints_float": [None if x is None else float(x) for x in m.checkpoints],
                }
                for m in self.moments
            ],
            "histogram": [{"value": str(v), "mass": str(p), "mass_float": float(p)} for v, p in sorted(self.histogram.items())],
            "by_omega": self.by_omega,
            "distribution": self.distribution,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _value(key: tuple, consts: Sequence[int]) -> Fraction:
    omega = key[1]
    out = Fraction(1)
    for f, c in zip(key[2:], consts):
        out *= Fraction(f, c**omega)
    return out


def _predicted_moment(specs: list[PairSpec], sign: int, k: int) -> Fraction | None:
    try:
        return predict.correlation_prediction(specs * k, sign).value
    except ValueError:
        return None


def sweep_moments(cfg: SweepConfig, hist: Counter | None = None) -> SweepReport:
    """Empirical averages of prod_i (f_i/c_i^omega)^k with predictions attached."""
    hist = collect_histogram(cfg) if hist is None else hist
    loaded = [_load(t) for t in cfg.pairs]
    specs = [x[0] for x in loaded]
    consts = [x[2] for x in loaded]
    values = {key: _value(key, consts) for key in hist}
    band_counts = [sum(c for key, c in hist.items() if key[0] <= b) for b in range(3)]
    total = band_counts[-1]
    rows = []
    for k in cfg.ks:
        sums = [sum(c * values[key] ** k for key, c in hist.items() if key[0] <= b) for b in range(3)]
        cps = [Fraction(s) / n if n else None for s, n in zip(sums, band_counts)]
        emp = cps[-1]
        pred = _predicted_moment(specs, cfg.sign, k)
        gap = None
        if emp is not None and pred:
            gap = float(abs(emp - pred) / pred)
        rows.append(MomentRow(k, emp, pred, gap, cps))
    histo: Counter = Counter()
    per_omega: dict[int, list] = {}
    for key, c in hist.items():
        histo[values[key]] += c
        slot = per_omega.setdefault(key[1], [0, Fraction(0)])
        slot[0] += c
        slot[1] += c * values[key]
    masses = {v: Fraction(c, total) for v, c in histo.items()} if total else {}
    by_omega = [{"omega": w, "count": n, "mean": str(s / n), "mean_float": float(s / n)} for w, (n, s) in sorted(per_omega.items())]
    return SweepReport(cfg.key(), total, band_counts, rows, masses, by_omega)


def sweep_distribution(cfg: SweepConfig, hist: Counter | None = None, truncation: int = 40) -> SweepReport:
    """Moments plus a comparison of the value histogram with the predicted law."""
    if len(cfg.pairs) != 1:
        raise ValueError("sweep_distribution takes a single pair")
    report = sweep_moments(cfg, hist)
    spec = _load(cfg.pairs[0])[0]
    s0 = spec.with_t(spec.t0)
    dist: dict = {}
    if s0.bipartition is not None:
        bd = predict.bipartite_distribution(s0, cfg.sign, truncation)
        index = {v: i for i, v in enumerate(bd.support)}
        on = [Fraction(0)] * len(bd.support)
        off = Fraction(0)
        for v, p in report.histogram.items():
            if v in index:
                on[index[v]] += p
            else:
                off += p
        last = max([i for i, p in enumerate(on) if p] + [2])
        dist = {
            "kind": "bipartite",
            "scale": bd.scale,
            "support_mass": [
                {"i": i, "value": str(bd.support[i]), "empirical": float(on[i]), "predicted": bd.mass.probabilities[i]} for i in range(last + 1)
            ],
            "off_support_mass": float(off),
            "truncation_error": bd.mass.error_bound,
        }
    else:
        target = predict.point_mass(s0, cfg.sign)
        alt = predict.point_mass(s0, cfg.sign, slot_sum=False)
        near = sum((p for v, p in report.histogram.items() if abs(v - target) <= target / 4), Fraction(0))
        dist = {
            "kind": "point-mass",
            "predicted": str(target),
            "predicted_without_slot_sum": str(alt),
            "mass_within_25pct": float(near),
            "mass_at_zero": float(report.histogram.get(Fraction(0), Fraction(0))),
        }
    report.distribution = dist
    return report


def write_report(report: SweepReport, path: str | None) -> str:
    text = report.to_json()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
