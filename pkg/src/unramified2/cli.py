"""Command line front end: ``unramified2 <command> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time

from . import predict, verify
from .count import f_t, subset_specs
from .discs import SweepRange, factor_prime_discriminants, sieve_fundamental
from .gf2forms import bitstr
from .group2 import parse_spec, to_text
from .sweep import SweepConfig, sweep_distribution, sweep_moments, write_report

SIGNS = {"neg": -1, "pos": 1}


def _int_range(text: str) -> list[int]:
    """'3' or '2..4'."""
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def _alpha(text: str):
    return None if text == "all" else int(text)


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


# ------------------------------------------------------------ commands


def cmd_groups(args) -> int:
    rows = verify.groups_table(_int_range(args.n))
    if args.json:
        _dump(rows)
        return 0
    cols = ["n", "text", "group", "subgroup", "c", "s", "t0_size", "aut", "bipartite", "preset"]
    writer = csv.DictWriter(sys.stdout, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: r[k] for k in cols})
    return 0


def _count_one(spec, d: int) -> dict:
    fact = factor_prime_discriminants(d)
    per_t = []
    total = 0
    for sub in subset_specs(spec):
        res = f_t(sub, fact)
        per_t.append({"t": [bitstr(u, sub.n) for u in sub.gens], "f_T": str(res.value), "raw_sum": res.raw_sum})
        total += res.value
    return {"d": d, "omega": fact.omega, "prime_discriminants": list(fact.prime_discs), "f_T": per_t, "f": str(total)}


def cmd_count(args) -> int:
    spec = parse_spec(args.group)
    if args.d is not None:
        out = _count_one(spec, args.d)
        out["group"] = to_text(spec)
        _dump(out)
        return 0
    sign = SIGNS[args.sign]
    lo, hi = 0, args.xmax
    if args.range:
        lo, hi = (int(x) for x in args.range.split(":"))
    subs = subset_specs(spec)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["d", "omega", "f"] + ["f_T[" + " ".join(bitstr(u, s.n) for u in s.gens) + "]" for s in subs])
    for fact in sieve_fundamental(SweepRange(sign, hi, _alpha(args.alpha))):
        if abs(fact.d) < lo:
            continue
        vals = [f_t(s, fact).value for s in subs]
        writer.writerow([fact.d, fact.omega, sum(vals)] + [str(v) for v in vals])
    return 0


def cmd_predict(args) -> int:
    specs = [parse_spec(t) for t in args.pairs.split(",")]
    sign = SIGNS[args.sign]
    pred = predict.correlation_prediction(specs * args.k, sign)
    out = pred.as_dict()
    extras = []
    for s in specs:
        s0 = s.with_t(s.t0)
        item = {"pair": s.name or to_text(s), **{k: v for k, v in predict.pair_constants(s0, sign).items()}}
        if s0.bipartition is None:
            item["point_mass"] = str(predict.point_mass(s0, sign))
            item["point_mass_without_slot_sum"] = str(predict.point_mass(s0, sign, slot_sum=False))
            item["k_moment_gamma_path"] = str(predict.k_moment(s0, sign, args.k, path="gamma"))
        else:
            bd = predict.bipartite_distribution(s0, sign)
            item["scale"] = bd.scale
            item["support_head"] = [str(x) for x in bd.support[:5]]
            item["mass_head"] = bd.mass.probabilities[:5]
        extras.append(item)
    out["pairs_detail"] = extras
    for f in out["constants"]["factors"]:
        for key, val in list(f.items()):
            if not isinstance(val, (int, bool, str)):
                f[key] = str(val)
    _dump(out)
    return 0


def cmd_sweep(args) -> int:
    pairs = args.pairs.split(",")
    cfg = SweepConfig(
        pairs=pairs,
        sign=SIGNS[args.sign],
        xmax=args.xmax,
        alpha=_alpha(args.alpha),
        ks=[int(k) for k in args.k.split(",")],
        workers=args.workers,
        output=args.output,
        checkpoint=args.checkpoint,
    )
    t0 = time.perf_counter()
    report = sweep_distribution(cfg) if args.distribution else sweep_moments(cfg)
    text = write_report(report, cfg.output)
    logging.getLogger(__name__).info("sweep finished in %.1f s", time.perf_counter() - t0)
    if not cfg.output:
        sys.stdout.write(text)
    return 0


VERIFY = {
    "quadforms": lambda a: verify.verify_quadforms(a.nmax),
    "groups": lambda a: verify.verify_groups(a.nmax),
    "graphs": lambda a: verify.verify_graphs(),
    "redei": lambda a: {"name": "redei", **_merge(verify.verify_redei(a.xmax), verify.verify_integrality(a.xmax))},
    "localmass": lambda a: verify.verify_localmass(),
    "gamma": lambda a: verify.verify_gamma(),
    "cl": lambda a: verify.verify_cl(a.truncation),
}


def _merge(redei: dict, integrality: dict) -> dict:
    return {"ok": redei["ok"] and integrality["ok"], "identity": redei, "integrality": integrality}


def cmd_verify(args) -> int:
    out = VERIFY[args.target](args)
    _dump(out)
    return 0 if out["ok"] else 1


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unramified2", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groups", help="admissible (G, H) pairs")
    g.add_argument("action", choices=["list"])
    g.add_argument("--n", default="2..3", help="dimension N or range A..B")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_groups)

    c = sub.add_parser("count", help="f_T(d) and f(d)")
    c.add_argument("--group", required=True, help="preset name or 'n; a=<hex>; h=<bits>'")
    c.add_argument("--d", type=int, help="a single fundamental discriminant (JSON output)")
    c.add_argument("--range", help="LO:HI on |d| (CSV output)")
    c.add_argument("--xmax", type=int, default=1000)
    c.add_argument("--sign", choices=SIGNS, default="neg")
    c.add_argument("--alpha", choices=["0", "2", "3", "all"], default="all")
    c.set_defaults(func=cmd_count)

    r = sub.add_parser("predict", help="predicted limiting constants")
    r.add_argument("--pairs", required=True, help="comma separated presets or specs")
    r.add_argument("--sign", choices=SIGNS, default="neg")
    r.add_argument("--k", type=int, default=1)
    r.set_defaults(func=cmd_predict)

    s = sub.add_parser("sweep", help="empirical moments over a discriminant range")
    s.add_argument("--pairs", required=True)
    s.add_argument("--sign", choices=SIGNS, default="neg")
    s.add_argument("--xmax", type=int, required=True)
    s.add_argument("--alpha", choices=["0", "2", "3", "all"], default="all")
    s.add_argument("--k", default="1", help="comma separated moment orders")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--output")
    s.add_argument("--checkpoint")
    s.add_argument("--distribution", action="store_true", help="also compare the value histogram with the predicted law")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="brute-force verification suites")
    v.add_argument("target", choices=sorted(VERIFY))
    v.add_argument("--nmax", type=int, default=4)
    v.add_argument("--xmax", type=int, default=10**5)
    v.add_argument("--truncation", type=int, default=40)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
