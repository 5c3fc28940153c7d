"""Command-line interface: sdof-lab <subcommand> [flags].

Exit codes: 0 success, 2 validation error, 3 numeric failure.
"""
import argparse
import json
import sys

import numpy as np

from . import alignment, capacity, harness, infotheory, ria
from .channel import MimoMacChannel
from .errors import (NumericFailure, SdofLabError)
from .rng import RngHandle


def _emit(text, out):
    if out:
        harness.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _parse_grid(text):
    lo, hi, count = text.split(":")
    return float(lo), float(hi), int(count)


def cmd_capacity(args):
    ch = MimoMacChannel.from_json(args.channel)
    rep = capacity.maximize_degraded_sum_capacity(ch, tol=args.tol, max_iter=args.max_iter)
    doc = {
        "value_bits": rep.value,
        "iterations": rep.iterations,
        "gradient_norm": rep.gradient_norm,
        "degraded": rep.degraded,
        "converged": rep.converged,
        "Q_star": [q.tolist() for q in rep.Q_star],
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)


def cmd_align(args):
    ch = MimoMacChannel.from_json(args.channel)
    plan = alignment.design_aligned_precoders(ch)
    doc = {
        "F": [f.tolist() for f in plan.F],
        "r": plan.r,
        "eta": plan.eta,
        "legit_rank": plan.legit_rank,
        "sdof_upper_bound": alignment.sdof_upper_bound(ch),
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)


def cmd_ria_sim(args):
    with open(args.gains_file) as f:
        pairs = json.load(f)
    if args.K is not None and args.K != len(pairs):
        raise SdofLabError(f"--K {args.K} does not match {len(pairs)} gain pairs")
    gains = [hk / hke for hk, hke in pairs]
    lo, hi, count = _parse_grid(args.ptilde_grid)
    grid = harness.geometric_grid(lo, hi, count)
    rows = harness.ria_sweep_rows(gains, args.eps, grid, args.trials,
                                  args.seed, jobs=args.jobs)
    _emit_rows(rows, harness.RIA_COLUMNS, args)


def cmd_multilayer_sim(args):
    lo, hi, count = _parse_grid(args.ptilde_grid)
    grid = harness.geometric_grid(lo, hi, count)
    rows = harness.multilayer_sweep_rows(args.n, args.m, args.eps, grid,
                                         args.trials, args.seed, jobs=args.jobs)
    _emit_rows(rows, harness.MULTILAYER_COLUMNS, args)


def _emit_rows(rows, columns, args):
    if args.format == "json":
        text = json.dumps([{c: row[c] for c in columns} for row in rows],
                          indent=2, sort_keys=True, default=float) + "\n"
    else:
        text = harness.rows_to_csv(rows, columns)
    _emit(text, args.out)


def cmd_region(args):
    with open(args.model) as f:
        doc = json.load(f)
    dm = infotheory.DiscreteMac(pu=tuple(np.array(p) for p in doc["pu"]),
                                px_given_u=tuple(np.array(p) for p in doc["px_given_u"]),
                                channel=np.array(doc["channel"]))
    rep = infotheory.thm1_region(dm)
    out = {
        "subset_rates": {",".join(map(str, sorted(s))): v
                         for s, v in rep.subset_rates.items()},
        "sum_bound": rep.sum_bound,
    }
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)


def cmd_equivocation(args):
    with open(args.codebook) as f:
        cb_doc = json.load(f)
    with open(args.eve_channel) as f:
        eve_doc = json.load(f)
    codebooks = []
    for user in cb_doc["users"]:
        seqs = np.array(user["sequences"], dtype=np.int64)
        bin_of = np.array(user["bin_of"], dtype=np.int64)
        codebooks.append(ria.BinningCodebook(
            n=int(cb_doc["n"]), rate_bits=float(np.log2(user["num_bins"])) / cb_doc["n"],
            sequences=seqs, bin_of=bin_of, num_bins=int(user["num_bins"]),
            rng=RngHandle(args.seed)))
    table = {tuple(x): np.array(p, dtype=float)
             for x, p in zip(eve_doc["inputs"], eve_doc["pmf"])}
    delta, h_cond = infotheory.equivocation_exact(codebooks, lambda xs: table[xs])
    _emit(json.dumps({"delta": delta, "h_w_given_z_bits": h_cond}, indent=2) + "\n",
          args.out)


def cmd_sweep(args):
    with open(args.config) as f:
        doc = json.load(f)
    cfg = harness.SweepConfig(scheme=doc["scheme"], params=doc["params"],
                              grid_lo=doc["grid"][0], grid_hi=doc["grid"][1],
                              grid_count=int(doc["grid"][2]),
                              trials=int(doc["trials"]),
                              seed=int(doc.get("seed", args.seed)),
                              out=args.out or doc.get("out"))
    text, _ = harness.run_sweep(cfg, jobs=args.jobs)
    if not cfg.out:
        sys.stdout.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="sdof-lab",
                                description="Secure degrees-of-freedom lab for the Gaussian MAC "
                                            "with an eavesdropper")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("capacity", help="maximize the degraded secrecy sum rate")
    c.add_argument("--channel", required=True)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--max-iter", type=int, default=5000)
    c.set_defaults(func=cmd_capacity)

    a = sub.add_parser("align", help="design aligned precoders and report S-DoF")
    a.add_argument("--channel", required=True)
    a.set_defaults(func=cmd_align)

    r = sub.add_parser("ria-sim", help="power sweep of the integer-constellation scheme")
    r.add_argument("--K", type=int, default=None)
    r.add_argument("--gains-file", required=True)
    r.add_argument("--eps", type=float, default=0.05)
    r.add_argument("--ptilde-grid", required=True, metavar="LO:HI:COUNT")
    r.add_argument("--trials", type=int, default=10000)
    r.add_argument("--jobs", type=int, default=1)
    r.set_defaults(func=cmd_ria_sim)

    m = sub.add_parser("multilayer-sim", help="power sweep of the layered rational-gain scheme")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--m", type=int, required=True)
    m.add_argument("--eps", type=float, default=0.05)
    m.add_argument("--ptilde-grid", required=True, metavar="LO:HI:COUNT")
    m.add_argument("--trials", type=int, default=10000)
    m.add_argument("--jobs", type=int, default=1)
    m.set_defaults(func=cmd_multilayer_sim)

    g = sub.add_parser("region", help="evaluate the secrecy rate-region constraints")
    g.add_argument("--model", required=True)
    g.set_defaults(func=cmd_region)

    e = sub.add_parser("equivocation", help="exact equivocation of a binning codebook")
    e.add_argument("--codebook", required=True)
    e.add_argument("--eve-channel", required=True)
    e.set_defaults(func=cmd_equivocation)

    s = sub.add_parser("sweep", help="run a sweep from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (SdofLabError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
