"""Command-line interface: ``gwtoll <subcommand> [options]``.

Trees travel between subcommands as text, one tree per line of preorder
outdegrees. Every output starts with ``#`` header lines (version, seed,
config hash and, unless ``--no-timestamp``, a timestamp), which readers
skip. Exit codes: 0 success, 1 usage or input error, 2 a scientific check
failed.
"""
from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import math
import os
import sys
from typing import Sequence, TextIO

from . import __version__, kernels
from .bounds import check_eta_contraction, tau_report
from .errors import GWError
from .experiments import ExperimentConfig, _map_ordered, default_threads, run_experiment, write_outputs
from .functionals import evaluate, parse_family
from .oracle import brute_counts, iter_trees
from .reductions import ReductionKind, reduce_r
from .sampler import (
    SamplerConfig,
    Overflow,
    make_offspring,
    make_rng,
    sample_conditioned,
    sample_gw,
    sample_size_biased,
)
from .trees import build_tree, format_tree, read_trees

EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (GW_SEED overrides)")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header line")
    p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")


def _input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", default="-", help="tree file, one tree per line (default: stdin)")


def _family_args(p: argparse.ArgumentParser, choices: Sequence[str]) -> None:
    p.add_argument("--family", required=True, choices=list(choices))
    p.add_argument("--kind", choices=[k.value for k in ReductionKind], help="reduction rule")
    p.add_argument("--r", type=int, help="number of reduction rounds")
    p.add_argument("--pattern", help='fringe pattern as preorder outdegrees, e.g. "1 0"')
    p.add_argument("--R", dest="R", help="comma-separated outdegree set, e.g. 0,2")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gwtoll", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"gwtoll {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", help="sample trees")
    _common(p)
    p.add_argument("--dist", default="geometric", help="geometric | poisson | binary | custom:p0,p1,...")
    p.add_argument("--n", type=int, help="tree size (conditioned sampling)")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--unconditioned", action="store_true", help="plain Galton-Watson trees")
    p.add_argument("--max-depth", type=int, help="cut unconditioned trees at this depth")
    p.add_argument("--size-biased", type=int, metavar="M", help="size-biased tree cut at depth M")
    p.add_argument("--max-nodes", type=int, default=10_000_000)
    p.add_argument("--rejection-budget", type=int, default=1_000_000)

    p = sub.add_parser("eval", help="evaluate an additive functional")
    _common(p)
    _input(p)
    _family_args(p, ["indset", "matching", "domset", "fringe", "outdeg", "reduction"])

    p = sub.add_parser("reduce", help="run a reduction process")
    _common(p)
    _input(p)
    p.add_argument("--kind", required=True, choices=[k.value for k in ReductionKind])
    p.add_argument("--r", type=int, required=True)

    p = sub.add_parser("verify-bounds", help="check cut-off error certificates")
    _common(p)
    _input(p)
    _family_args(p, ["indset", "matching", "domset", "reduction"])
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--dom-constant", type=float, default=1.0)

    p = sub.add_parser("oracle", help="exact counts by brute force")
    _common(p)
    _input(p)
    p.add_argument("--family", required=True, choices=["indset", "matching", "domset"])

    p = sub.add_parser("experiment", help="Monte Carlo experiment from a JSON config")
    _common(p)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("selftest", help="exhaustive oracle and bound checks on small trees")
    _common(p)
    p.add_argument("--max-n", type=int, default=9)
    return parser


# --------------------------------------------------------------------------


def _resolve_seed(args) -> int:
    env = os.environ.get("GW_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"GW_SEED must be an integer, got {env!r}") from exc
    return args.seed


def _config_hash(args, skip=("threads", "output", "no_timestamp", "input", "out")) -> str:
    data = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    blob = json.dumps(data, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _header(out: TextIO, args, extra: dict | None = None) -> None:
    out.write(f"# gwtoll {__version__}\n")
    out.write(f"# command: {args.command}\n")
    out.write(f"# seed: {args.seed}\n")
    out.write(f"# config_hash: {_config_hash(args)}\n")
    for k, v in (extra or {}).items():
        out.write(f"# {k}: {v}\n")
    if not args.no_timestamp:
        now = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        out.write(f"# timestamp: {now}\n")


def _open_out(path: str) -> TextIO:
    return sys.stdout if path == "-" else open(path, "w")


def _load_trees(path: str):
    if path == "-":
        return list(read_trees(sys.stdin))
    with open(path) as fh:
        return list(read_trees(fh))


def _family(args):
    tag = args.family
    if tag == "reduction":
        if args.kind is None or args.r is None:
            raise UsageError("--family reduction needs --kind and --r")
        return parse_family("reduction", kind=args.kind, r=args.r)
    if tag == "fringe":
        if not args.pattern:
            raise UsageError("--family fringe needs --pattern")
        return parse_family("fringe", pattern=args.pattern)
    if tag == "outdeg":
        if not args.R:
            raise UsageError("--family outdeg needs --R")
        return parse_family("outdeg", R=args.R)
    return parse_family(tag)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return repr(x)
    return str(x)


def _row(values) -> str:
    return ",".join(_fmt(v) for v in values) + "\n"


# --------------------------------------------------------------------------


def cmd_sample(args, out: TextIO) -> int:
    dist = make_offspring(args.dist)
    cfg = SamplerConfig(seed=args.seed, max_nodes=args.max_nodes, rejection_budget=args.rejection_budget)
    modes = sum(x is not None and x is not False for x in (args.n, args.size_biased)) + bool(args.unconditioned)
    if modes != 1:
        raise UsageError("choose exactly one of --n, --unconditioned, --size-biased")
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    if args.n is not None:
        make_tree = lambda i: sample_conditioned(dist, args.n, cfg, rng=make_rng(args.seed, args.n, i))
    elif args.size_biased is not None:
        make_tree = lambda i: sample_size_biased(dist, args.size_biased, cfg, rng=make_rng(args.seed, i))
    else:
        make_tree = lambda i: sample_gw(dist, cfg, rng=make_rng(args.seed, i), max_depth=args.max_depth)
    _header(out, args, {"dist": dist.name, "backend": kernels.BACKEND})
    for w in dist.warnings:
        out.write(f"# warning: {w}\n")
    trees = _map_ordered(make_tree, list(range(args.count)), args.threads)
    for t in trees:
        if isinstance(t, Overflow):
            out.write(f"# overflow: {t.nodes} nodes\n")
        else:
            out.write(format_tree(t) + "\n")
    return EXIT_OK


def cmd_eval(args, out: TextIO) -> int:
    fam = _family(args)
    trees = _load_trees(args.input)
    rows = _map_ordered(lambda t: evaluate(t, fam, keep_toll=False), trees, args.threads)
    ratio_cols = {"indset": ["rho_root"], "matching": ["rho_root"], "domset": ["rho0_root", "rhostar_root"]}
    _header(out, args, {"family": fam.name})
    out.write(",".join(["n", "F_value", "root_toll"] + ratio_cols.get(fam.tag, [])) + "\n")
    for t, ev in zip(trees, rows):
        out.write(_row([t.n, ev.F_value, ev.root_toll, *ev.root_ratios()]))
    return EXIT_OK


def cmd_reduce(args, out: TextIO) -> int:
    if args.r < 1:
        raise UsageError("--r must be >= 1")
    trees = _load_trees(args.input)
    res = _map_ordered(lambda t: reduce_r(t, args.kind, args.r), trees, args.threads)
    _header(out, args)
    out.write("n,X_r,F_r\n")
    for t, rr in zip(trees, res):
        out.write(_row([t.n, rr.X_r, rr.F_r]))
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    fam = _family(args)
    trees = _load_trees(args.input)
    reps = _map_ordered(lambda t: tau_report(t, args.M, fam, args.dom_constant), trees, args.threads)
    _header(out, args, {"family": fam.name})
    out.write("n,M,tau,bound_rhs,cutoff_error,violated,certified\n")
    bad = 0
    for t, r in zip(trees, reps):
        bad += r.violated or not r.certified
        out.write(_row([t.n, r.M, r.tau, r.bound_rhs, r.cutoff_error, r.violated, r.certified]))
    if bad:
        sys.stderr.write(f"verify-bounds: {bad} of {len(trees)} trees failed\n")
        return EXIT_CHECK
    return EXIT_OK


def cmd_oracle(args, out: TextIO) -> int:
    trees = _load_trees(args.input)
    counts = _map_ordered(lambda t: brute_counts(t, args.family), trees, args.threads)
    cols = {"indset": "I,I0", "matching": "m,m0", "domset": "d,d0,dstar"}[args.family]
    _header(out, args, {"family": args.family})
    out.write(f"n,{cols}\n")
    for t, c in zip(trees, counts):
        out.write(",".join([str(t.n), *c.as_strings()]) + "\n")
    return EXIT_OK


def cmd_experiment(args, out: TextIO) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    if os.environ.get("GW_SEED", "").strip():
        cfg.seed = args.seed
    summary = run_experiment(cfg, threads=args.threads)
    paths = write_outputs(summary, args.out)
    _header(out, args, {"experiment_hash": cfg.config_hash()})
    for old, new in cfg.adjusted_sizes:
        out.write(f"# size {old} adjusted to {new}\n")
    out.write("family,n,replicates,mean,mu_hat,gamma2_hat,skewness,excess_kurtosis,ks,normal\n")
    for name, rows in summary.sizes.items():
        for s in rows:
            nr = s.normality
            vals = [name, s.n, s.replicates, s.mean, s.mu_hat, s.gamma2_hat]
            if nr is None or nr.degenerate:
                vals += ["", "", "", ""]
            else:
                vals += [nr.skewness, nr.excess_kurtosis, nr.ks_distance, nr.normal]
            out.write(_row(vals))
    for p in paths:
        out.write(f"# wrote {os.path.basename(p)}\n")
    return EXIT_OK


def selftest_suite(max_n: int = 9) -> list[tuple[str, bool, str]]:
    """Exhaustive oracle equivalence and bound checks over all trees with
    at most ``max_n`` nodes."""
    results = []
    trees = [build_tree(s) for n in range(1, max_n + 1) for s in iter_trees(n)]
    worst = 0.0
    for t in trees:
        for fam in ("indset", "matching", "domset"):
            c = brute_counts(t, fam)
            F = evaluate(t, fam, keep_toll=False).F_value
            worst = max(worst, abs(math.exp(F) / c.total - 1.0))
    results.append(("oracle equivalence", worst <= 1e-9, f"{len(trees)} trees, max rel err {worst:.2e}"))
    bad = 0
    for t in trees:
        for M in range(0, 9):
            for fam in ("indset", "matching"):
                if fam == "matching" and M == 0:
                    continue
                r = tau_report(t, M, fam)
                bad += r.violated or not r.certified
    results.append(("explicit cut-off bounds", bad == 0, f"{bad} violations"))
    bad = skipped = total = 0
    for t in trees:
        for M in (3, 4):
            rep = check_eta_contraction(t, M)
            total += 1
            skipped += rep.skipped
            bad += not rep.holds
    results.append(("eta contraction", bad == 0, f"{bad} violations, {skipped}/{total} skipped"))
    return results


def cmd_selftest(args, out: TextIO) -> int:
    _header(out, args, {"backend": kernels.BACKEND})
    ok = True
    for name, passed, detail in selftest_suite(args.max_n):
        ok &= passed
        out.write(f"{'PASS' if passed else 'FAIL'} {name}: {detail}\n")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {
    "sample": cmd_sample,
    "eval": cmd_eval,
    "reduce": cmd_reduce,
    "verify-bounds": cmd_verify,
    "oracle": cmd_oracle,
    "experiment": cmd_experiment,
    "selftest": cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.seed = _resolve_seed(args)
        if args.threads is None:
            args.threads = default_threads()
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        out = _open_out(args.output)
        try:
            code = COMMANDS[args.command](args, out)
        finally:
            if out is not sys.stdout:
                out.close()
            else:
                out.flush()
        return code
    except (UsageError, GWError, ValueError, OSError) as exc:
        sys.stderr.write(f"gwtoll {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
