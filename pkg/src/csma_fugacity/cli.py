"""Command-line interface: ``csma-fugacity <subcommand> [flags]``.

Exit status is 0 on success, 1 on usage errors (bad flags, unreadable or
malformed input files) and 2 when the computation itself is refused
(infeasible rates, graphs too large to enumerate, non-convergence).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as fio
from .evaluation import SamplerOracle, random_rows, rows_to_csv, sweep
from .exact import exact_marginals
from .exceptions import (
    CsmaFugacityError,
    DimacsParseError,
    InfeasibleRates,
    NoConvergence,
    ParameterError,
    TooLarge,
)
from .fugacity import raf
from .graph import TOPOLOGY_KINDS, generate, load_dimacs, write_dimacs
from .regions import METHODS
from .sampler import simulate

USAGE, REFUSED = 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _method_list(text):
    methods = [m for m in text.split(",") if m]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {','.join(METHODS)}")
    return methods


def _add_topology(p, required_kind):
    p.add_argument("--kind", choices=TOPOLOGY_KINDS, required=required_kind, help="topology family")
    p.add_argument("--n", type=_positive_int, help="number of links (complete, ring, random_geometric)")
    p.add_argument("--rows", type=_positive_int, help="grid rows")
    p.add_argument("--cols", type=_positive_int, help="grid columns")
    p.add_argument("--side", type=float, default=3.0, help="square side for random_geometric (default 3)")
    p.add_argument("--radius", type=float, default=0.8, help="conflict radius for random_geometric (default 0.8)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="csma-fugacity", description="CSMA fugacities from region-based approximations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write a conflict graph in DIMACS format")
    _add_topology(p, required_kind=True)
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("fugacity", help="compute log-fugacities for target rates")
    p.add_argument("--graph", required=True, help="DIMACS conflict graph")
    p.add_argument("--method", choices=METHODS, default="clique", help="region family (default clique)")
    rates = p.add_mutually_exclusive_group(required=True)
    rates.add_argument("--rate", type=float, help="one target rate for every link")
    rates.add_argument("--rates", help="file of whitespace-separated per-link rates")
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("marginals", help="exact service rates for given fugacities")
    p.add_argument("--graph", required=True, help="DIMACS conflict graph")
    p.add_argument("--fugacities", required=True, help="fugacity file")

    p = sub.add_parser("simulate", help="estimate service rates with the CSMA chain")
    p.add_argument("--graph", required=True, help="DIMACS conflict graph")
    p.add_argument("--fugacities", required=True, help="fugacity file")
    p.add_argument("--slots", type=_positive_int, default=1_000_000, help="total slots (default 1e6)")
    p.add_argument("--burn-in", type=_nonneg_int, default=10_000, help="discarded initial slots (default 1e4)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--trace", help="write one 't <slot> <hex>' line per slot to this path")

    p = sub.add_parser("sweep", help="approximation error across methods and loads")
    p.add_argument("--graph", help="DIMACS conflict graph (or use --kind)")
    _add_topology(p, required_kind=False)
    p.add_argument("--methods", type=_method_list, default=list(METHODS), help="comma-separated methods")
    p.add_argument("--loads", type=_float_list, default=[0.3, 0.5, 0.7, 0.9], help="comma-separated loads in (0,1]")
    p.add_argument("--oracle", choices=("exact", "sampler"), default="exact", help="rate oracle (default exact)")
    p.add_argument("--slots", type=_positive_int, default=1_000_000, help="sampler slots (default 1e6)")
    p.add_argument("--csv", help="output path (default stdout)")

    p = sub.add_parser("table1", help="mean error over random geometric graphs")
    p.add_argument("--count", type=_positive_int, default=30, help="number of graphs (default 30)")
    p.add_argument("--n", type=_positive_int, default=20, help="links per graph (default 20)")
    p.add_argument("--load", type=float, default=0.8, help="load (default 0.8)")
    p.add_argument("--seed", type=int, default=0, help="first seed (default 0)")
    p.add_argument("--csv", help="per-graph rows to this path")
    return parser


def _read(path, mode="rb"):
    try:
        with open(path, mode) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path):
    return load_dimacs(_read(path))


def _emit(text, path, out):
    if path:
        fio.write_atomic(path, text)
    else:
        out.write(text)


def _topology(args):
    if args.graph and args.kind:
        raise UsageError("sweep: give either --graph or --kind, not both")
    if args.graph:
        return _load_graph(args.graph), args.graph
    if not args.kind:
        raise UsageError("sweep: one of --graph or --kind is required")
    g = generate(args.kind, n=args.n, rows=args.rows, cols=args.cols, side=args.side, radius=args.radius, seed=args.seed)
    label = args.kind
    if args.kind == "grid":
        label = f"grid_{args.rows}x{args.cols}"
    elif args.kind in ("complete", "ring"):
        label = f"{args.kind}_{args.n}"
    elif args.kind == "random_geometric":
        label = f"random_geometric_{args.seed:04d}"
    return g, label


def _run(args, out):
    if args.command == "gen":
        g = generate(args.kind, n=args.n, rows=args.rows, cols=args.cols, side=args.side, radius=args.radius, seed=args.seed)
        _emit(write_dimacs(g).decode("ascii"), args.out, out)
    elif args.command == "fugacity":
        g = _load_graph(args.graph)
        s = np.full(g.n, args.rate) if args.rates is None else fio.parse_rates(_read(args.rates), g.n)
        _emit(fio.format_vector(raf(g, s, args.method)), args.out, out)
    elif args.command == "marginals":
        g = _load_graph(args.graph)
        v = fio.parse_vector(_read(args.fugacities), "v", g.n)
        out.write(fio.format_vector(exact_marginals(g, v).marginals, "s"))
    elif args.command == "simulate":
        g = _load_graph(args.graph)
        v = fio.parse_vector(_read(args.fugacities), "v", g.n)
        if not args.slots > args.burn_in:
            raise UsageError("simulate: --slots must exceed --burn-in")
        if args.trace:
            with open(args.trace, "w") as trace:
                rates = simulate(g, v, args.slots, args.burn_in, args.seed, trace)
        else:
            rates = simulate(g, v, args.slots, args.burn_in, args.seed)
        out.write(fio.format_vector(rates, "s"))
    elif args.command == "sweep":
        g, label = _topology(args)
        seed = args.seed if args.kind == "random_geometric" else None
        oracle = "exact"
        if args.oracle == "sampler":
            oracle = SamplerOracle(args.slots, min(10_000, args.slots // 10), args.seed)
        rows = sweep(g, args.methods, args.loads, oracle, topology=label, seed=seed)
        _emit(rows_to_csv(rows), args.csv, out)
    elif args.command == "table1":
        if not 0.0 < args.load <= 1.0:
            raise UsageError("table1: --load must lie in (0, 1]")
        rows = random_rows(args.count, args.n, args.load, METHODS, args.seed)
        if args.csv:
            fio.write_atomic(args.csv, rows_to_csv(rows))
        for method in METHODS:
            vals = [r.error_pct for r in rows if r.method == method and r.ok]
            mean = f"{np.mean(vals):.4f}" if vals else "nan"
            out.write(f"{method} {mean} ({len(vals)}/{args.count} feasible)\n")


def main(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _run(args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, DimacsParseError) as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    except InfeasibleRates as exc:
        links = ",".join(str(i + 1) for i in exc.region)
        detail = f": {exc.detail}" if exc.detail else ""
        err.write(f"error: infeasible rates on region {{{links}}} (links numbered from 1){detail}\n")
        return REFUSED
    except (TooLarge, NoConvergence) as exc:
        err.write(f"error: {exc}\n")
        return REFUSED
    except (ParameterError, CsmaFugacityError) as exc:
        err.write(f"error: {exc}\n")
        return USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
