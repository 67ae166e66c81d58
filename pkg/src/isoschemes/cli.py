"""Command-line entry point: ``isoschemes <subcommand> ...``.

Exit codes: 0 success, 1 negative answer (not Hamiltonian, rank mismatch,
no colliding pair, failed verification), 2 inconclusive, 64 usage error,
65 bad input data, 66 unreadable or unwritable file.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from .errors import ConfigurationError, IsoError, NotFound, ParseError

EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _graph(args):
    from .graph import parse_graph
    return parse_graph(_read(args.graph))


def _forest(args, G):
    from .graph import parse_ef, treedepth_exact
    if args.forest:
        return parse_ef(_read(args.forest))
    if G.n > 12:
        raise UsageError("--forest is required for graphs with more than 12 vertices")
    return treedepth_exact(G)[1]


def _params(args):
    from .schemes import SchemeParams
    return SchemeParams(C=args.C, alpha=Fraction(args.alpha) if args.alpha else None,
                        M_override=args.M, k=args.k, d=args.d, layer_multiplier=args.layer_multiplier)


def _add_scheme_flags(p, seed_default):
    p.add_argument("--graph", required=True, help="input graph in .gr format")
    p.add_argument("--forest", help="elimination forest (.ef) for level-aware kinds; "
                                    "computed exactly when omitted and n <= 12")
    p.add_argument("-C", dest="C", type=int, default=4, help="range exponent constant (default 4)")
    p.add_argument("--alpha", help="separator exponent for the separable kind, e.g. 1/2")
    p.add_argument("-k", dest="k", type=int, help="treewidth bound for the treewidth kind")
    p.add_argument("-d", dest="d", type=int, help="height override for the randomized MIS kind")
    p.add_argument("--M", dest="M", type=int, help="prime range for the parametric kind")
    p.add_argument("--layer-multiplier", choices=("current", "previous"), default="current",
                   help="how layers are scaled in the layered HC kinds (default current)")
    p.add_argument("--seed", default=seed_default, help="root seed (default $ISO_SEED or 0)")


HC_KINDS = ("general", "treewidth", "separable", "parametric")
SCHEME_KINDS = HC_KINDS + ("mis-det", "mis-rand", "mm-det", "mm-rand")


def cmd_scheme(args):
    from .verify import SchemeSpec, sample_weights
    G = _graph(args)
    if args.kind in HC_KINDS:
        spec = SchemeSpec("hc", args.kind, _params(args))
        forest = None
    else:
        problem, kind = args.kind.split("-")
        spec = SchemeSpec(problem, kind, _params(args))
        forest = _forest(args, G)
    w = sample_weights(spec, G, args.seed, forest)
    _emit(w.to_tsv(), args.output)
    return 0


def cmd_verify(args):
    from .verify import SchemeSpec, success_rate
    G = _graph(args)
    forest = None if args.problem == "hc" else _forest(args, G)
    spec = SchemeSpec(args.problem, args.kind, _params(args))
    inst = args.instance or os.path.basename(args.graph)
    rep = success_rate(spec, G, trials=args.trials, seed=args.seed, forest=forest,
                       instance=inst, jobs=args.jobs)
    _emit(rep.to_line() + "\n", args.output)
    return 0


def cmd_rank(args):
    from .rankbased import compat_matrix, expected_rank, gf2_rank
    x = args.boundary
    if x < 0 or x % 2 or x > 12:
        raise UsageError("--boundary must be an even number in 0..12")
    H = compat_matrix(range(1, x + 1))
    if args.dump:
        _emit(H.dump(), args.dump)
    r, e = gf2_rank(H), expected_rank(x)
    ok = r == e
    print(f"rank={r} expected={e} {'OK' if ok else 'MISMATCH'}")
    return 0 if ok else 1


def _lb_weights(args):
    from .schemes import parse_weights
    if args.weights:
        return [list(parse_weights(_read(f)).values) for f in args.weights]
    if not args.n:
        raise UsageError("give --weights files or --n with --random")
    from .numtheory import stream
    rng = stream(args.seed, "lb", args.kind)
    W = args.W or args.n
    return [[rng.randint(1, W) for _ in range(args.n)] for _ in range(args.random)]


def cmd_lb(args):
    from .lowerbounds import build_lb_instance, diagnose_lb_instance
    weights = _lb_weights(args)
    try:
        inst = build_lb_instance(args.kind, weights=weights)
    except NotFound as exc:
        print(f"not-found: {exc}")
        return 1
    problems = diagnose_lb_instance(inst, weights)
    if args.output:
        inst.save(args.output)
    k = len(set(inst.A) - set(inst.B))
    print(f"kind={inst.kind} labels={inst.n_labels} k={k} vertices={inst.graph.n} edges={inst.graph.m} "
          f"A={','.join(map(str, inst.A))} B={','.join(map(str, inst.B))} "
          f"verified={'yes' if not problems else 'no'}")
    for msg in problems:
        print(f"problem: {msg}")
    return 0 if not problems else 1


def cmd_solve_hc(args):
    from .hcsolver import solve_hc_deterministic
    G = _graph(args)
    res = solve_hc_deterministic(G, _params(args), kind=args.kind, budget=args.budget, mode=args.mode,
                                 rounds=args.rounds, seed=args.seed, jobs=args.jobs)
    print(res.to_line())
    return res.verdict.exit_code


def cmd_gef(args):
    from .decomp import build_gef
    G = _graph(args)
    gef = build_gef(G)
    _emit(gef.to_text(), args.output)
    rep = gef.condition_report(G)
    err = sys.stderr if not args.output else sys.stdout
    for key in sorted(rep):
        print(f"{key}={rep[key]}", file=err)
    return 0


def cmd_split(args):
    from .decomp import split_segment
    from .graph import parse_td
    td = parse_td(_read(args.td))
    nodes = [int(t) for t in args.nodes.split(",")] if args.nodes else sorted(td.bags)
    parts = split_segment(td, nodes)
    for i, seg in enumerate(parts):
        print(f"segment {i} size={seg.size} nodes={','.join(map(str, sorted(seg.nodes)))} "
              f"boundary={','.join(map(str, sorted(seg.boundary)))}")
    return 0


def cmd_treedepth(args):
    from .graph import treedepth_exact
    G = _graph(args)
    d, F = treedepth_exact(G, bound=args.bound)
    print(f"treedepth={d}")
    if args.output:
        _emit(F.to_ef(), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    seed_default = os.environ.get("ISO_SEED", "0")
    top = _Parser(prog="isoschemes", description="Isolation schemes, verification harnesses and adversarial instances.")
    sub = top.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("scheme", help="sample one weight function and write it as TSV")
    p.add_argument("--kind", required=True, choices=SCHEME_KINDS, help="scheme kind")
    _add_scheme_flags(p, seed_default)
    p.add_argument("-o", "--output", help="output TSV path (default stdout)")
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("verify", help="empirical isolation rate over derived seeds")
    p.add_argument("--problem", required=True, choices=("hc", "mis", "mm"), help="solution family")
    p.add_argument("--kind", required=True, help="hc: general|treewidth|separable|parametric; mis/mm: det|rand")
    _add_scheme_flags(p, seed_default)
    p.add_argument("--trials", type=int, default=200, help="number of seeds (default 200)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--instance", help="instance name in the report (default graph file name)")
    p.add_argument("-o", "--output", help="write the report line here (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rank", help="GF(2) rank of the matching compatibility matrix")
    p.add_argument("--boundary", type=int, required=True, help="boundary size, even, at most 12")
    p.add_argument("--dump", help="also write the matrix (hex rows) to this file")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("lb", help="build an instance whose two optima tie under given weights")
    p.add_argument("--kind", required=True, choices=("mis", "steiner", "mmm", "hc"), help="instance kind")
    p.add_argument("--weights", action="append", help="weight TSV over labels 1..n; repeat per function")
    p.add_argument("--random", type=int, default=2, help="with --n: number of random weight functions (default 2)")
    p.add_argument("--n", type=int, help="ground set size for random weight functions")
    p.add_argument("--W", type=int, help="random weights are drawn from 1..W (default n)")
    p.add_argument("--seed", default=seed_default, help="root seed (default $ISO_SEED or 0)")
    p.add_argument("-o", "--output", help="directory for instance.gr, .ef/.td and manifest.txt")
    p.set_defaults(func=cmd_lb)

    p = sub.add_parser("solve-hc", help="decide Hamiltonicity through the scheme driver (exit 0/1/2)")
    p.add_argument("--kind", choices=HC_KINDS, default="general", help="scheme kind (default general)")
    p.add_argument("--mode", choices=("sample", "tuple"), default="sample", help="seed sampling or prime-tuple walk")
    p.add_argument("--rounds", type=int, default=8, help="weight functions drawn in sample mode (default 8)")
    p.add_argument("--budget", type=int, default=1_000_000, help="cap on detector calls (default 1000000)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    _add_scheme_flags(p, seed_default)
    p.set_defaults(func=cmd_solve_hc)

    p = sub.add_parser("gef", help="generalized elimination forest from brute-force separators")
    p.add_argument("--graph", required=True, help="input graph in .gr format")
    p.add_argument("-o", "--output", help="write the forest here (default stdout; report goes to stderr)")
    p.set_defaults(func=cmd_gef)

    p = sub.add_parser("split", help="split a segment of a tree decomposition into at most five halves")
    p.add_argument("--td", required=True, help="tree decomposition in .td format")
    p.add_argument("--nodes", help="comma-separated bag ids of the segment (default all)")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("treedepth", help="exact treedepth and an optimal elimination forest")
    p.add_argument("--graph", required=True, help="input graph in .gr format")
    p.add_argument("--bound", type=int, default=12, help="refuse graphs above this many vertices (default 12)")
    p.add_argument("-o", "--output", help="write the forest (.ef) here")
    p.set_defaults(func=cmd_treedepth)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(0)  # nothing should draw from the global stream; pin it anyway
    try:
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"isoschemes: {exc}", file=sys.stderr)
        return EX_USAGE
    except OSError as exc:
        print(f"isoschemes: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except ParseError as exc:
        print(f"isoschemes: parse error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except IsoError as exc:
        print(f"isoschemes: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_DATAERR


if __name__ == "__main__":
    sys.exit(main())
