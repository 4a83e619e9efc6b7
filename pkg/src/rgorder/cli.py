"""Command line entry point (``rgorder``).

Exit codes: 0 success, 2 a hard check failed, 3 bad input, config or IO,
4 the dimension search hit ``--kmax``.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import experiments as ex
from . import numerics as num
from .dimension import DEFAULT_KMAX, BudgetExceeded, exact_dimension, sub_realiser
from .poset import (
    down_set,
    format_edges,
    format_poset,
    format_realiser,
    parse_set,
    read_poset,
    up_set,
)
from .random_orders import BipartiteOrder, ModelSpec, sample
from .realisers import (
    HookConditionError,
    bipartite_split,
    brightwell_unicyclic,
    cosparse_realiser,
    general_split_first,
    general_split_second,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4


class InputError(Exception):
    pass


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def _load_poset(path: str):
    try:
        return read_poset(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_set(path: str | None) -> frozenset[int]:
    if path is None:
        return frozenset()
    try:
        return parse_set(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _q(text: str):
    """Rational if written as ``a/b``, else float."""
    if "/" in text:
        return Fraction(text)
    return float(text)


# ---------------------------------------------------------------- commands

def cmd_dim(args) -> int:
    P = _load_poset(args.poset)
    res = exact_dimension(P, args.kmax)
    if res.exceeded:
        print(f"exceeded: dimension > {args.kmax} (lower bound {res.lower_bound})")
        return EXIT_BUDGET
    print(f"dimension {res.dimension}")
    if args.witness:
        _emit(format_realiser(res.witness), args.witness)
    return EXIT_OK


def cmd_construct(args) -> int:
    P = _load_poset(args.poset)
    S = _load_set(args.set)
    V = frozenset(P.elements)
    if S - V:
        raise InputError(f"set contains labels outside 1..{P.n}")
    k = args.kmax
    if args.kind == "bipartite-split":
        order = BipartiteOrder.infer(P)
        R = bipartite_split(order, S, sub_realiser(P, up_set(P, S), k), sub_realiser(P, V - S, k))
    elif args.kind == "general-split":
        U = up_set(P, S) - S if S else frozenset()
        D = down_set(P, S) - S if S else frozenset()
        if args.part == "first":
            R = general_split_first(P, S, sub_realiser(P, S | U | D, k), sub_realiser(P, V - S, k))
        else:
            R = general_split_second(P, S, sub_realiser(P, D | S, k), sub_realiser(P, U | S, k),
                                     sub_realiser(P, U | D, k))
    elif args.kind == "unicyclic":
        R = brightwell_unicyclic(P)
    else:
        R = cosparse_realiser(BipartiteOrder.infer(P), k)
    print(f"realiser of size {len(R)}", file=sys.stderr)
    _emit(format_realiser(R), args.out)
    return EXIT_OK


def cmd_alpha(args) -> int:
    print(repr(num.solve_alpha(args.c)))
    return EXIT_OK


def cmd_bound(args) -> int:
    c_range = ex.parse_range(args.c_range)
    if args.which == "bipartite":
        text = ex.emit_plot_data("bipartite-lower", args.csv, c_range=c_range)
    else:
        text = ex.emit_plot_data("gnp-lower", args.csv, c_range=c_range, xi_rule=args.xi_rule)
    if args.csv is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_pmf(args) -> int:
    q = _q(args.q)
    fn = num.upset_pmf if args.which == "upset" else num.downset_pmf
    top = args.sizeU if args.which == "upset" else args.sizeV
    rows = []
    for s in range(top + 1):
        v = fn(args.sizeU, args.sizeV, q, s, exact=args.exact)
        rows.append({"s": s, "probability": str(v) if isinstance(v, Fraction) else repr(v)})
    text = ex.write_csv(rows, ["s", "probability"], args.csv)
    if args.csv is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_experiment_run(args) -> int:
    cfg = ex.load_config(args.config)
    if args.output:
        cfg = ex.ExperimentConfig.from_dict({**cfg.to_dict(), "output": args.output})
    res = ex.run_experiment(cfg, workers=args.workers)
    print(f"wrote {res.records_path} and {res.summary_path} ({len(res.records)} trials)")
    if res.hard_failures:
        print(f"{res.hard_failures} hard check failure(s)", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


def cmd_experiment_verify_pmf(args) -> int:
    rep = ex.verify_pmf(args.sizeV, args.sizeU, _q(args.q) if args.mode == "exhaustive" else float(_q(args.q)),
                        mode=args.mode, trials=args.trials, seed=args.seed)
    print("s,observed,expected")
    for s, (o, e) in enumerate(zip(rep.observed, rep.expected)):
        print(f"{s},{o},{e}")
    if rep.mode == "exhaustive":
        print(f"exact match: {rep.exact_match}")
        ok = rep.exact_match
    else:
        print(f"chi2 {rep.chi2:.4f} p-value {rep.pvalue:.4f}")
        ok = rep.pvalue >= args.alpha
    return EXIT_OK if ok else EXIT_CHECK


def cmd_plot(args) -> int:
    params: dict = {}
    if args.c_range:
        params["c_range"] = ex.parse_range(args.c_range)
    if args.kind == "gnp-lower":
        params["xi_rule"] = args.xi_rule
    if args.kind == "dim-vs-c":
        params.update(model=args.model, n=args.n, trials=args.trials, seed=args.seed, k_max=args.kmax)
    if args.kind == "pmf":
        if args.sizeU is None or args.sizeV is None or args.q is None:
            raise InputError("pmf plot needs --sizeU, --sizeV and --q")
        params.update(sizeU=args.sizeU, sizeV=args.sizeV, q=_q(args.q), exact=args.exact)
    text = ex.emit_plot_data(args.kind, args.out, **params)
    if args.out is None:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sample(args) -> int:
    spec = ModelSpec.from_c(args.model, args.n, args.c, args.seed)
    drawn = sample(spec, args.trial)
    _emit(format_poset(drawn.poset), args.out)
    if args.edges:
        _emit(format_edges(drawn.edges), args.edges)
    if args.spec:
        _emit(json.dumps(json.loads(spec.to_json()) | {"trial": args.trial}) + "\n", args.spec)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rgorder", description="Dimension of random graph orders.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", help="exact dimension of a poset file")
    p.add_argument("poset")
    p.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    p.add_argument("--witness", help="write a minimum realiser here")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("construct", help="build a realiser by decomposition")
    p.add_argument("kind", choices=["bipartite-split", "general-split", "unicyclic", "cosparse"])
    p.add_argument("poset")
    p.add_argument("--set", help="file with one element label per line")
    p.add_argument("--out", help="realiser output file (default stdout)")
    p.add_argument("--part", choices=["first", "second"], default="first",
                   help="general-split: whole order (first) or the D[S] u U[S] part (second)")
    p.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("alpha", help="solve (e^2/x^2) e^{-cx} = 1")
    p.add_argument("--c", type=float, required=True)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("bound", help="lower-bound curves as CSV (c, value, ...)")
    p.add_argument("which", choices=["bipartite", "gnp"])
    p.add_argument("--c-range", required=True, help="a:b:step")
    p.add_argument("--csv", help="output file (default stdout)")
    p.add_argument("--xi-rule", choices=list(num.XI_RULES), default="inv15log")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("pmf", help="up-set / down-set size law as CSV (s, probability)")
    p.add_argument("which", choices=["upset", "downset"])
    p.add_argument("--sizeU", type=int, required=True)
    p.add_argument("--sizeV", type=int, required=True)
    p.add_argument("--q", required=True, help="float or a/b")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_pmf)

    p = sub.add_parser("experiment", help="Monte Carlo runs")
    esub = p.add_subparsers(dest="action", required=True)
    r = esub.add_parser("run")
    r.add_argument("config")
    r.add_argument("--workers", type=int)
    r.add_argument("--output", help="override the config's output stem")
    r.set_defaults(func=cmd_experiment_run)
    v = esub.add_parser("verify-pmf")
    v.add_argument("--sizeV", type=int, required=True)
    v.add_argument("--sizeU", type=int, required=True)
    v.add_argument("--q", required=True)
    v.add_argument("--mode", choices=["exhaustive", "montecarlo"], default="exhaustive")
    v.add_argument("--trials", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--alpha", type=float, default=1e-3, help="chi-square rejection level")
    v.set_defaults(func=cmd_experiment_verify_pmf)

    p = sub.add_parser("plot", help="plot data as CSV")
    p.add_argument("kind", choices=list(ex.PLOT_KINDS))
    p.add_argument("--out")
    p.add_argument("--c-range")
    p.add_argument("--xi-rule", choices=list(num.XI_RULES), default="inv15log")
    p.add_argument("--model", choices=["gnp", "bipartite"], default="gnp")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=DEFAULT_KMAX)
    p.add_argument("--sizeU", type=int)
    p.add_argument("--sizeV", type=int)
    p.add_argument("--q")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("sample", help="draw a random order")
    p.add_argument("--model", choices=["gnp", "bipartite"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out", help="poset file (default stdout)")
    p.add_argument("--edges", help="also write the sampled edge list")
    p.add_argument("--spec", help="also write the model spec as JSON")
    p.set_defaults(func=cmd_sample)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except HookConditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (InputError, ex.ConfigError, ValueError, TypeError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
