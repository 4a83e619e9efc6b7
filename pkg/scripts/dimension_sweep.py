"""Exact dimension of small random orders across a range of mean degrees.

Writes one CSV row per c (mean, stderr, min, max, number over the solver cap).
"""
import argparse

from rgorder.experiments import emit_plot_data, parse_range


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", choices=["gnp", "bipartite"], default="gnp")
    ap.add_argument("--n", type=int, default=30)
    ap.add_argument("--c-range", default="0.5:4:0.5")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--kmax", type=int, default=8)
    ap.add_argument("--out", default="results/dim_vs_c.csv")
    args = ap.parse_args()
    emit_plot_data("dim-vs-c", args.out, c_range=parse_range(args.c_range), model=args.model,
                   n=args.n, trials=args.trials, seed=args.seed, k_max=args.kmax)
    print(open(args.out).read(), end="")


if __name__ == "__main__":
    main()
