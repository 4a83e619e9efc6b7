"""Regenerate the two lower-bound curves as CSV.

    python3 scripts/reproduce_figures.py --outdir results/figures

The gnp curve costs a few seconds per grid point at the small-c end.
"""
import argparse
from pathlib import Path

from rgorder.experiments import emit_plot_data


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="results/figures")
    ap.add_argument("--gnp-step", type=float, default=0.5)
    args = ap.parse_args()
    out = Path(args.outdir)
    emit_plot_data("bipartite-lower", out / "bipartite_lower.csv", c_range=(2.0, 30.0, 0.1))
    print(f"wrote {out / 'bipartite_lower.csv'}")
    emit_plot_data("gnp-lower", out / "gnp_lower.csv", c_range=(10.5, 49.5, args.gnp_step))
    print(f"wrote {out / 'gnp_lower.csv'}")


if __name__ == "__main__":
    main()
