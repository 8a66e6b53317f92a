#!/usr/bin/env python3
"""Plot time-series or eigen-table CSVs written by hqr.

    plot_series.py out/cah_dynamics/dynamics.csv -c P_g -c mean_photons
    plot_series.py out/demo_lambda_sweep/eigen_table.csv --levels 40
"""

import argparse

import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv")
    ap.add_argument("-c", "--channel", action="append", help="column to plot (repeatable); default all")
    ap.add_argument("--levels", type=int, default=30, help="eigen tables: number of levels drawn")
    ap.add_argument("-o", "--output", help="write to a file instead of showing")
    args = ap.parse_args()

    df = pd.read_csv(args.csv)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    x = df.columns[0]
    if x == "time_fs":
        for name in args.channel or df.columns[1:]:
            ax.plot(df[x], df[name], label=name)
        ax.set_xlabel("t (fs)")
        ax.legend()
    else:
        # Eigen table: one column per level, blank past the window.
        levels = [c for c in df.columns[1:] if c.startswith("E")][: args.levels]
        for name in levels:
            ax.plot(df[x], df[name], color="k", lw=0.8)
        ax.set_xlabel(x)
        ax.set_ylabel("E (eV)")
    fig.tight_layout()
    if args.output:
        fig.savefig(args.output, dpi=150)
    else:
        plt.show()


if __name__ == "__main__":
    main()
