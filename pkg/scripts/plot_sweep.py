#!/usr/bin/env python3
"""
Plot a sweep table written by `bisqueeze sweep`.

Needs the optional `plot` extra (matplotlib).
"""

import argparse
import sys

import pandas as pd

NEGATIVITY_COLUMNS = ("N_abc", "N_a_bc", "N_b_ac", "N_c_ab", "N_ab", "N_bc", "N_out")
COHERENCE_COLUMNS = ("adag_c", "C_ac", "adag_c_out", "C_out")


def plot(frame: pd.DataFrame, out_png: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4))
    for column in NEGATIVITY_COLUMNS:
        if column in frame:
            left.plot(frame["r"], frame[column], label=column)
    left.set_xlabel("r = R_ab = R_bc")
    left.set_ylabel("negativity")
    left.legend()

    for column in COHERENCE_COLUMNS:
        if column in frame:
            right.plot(frame["r"], frame[column], label=column)
    right.set_xlabel("r = R_ab = R_bc")
    right.set_ylabel("coherence")
    right.legend()

    fig.tight_layout()
    fig.savefig(out_png, dpi=180, bbox_inches="tight")
    plt.close(fig)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="Sweep CSV")
    ap.add_argument("--out", default="sweep.png", help="PNG to write")
    args = ap.parse_args()

    frame = pd.read_csv(args.csv)
    if "r" not in frame:
        print(f"error: {args.csv} has no 'r' column", file=sys.stderr)
        return 2
    try:
        plot(frame, args.out)
    except ImportError:
        print("error: matplotlib is not installed (pip install bisqueeze[plot])", file=sys.stderr)
        return 1
    print(f"Plot written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
