#!/usr/bin/env python3
"""Plot a round-record CSV produced by the confhedge CLI.

Usage: plot_run.py run.csv [out.png]

Top panel: cumulative algorithm loss (and forecast loss when present).
Bottom panel: posterior weights per expert over time.
"""
import sys

import matplotlib.pyplot as plt
import pandas as pd

def main() -> None:
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    df = pd.read_csv(sys.argv[1])
    weights = [c for c in df.columns if c.startswith("w_")]
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(9, 6))
    top.plot(df["t"], df["h"].cumsum(), label="cumulative h")
    if "a" in df.columns:
        top.plot(df["t"], df["a"].cumsum(), label="cumulative a")
    top.set_ylabel("cumulative loss")
    top.legend()
    for c in weights:
        bottom.plot(df["t"], df[c], label=c)
    bottom.set_xlabel("t")
    bottom.set_ylabel("posterior weight")
    bottom.legend()
    fig.tight_layout()
    if len(sys.argv) > 2:
        fig.savefig(sys.argv[2], dpi=150)
    else:
        plt.show()

if __name__ == "__main__":
    main()
