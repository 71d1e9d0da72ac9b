"""Overlay one or more `cpskit cat-fringes` CSVs. The legend uses sigma from each header."""
import json
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def sigma_of(path):
    with open(path) as f:
        for line in f:
            if line.startswith("# sigma:"):
                return json.loads(line.split(":", 1)[1])
    return None


def main(paths, out):
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in paths:
        df = pd.read_csv(path, comment="#")
        line, = ax.plot(df.p, df.density, label=f"sigma = {sigma_of(path)}")
        if df["stderr"].notna().any():
            ax.fill_between(df.p, df.density - 3 * df["stderr"], df.density + 3 * df["stderr"],
                            color=line.get_color(), alpha=0.2, lw=0)
    ax.set_xlabel("p")
    ax.set_ylabel("P(p)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    if len(sys.argv) < 3:
        sys.exit("usage: plot_fringes.py a.csv [b.csv ...] out.png")
    main(sys.argv[1:-1], sys.argv[-1])
