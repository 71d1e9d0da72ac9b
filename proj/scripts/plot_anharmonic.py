"""Plot an `cpskit anharmonic` CSV: |<a>| against the analytic curve, and the deviation."""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def main(path, out):
    df = pd.read_csv(path, comment="#")
    fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(6, 5))
    top.plot(df.t, np.hypot(df.a_re, df.a_im), label="CPS")
    top.plot(df.t, np.hypot(df.analytic_re, df.analytic_im), "--", label="analytic")
    top.set_ylabel("|<a>|")
    top.legend()
    bottom.semilogy(df.t, df.deviation.clip(lower=1e-18))
    bottom.set_xlabel("t")
    bottom.set_ylabel("deviation")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit("usage: plot_anharmonic.py in.csv out.png")
    main(sys.argv[1], sys.argv[2])
