#!/usr/bin/env python3
"""Render the figure data emitted by `pdem figures`.

Usage: python scripts/plot_figures.py OUT_DIR

Reads fig1.csv (coherent-state densities at three labels and three times)
and fig2.csv (density surfaces over a full period) from OUT_DIR and writes
fig1.png / fig2.png next to them.
"""
import argparse
import csv
import os
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load(path):
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            fh.seek(0)
        rows = list(csv.DictReader(fh))
    data = defaultdict(list)
    for r in rows:
        key = (float(r["alpha_re"]), float(r["alpha_im"]), float(r["t"]))
        data[key].append((float(r["x"]), float(r["density"])))
    return data


def plot_fig1(data, out_path):
    alphas = sorted({k[0] for k in data})
    fig, axes = plt.subplots(1, len(alphas), figsize=(4 * len(alphas), 3.2), sharey=True)
    if len(alphas) == 1:
        axes = [axes]
    for ax, a in zip(axes, alphas):
        for (ar, ai, t), pts in sorted(data.items()):
            if ar != a:
                continue
            x = np.array([p[0] for p in pts])
            d = np.array([p[1] for p in pts])
            ax.plot(x, d, label=f"t = {t:g}")
        ax.set_title(rf"$\alpha = {a:g}$")
        ax.set_xlabel("x")
        ax.legend(fontsize=8)
    axes[0].set_ylabel(r"$|\Xi_\alpha(x,t)|^2$")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_fig2(data, out_path):
    alphas = sorted({k[0] for k in data})
    fig, axes = plt.subplots(1, len(alphas), figsize=(4.2 * len(alphas), 3.4))
    if len(alphas) == 1:
        axes = [axes]
    for ax, a in zip(axes, alphas):
        times = sorted({k[2] for k in data if k[0] == a})
        xs = np.array(sorted({p[0] for pts in
                              (data[k] for k in data if k[0] == a) for p in pts}))
        surface = np.empty((len(times), len(xs)))
        for i, t in enumerate(times):
            pts = sorted(data[(a, 0.0, t)])
            surface[i] = [p[1] for p in pts]
        mesh = ax.pcolormesh(xs, times, surface, shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax, shrink=0.85)
        ax.set_title(rf"$\alpha = {a:g}$")
        ax.set_xlabel("x")
        ax.set_ylabel("t")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", help="directory holding fig1.csv / fig2.csv")
    args = parser.parse_args()
    made = []
    for name, plot in (("fig1", plot_fig1), ("fig2", plot_fig2)):
        src = os.path.join(args.out_dir, f"{name}.csv")
        if not os.path.exists(src):
            print(f"skipping {name}: {src} not found", file=sys.stderr)
            continue
        dst = os.path.join(args.out_dir, f"{name}.png")
        plot(load(src), dst)
        made.append(dst)
    if not made:
        return 1
    print("wrote " + ", ".join(made))
    return 0


if __name__ == "__main__":
    sys.exit(main())
