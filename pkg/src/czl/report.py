"""Report files: the counting table as TSV plus matplotlib figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .carlitz import D1  # noqa: E402
from .compositions import count_d, count_s, count_t, format_array  # noqa: E402
from .field import field  # noqa: E402
from .relations import _residue_mod, transition_AT_to_AS  # noqa: E402


def counts_table(q, max_w):
    return [(w, count_d(w, q), count_s(w, q), count_t(w, q)) for w in range(1, max_w + 1)]


def write_counts_tsv(path, q, max_w):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(["q", "w", "d", "s", "t"])
        for row in counts_table(q, max_w):
            out.writerow([q, *row])


def plot_growth(path, qs, max_w):
    fig, ax = plt.subplots(figsize=(6, 4))
    for q in qs:
        rows = counts_table(q, max_w)
        ws = [r[0] for r in rows]
        line, = ax.semilogy(ws, [r[2] for r in rows], marker="o", label=f"s(w), q={q}")
        ax.semilogy(ws, [r[1] for r in rows], ls="--", color=line.get_color(), label=f"d(w), q={q}")
    ax.set_xlabel("weight w")
    ax.set_ylabel("dimension")
    ax.set_title("Growth of d(w) and s(w)")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def transition_pattern(q, w):
    """Matrix of residues mod D_1: +1, -1, 0, or nan where the residue is not a constant."""
    tr = transition_AT_to_AS(q, w)
    n = len(tr.rows)
    F = field(q)
    minus_one = F.NEG[1]
    d1 = D1(q)
    M = np.zeros((n, n))
    for (i, j), c in tr.matrix.items():
        r = _residue_mod(c, d1)
        if not r:
            continue
        if r.deg() == 0 and r.c[0] == 1:
            M[i, j] = 1
        elif r.deg() == 0 and r.c[0] == minus_one:
            M[i, j] = -1
        else:
            M[i, j] = np.nan
    return tr, M


def plot_transition(path, q, w):
    tr, M = transition_pattern(q, w)
    n = len(tr.rows)
    fig, ax = plt.subplots(figsize=(max(4, 0.35 * n + 2), max(4, 0.35 * n + 1.5)))
    im = ax.imshow(np.nan_to_num(M, nan=0.5), cmap="coolwarm", vmin=-1, vmax=1)
    labels = [format_array(b) for b in tr.rows]
    if n <= 40:
        ax.set_xticks(range(n), labels, rotation=90, fontsize=6)
        ax.set_yticks(range(n), [format_array(s) for s in tr.sources], fontsize=6)
    ax.set_xlabel("AT array")
    ax.set_ylabel("AS array")
    ax.set_title(f"AT to AS transition mod D_1, q={q}, w={w}")
    fig.colorbar(im, ax=ax, shrink=0.7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(out_dir, q, max_w, transition_weight, growth_qs=None):
    """Write counts.tsv, growth.png and transition.png into out_dir; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"counts": out / "counts.tsv", "growth": out / "growth.png",
             "transition": out / "transition.png"}
    write_counts_tsv(paths["counts"], q, max_w)
    plot_growth(paths["growth"], growth_qs or sorted({2, 3, q}), max_w)
    plot_transition(paths["transition"], q, transition_weight)
    return paths
