"""Report output: TSV and JSON tables plus PNG plots.

Output is deterministic for a given configuration; PNG metadata is pinned
so repeated runs produce identical files.
"""
from __future__ import annotations

import csv
import json
import os
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .periodic import Sign, orbit_table  # noqa: E402
from .series import point_counts  # noqa: E402

_PNG_META = {"Software": None}


def orbit_rows(max_n: int) -> List[dict]:
    rows = []
    for n in range(1, max_n + 1):
        t = orbit_table(n)
        rows.append({
            "n": n, "points": t.points, "orbits": t.orbits, "neutral": t.neutral,
            "negative": t.signed_total(Sign.NEGATIVE), "positive": t.signed_total(Sign.POSITIVE),
            "alpha0_neg": t.count(Sign.NEGATIVE, "0"), "alpha1_neg": t.count(Sign.NEGATIVE, "1"),
        })
    return rows


def _write_tsv(path: str, rows: List[dict]):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), delimiter="\t", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def _plot_orbits(path: str, rows: List[dict]):
    ns = [r["n"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, label in (("orbits", "all orbits"), ("neutral", "neutral"), ("negative", "negative multiplier"),
                       ("alpha0_neg", "multiplier α⁻(0)"), ("alpha1_neg", "multiplier α⁻(1)")):
        ys = [r[key] for r in rows]
        pts = [(n, y) for n, y in zip(ns, ys) if y > 0]
        if pts:
            ax.plot(*zip(*pts), marker="o", ms=3, label=label)
    ax.set_yscale("log")
    ax.set_xlabel("period n")
    ax.set_ylabel("orbit count")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def _plot_embedding(path: str, table: List[dict]):
    ks = [r["k"] for r in table]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, [max(r["orbits"], 0.5) for r in table], "k-", marker="o", ms=3, label="O_k(Y)")
    for key in "abc":
        ax.plot(ks, [max(r[key], 0.5) for r in table], marker=".", ms=3, label=f"bound ({key})")
    ax.set_yscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel("orbit count")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def write_report(outdir: str, max_n: int, cfg, graph=None) -> List[str]:
    """Write orbit tables and plots; with ``graph`` also the embedding comparison."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    rows = orbit_rows(max_n)
    zeta_pts = point_counts("full", max_n)
    for r, p in zip(rows, zeta_pts):
        r["points_zeta"] = p
    for name, fn in (("orbits.tsv", lambda p: _write_tsv(p, rows)),
                     ("orbits.json", lambda p: _dump(p, rows)),
                     ("orbits.png", lambda p: _plot_orbits(p, rows))):
        path = os.path.join(outdir, name)
        fn(path)
        written.append(path)
    if graph is not None:
        from .embed import check_embedding
        v = check_embedding(graph, cfg.k_max, cfg.enum_limit)
        table = v.table()
        for name, fn in (("embed.tsv", lambda p: _write_tsv(p, table)),
                         ("embed.json", lambda p: _dump(p, v.to_dict())),
                         ("embed.png", lambda p: _plot_embedding(p, table))):
            path = os.path.join(outdir, name)
            fn(path)
            written.append(path)
    return written


def _dump(path: str, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")
