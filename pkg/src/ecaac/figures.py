"""Figure rendering for the scan report paths.

PNGs land next to the delimited output so a scan leaves both a
machine-readable record and something a human can glance at.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_ecaac_scan(rows: list[dict], out_dir: str | Path, stem: str = "ecaac_scan") -> Path:
    """k_min against p, colored by p mod 3; curves without points sit at 0."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    by_residue = {1: ([], []), 2: ([], [])}
    missing = ([], [])
    for row in rows:
        p = row["p"]
        k = row.get("k_min")
        if row["verdict"] == "NO-POINT" or k is None:
            missing[0].append(p)
            missing[1].append(0)
        else:
            by_residue[p % 3][0].append(p)
            by_residue[p % 3][1].append(k)
    pmax = max((row["p"] for row in rows), default=10)
    ps = range(2, pmax + 2)
    ax.plot(ps, [3 * p for p in ps], ":", color="gray", lw=1, label="k = 3p")
    ax.plot(ps, list(ps), ":", color="lightgray", lw=1, label="k = p")
    ax.scatter(*by_residue[1], color="tab:orange", label="p = 1 mod 3", zorder=3)
    ax.scatter(*by_residue[2], color="tab:blue", label="p = 2 mod 3", zorder=3)
    if missing[0]:
        ax.scatter(*missing, marker="x", color="dimgray", label="no point found", zorder=3)
    ax.set_xlabel("p")
    ax.set_ylabel("minimal k with p | den(k P)")
    ax.set_title("Minimal multiple hitting the kernel of reduction")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    path = out_dir / f"{stem}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_aac_scan(rows: list[dict], out_dir: str | Path, stem: str = "aac_scan") -> Path:
    """Scaled residue (u mod d) / d against d, with the divisible hits marked."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ds = [row["d"] for row in rows]
    res = [(row["u_reported"] % row["d"]) / row["d"] for row in rows]
    hits = [row["d"] for row in rows if row["divisible"]]
    ax.scatter(ds, res, s=6, color="tab:blue", alpha=0.6, label="u mod d, scaled")
    for d in hits:
        ax.axvline(d, color="tab:red", lw=1, alpha=0.7)
        ax.annotate(str(d), (d, 1.02), ha="center", fontsize=8, color="tab:red")
    ax.set_ylim(-0.05, 1.1)
    ax.set_xlabel("d")
    ax.set_ylabel("(u mod d) / d")
    ax.set_title("Unit coefficient residues; vertical lines mark d | u")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    path = out_dir / f"{stem}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
