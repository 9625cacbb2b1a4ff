"""File-based figure rendering for report objects.

Each render function writes a PNG and the matching delimited table side by
side in the requested directory and returns both paths.  Rendering is
headless (Agg backend) and deterministic in content; figures are a viewing
aid, the tables remain the canonical output.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .expansion import ExpansionReport
from .graphs import DualPathReport
from .lattice import InfoProfile, indices_of
from .serialize import contributions_table, convergence_table, expansion_table, profile_table


def _write(fig, directory: str | Path, stem: str, table: str) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    png = directory / f"{stem}.png"
    csv = directory / f"{stem}.csv"
    fig.savefig(png, dpi=120)
    plt.close(fig)
    csv.write_text(table, encoding="utf-8")
    return png, csv


def render_expansion(report: ExpansionReport, directory: str | Path, stem: str = "expansion"):
    """Bar chart of degree terms with the cumulative sum overlaid."""
    degrees = list(range(1, len(report.degree_terms) + 1))
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(degrees, report.degree_terms, color="#4878b0", label="degree term")
    ax.plot(degrees, report.cumulative_a, "o-", color="#d1605e", label="cumulative")
    ax.axhline(report.true_entropy, color="0.4", linestyle="--", label="joint entropy")
    ax.set_xlabel("interaction degree m")
    ax.set_ylabel(f"contribution ({report.units})")
    ax.set_xticks(degrees)
    ax.legend(frameon=False)
    fig.tight_layout()
    return _write(fig, directory, stem, expansion_table(report))


def render_convergence(
    profile: Sequence[tuple[int, float]],
    units: str,
    directory: str | Path,
    stem: str = "convergence",
):
    """Truncation divergence against order, dropping to zero at full order."""
    orders = [m for m, _ in profile]
    values = [d for _, d in profile]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(orders, values, "o-", color="#4878b0")
    ax.set_xlabel("truncation order m")
    ax.set_ylabel(f"divergence ({units})")
    ax.set_xticks(orders)
    ax.set_ylim(bottom=0)
    fig.tight_layout()
    return _write(fig, directory, stem, convergence_table(profile))


def render_profile(profile: InfoProfile, directory: str | Path, stem: str = "profile"):
    """Per-subset values grouped by subset size."""
    items = sorted(profile.values.items(), key=lambda kv: (bin(kv[0]).count("1"), kv[0]))
    labels = ["{" + ",".join(map(str, indices_of(mask))) + "}" for mask, _ in items]
    values = [v for _, v in items]
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(items)), 4))
    ax.bar(range(len(items)), values, color="#4878b0")
    ax.set_xticks(range(len(items)))
    ax.set_xticklabels(labels, rotation=60, ha="right", fontsize=8)
    ax.axhline(0.0, color="0.4", linewidth=0.8)
    ax.set_ylabel(f"{profile.kind} ({profile.units})")
    fig.tight_layout()
    return _write(fig, directory, stem, profile_table(profile))


def render_contributions(report: DualPathReport, directory: str | Path, stem: str = "graphdist"):
    """Edge-weight comparison between the two graphs under measure."""
    pairs = [f"{i}-{j}" for i, j, _, _, _ in report.contributions]
    w_r = [wr for _, _, wr, _, _ in report.contributions]
    w_s = [ws for _, _, _, ws, _ in report.contributions]
    x = range(len(pairs))
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(pairs)), 4))
    ax.bar([i - 0.2 for i in x], w_r, width=0.4, color="#4878b0", label="graph R")
    ax.bar([i + 0.2 for i in x], w_s, width=0.4, color="#d1605e", label="graph S")
    ax.set_xticks(list(x))
    ax.set_xticklabels(pairs)
    ax.set_xlabel("variable pair")
    ax.set_ylabel("mutual information (bits)")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _write(fig, directory, stem, contributions_table(report))
