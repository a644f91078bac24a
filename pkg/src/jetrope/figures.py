"""
Figure rendering for suite reports
==================================

One PNG per suite, rendered from the same rows that feed the CSV.  The
CSV remains the interchange format; figures are a reading aid and can be
switched off (``figures = false`` in the config, or ``--no-figures``).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .config import SuiteConfig

FIGSIZE = (9.0, 4.5)
DPI = 150
# Strip the default Software tag so PNG bytes depend only on the data.
_SAVE_KW = dict(dpi=DPI, metadata={"Software": None})


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def _grouped_bars(ax, group_labels, series, log=True):
    width = 0.8 / max(len(series), 1)
    x = np.arange(len(group_labels))
    for index, (name, values) in enumerate(series):
        ax.bar(x + index * width, values, width=width, label=name)
    ax.set_xticks(x + 0.4 - width / 2)
    ax.set_xticklabels(group_labels, rotation=20, ha="right", fontsize=8)
    if log:
        ax.set_yscale("log")
    ax.legend(fontsize=7, ncols=2)


def render_fit_suite(config: SuiteConfig, rows, out_dir: Path) -> Path:
    """Grouped eval-MSE bars (log scale), one group per target."""
    targets = sorted({row["target"] for row in rows})
    methods = sorted({row["method"] for row in rows})
    table = {(r["method"], r["target"]): float.fromhex(r["eval_mse_hex"])
             for r in rows}
    floor = 1e-16  # keep exactly-fit targets visible on the log axis
    series = [(m, [max(table[(m, t)], floor) for t in targets]) for m in methods]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    _grouped_bars(ax, targets, series)
    ax.set_ylabel("eval MSE (log)")
    ax.set_title(f"{config.suite}: readout error over the full lag grid")
    return _save(fig, out_dir / f"{config.suite}.png")


def render_laws(config: SuiteConfig, rows, out_dir: Path) -> Path:
    """Worst observed value per check against its tolerance."""
    from .suites import LAW_TOLERANCES

    names = [r["check"] for r in rows]
    worst = [max(float.fromhex(r["worst_hex"]), 1e-18) for r in rows]
    tol = [LAW_TOLERANCES[n] for n in names]
    y = np.arange(len(names))
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.barh(y, worst, height=0.6, label="worst observed")
    ax.scatter(tol, y, marker="|", s=200, color="black", label="tolerance")
    ax.set_yticks(y)
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("magnitude (log)")
    ax.set_title("laws: identity checks (threshold markers; see CSV for "
                 "pass direction)")
    ax.legend(fontsize=8)
    return _save(fig, out_dir / "laws.png")


def render_norms(config: SuiteConfig, positions, query_ratio, key_ratio,
                 out_dir: Path) -> Path:
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.semilogy(positions, key_ratio, label="key-side |A(t) e|")
    ax.semilogy(positions, query_ratio, label="query-side |A(t)^-T e|")
    ax.set_xlabel("position")
    ax.set_ylabel("norm ratio vs position 0 (log)")
    ax.set_title(f"norms: contragredient rescaling, {config.norms_variant} "
                 f"order-{config.norms_order}")
    ax.legend(fontsize=8)
    return _save(fig, out_dir / "norms.png")


def render_taskgen(config: SuiteConfig, rows, out_dir: Path) -> Path:
    labels = [f"{r['kernel']}\nT={r['length']}" for r in rows]
    fractions = [float.fromhex(r["positive_fraction_hex"]) for r in rows]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.bar(np.arange(len(labels)), fractions, width=0.6)
    ax.axhline(0.5, color="black", linewidth=0.8, linestyle="--")
    ax.set_xticks(np.arange(len(labels)))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("positive-label fraction")
    ax.set_title("taskgen: label balance per exported dataset")
    return _save(fig, out_dir / "taskgen.png")
