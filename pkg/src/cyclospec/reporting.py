"""Deterministic CSV emission, metadata sidecars and rendered figures.

Every run writes three files next to each other: the delimited data, a
key-value sidecar from which the run can be regenerated, and a PNG rendering
of the same data.  CSV floats are fixed at 12 significant digits so repeated
runs are byte-identical.
"""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .presets import Dataset


def fmt(value) -> str:
    return format(float(value), ".12g")


def sidecar_path(out: Path) -> Path:
    return out.with_suffix(".meta.txt")


def figure_path(out: Path) -> Path:
    return out.with_suffix(".png")


def write_csv(path: Path, header: list[str], columns: list) -> None:
    """Write columns (numeric arrays or string lists) as CSV with a header."""
    if all(isinstance(col, np.ndarray) for col in columns):
        data = np.column_stack([np.asarray(col, dtype=float) for col in columns])
        buf = io.StringIO()
        np.savetxt(buf, data, fmt="%.12g", delimiter=",", newline="\n")
        text = ",".join(header) + "\n" + buf.getvalue()
    else:
        lines = [",".join(header)]
        for i in range(len(columns[0])):
            cells = [col[i] if isinstance(col[i], str) else fmt(col[i])
                     for col in columns]
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    path.write_text(text, encoding="utf-8", newline="\n")


def write_sidecar(path: Path, version: str, info: dict[str, str],
                  entries: dict[str, str]) -> None:
    """Key-value sidecar: informational comments plus a re-runnable config."""
    lines = [f"# cyclospec version = {version}"]
    for key, value in info.items():
        lines.append(f"# {key} = {value}")
    lines.append("#")
    for key, value in entries.items():
        lines.append(f"{key} = {value}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_dataset_csv(path: Path, dataset: Dataset) -> None:
    header = [dataset.x_name] + [label for label, _ in dataset.series]
    columns = [dataset.x] + [values for _, values in dataset.series]
    write_csv(path, header, columns)


# ------------------------------------------------------------------ figures

def render_dataset(dataset: Dataset, path: Path) -> None:
    """Render one dataset to PNG; layout depends on the dataset kind."""
    if dataset.kind == "populations":
        _render_populations(dataset, path)
    elif dataset.kind == "spectrum":
        _render_spectrum(dataset, path)
    elif dataset.kind == "sweep":
        _render_sweep(dataset, path)
    else:
        raise ValueError(f"no renderer for dataset kind {dataset.kind!r}")


def _render_populations(dataset: Dataset, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    for label, values in dataset.series:
        ax.plot(dataset.x, values, lw=1.2, label=label)
    ax.set_xlabel(r"$\Gamma t$")
    ax.set_ylabel("population")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_spectrum(dataset: Dataset, path: Path) -> None:
    x = dataset.x
    wide = (x[-1] - x[0]) > 200
    n_axes = 2 if wide else 1
    fig, axes = plt.subplots(n_axes, 1, figsize=(6.0, 3.2 * n_axes))
    axes = np.atleast_1d(axes)
    for label, values in dataset.series:
        axes[0].plot(x, values, lw=0.9, label=label)
    axes[0].set_xlabel(r"$\delta_k\,/\,\Gamma$")
    axes[0].set_ylabel(r"$S\,\Gamma$")
    axes[0].legend(fontsize=8)
    if wide:
        mask = np.abs(x) <= 15
        for label, values in dataset.series:
            axes[1].plot(x[mask], values[mask], lw=0.9, label=label)
        axes[1].set_xlabel(r"$\delta_k\,/\,\Gamma$  (centre line region)")
        axes[1].set_ylabel(r"$S\,\Gamma$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_sweep(dataset: Dataset, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    for label, values in dataset.series:
        ax.plot(dataset.x, values, lw=1.2, label=label)
    ax.set_xlabel(r"$\Phi$")
    ax.set_ylabel(r"$S\,\Gamma$")
    ax.set_xticks([0, np.pi / 2, np.pi, 3 * np.pi / 2, 2 * np.pi])
    ax.set_xticklabels(["0", r"$\pi/2$", r"$\pi$", r"$3\pi/2$", r"$2\pi$"])
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
