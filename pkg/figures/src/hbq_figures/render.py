"""Render publication-style figures from hbq result directories.

Consumes only the serialized interface of the solver package: the CSV
tables plus the manifest.json conventions block that every run directory
carries.  There is no in-process coupling to the solver.

    hbq-render --fig fig3 --in results/ --out fig3.png

Figure ids and their input tables:

    fig1  nonlinearity_sweep.csv       error decay vs N per power (log errors)
    fig2  ibq_limit_profiles.csv       profile overlays vs the exact wave
    fig3  collision_surface_eta*.csv   space-time surfaces of the collisions
    fig4  blowup_trace_*.csv           max|u| near blow-up per resolution
    fig5  blowup_profile.csv           profiles at the snapshot times
    fig6  blowup_eta2_sweep.csv        blow-up time vs eta2
    fig7  blowup_p_sweep.csv           blow-up time vs nonlinearity power

Rendering is deterministic: style is pinned via rcParams and PNG output
carries no timestamps, so identical inputs give byte-identical images.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "lines.linewidth": 1.2,
    "figure.constrained_layout.use": True,
}


class RenderError(RuntimeError):
    """Missing manifest, missing table, or malformed input data."""


@dataclass
class FigureJob:
    """One figure to render from one result directory."""

    figure: str
    in_dir: Path
    out_path: Path
    options: dict = field(default_factory=dict)


def load_manifest(in_dir: Path) -> dict:
    path = Path(in_dir) / "manifest.json"
    if not path.exists():
        raise RenderError(f"no manifest.json in {in_dir}; refusing unlabeled data")
    with open(path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    if "conventions" not in manifest:
        raise RenderError(f"{path} has no conventions block; refusing")
    return manifest


def load_table(in_dir: Path, name: str, columns: list[str]) -> dict[str, np.ndarray]:
    """Read named columns of <in_dir>/<name>.csv into arrays.

    Numeric columns become float arrays (empty cells -> nan); anything else
    stays an object array of strings.
    """
    path = Path(in_dir) / f"{name}.csv"
    if not path.exists():
        raise RenderError(f"required table {path.name} not found in {in_dir}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    if not rows:
        raise RenderError(f"{path.name} has a header but no data rows")
    missing = [c for c in columns if c not in header]
    if missing:
        raise RenderError(f"{path.name} lacks columns {missing} (has {header})")
    out: dict[str, np.ndarray] = {}
    for name_ in columns:
        idx = header.index(name_)
        raw = [r[idx] for r in rows]
        try:
            out[name_] = np.array([float(v) if v else np.nan for v in raw])
        except ValueError:
            out[name_] = np.array(raw, dtype=object)
    return out


# ---------------------------------------------------------------------------
# individual figures

def _fig1(job: FigureJob):
    data = load_table(job.in_dir, "nonlinearity_sweep", ["p", "N", "linf_error"])
    fig, ax = plt.subplots(figsize=(5.3, 3.6))
    for p in np.unique(data["p"]):
        sel = data["p"] == p
        order = np.argsort(data["N"][sel])
        ax.semilogy(data["N"][sel][order], data["linf_error"][sel][order],
                    marker="o", label=f"p = {int(p)}")
    ax.set_xlabel("N")
    ax.set_ylabel("max error")
    ax.set_title("error decay with spatial resolution")
    ax.legend()
    return fig


def _fig2(job: FigureJob):
    data = load_table(job.in_dir, "ibq_limit_profiles", ["eta2", "p", "x", "u"])
    exact = (data["eta2"] == 0.0) & (data["p"] == 0)
    if not exact.any():
        raise RenderError("ibq_limit_profiles.csv carries no exact reference rows")
    panel_eta2 = job.options.get("panels", (10.0, 5.0, 1.0, 0.1))
    p_shown = job.options.get("p", 2)
    fig, axes = plt.subplots(2, 2, figsize=(7.0, 5.0), sharex=True, sharey=True)
    for ax, e2 in zip(axes.ravel(), panel_eta2):
        ax.plot(data["x"][exact], data["u"][exact], "k-", label="reference wave")
        sel = (data["eta2"] == e2) & (data["p"] == p_shown)
        if not sel.any():
            raise RenderError(f"no profile rows for eta2={e2}, p={p_shown}")
        ax.plot(data["x"][sel], data["u"][sel], "r--", label=f"eta2 = {e2:g}")
        ax.set_xlim(-30, 30)
        ax.legend()
    for ax in axes[1]:
        ax.set_xlabel("x")
    for ax in axes[:, 0]:
        ax.set_ylabel("u")
    return fig


def _fig3(job: FigureJob):
    cases = job.options.get("cases", ("eta1", "eta2"))
    fig = plt.figure(figsize=(9.0, 4.0))
    for i, tag in enumerate(cases, start=1):
        data = load_table(job.in_dir, f"collision_surface_{tag}", ["x", "t", "u"])
        xs, ts = np.unique(data["x"]), np.unique(data["t"])
        U = np.full((len(ts), len(xs)), np.nan)
        xi = np.searchsorted(xs, data["x"])
        ti = np.searchsorted(ts, data["t"])
        U[ti, xi] = data["u"]
        ax = fig.add_subplot(1, len(cases), i, projection="3d")
        X, T = np.meshgrid(xs, ts)
        ax.plot_surface(X, T, U, cmap="viridis", rstride=1, cstride=4,
                        linewidth=0, antialiased=False)
        ax.set_xlabel("x")
        ax.set_ylabel("t")
        ax.set_zlabel("u")
        ax.set_title(f"head-on collision ({tag})")
    return fig


def _fig4(job: FigureJob):
    cases = job.options.get("cases", ("quadratic", "cubic"))
    fig, axes = plt.subplots(1, len(cases), figsize=(8.4, 3.4))
    axes = np.atleast_1d(axes)
    for ax, case in zip(axes, cases):
        data = load_table(job.in_dir, f"blowup_trace_{case}",
                          ["N", "M", "t", "max_abs_u"])
        for N in np.unique(data["N"]):
            sel = data["N"] == N
            M = int(data["M"][sel][0])
            ax.plot(data["t"][sel], data["max_abs_u"][sel],
                    label=f"N={int(N)}, M={M}")
        tmax = data["t"].max()
        ax.set_xlim(0.9 * tmax, 1.002 * tmax)
        ax.set_yscale("log")
        ax.set_xlabel("t")
        ax.set_ylabel("max |u|")
        ax.set_title(f"{case} nonlinearity")
        ax.legend(loc="upper left")
    return fig


def _fig5(job: FigureJob):
    data = load_table(job.in_dir, "blowup_profile", ["t", "x", "u"])
    fig, ax = plt.subplots(figsize=(5.3, 3.6))
    for t in np.unique(data["t"]):
        sel = data["t"] == t
        ax.plot(data["x"][sel], data["u"][sel], label=f"t = {t:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title("profiles approaching blow-up")
    ax.legend()
    return fig


def _sweep_figure(job: FigureJob, table: str, xcol: str, group: str):
    data = load_table(job.in_dir, table, [group, xcol, "t_blowup"])
    fig, ax = plt.subplots(figsize=(5.3, 3.6))
    for key in sorted(set(data[group])):
        sel = data[group] == key
        order = np.argsort(data[xcol][sel])
        ax.plot(data[xcol][sel][order], data["t_blowup"][sel][order],
                marker="o", label=str(key))
    ax.set_xlabel(xcol)
    ax.set_ylabel("blow-up time")
    ax.legend()
    return fig


def _fig6(job: FigureJob):
    fig = _sweep_figure(job, "blowup_eta2_sweep", "eta2", "case")
    fig.axes[0].set_title("blow-up time vs extra dispersion")
    return fig


def _fig7(job: FigureJob):
    fig = _sweep_figure(job, "blowup_p_sweep", "p", "family")
    fig.axes[0].set_title("blow-up time vs nonlinearity power")
    return fig


FIGURES = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig5": _fig5,
    "fig6": _fig6,
    "fig7": _fig7,
}


def render(job: FigureJob) -> Path:
    """Render one figure job to its output path; returns the path."""
    if job.figure not in FIGURES:
        raise RenderError(f"unknown figure id {job.figure!r}; "
                          f"choose from {sorted(FIGURES)}")
    load_manifest(job.in_dir)  # refuse inputs without a conventions block
    with plt.rc_context(STYLE):
        fig = FIGURES[job.figure](job)
        try:
            out = Path(job.out_path)
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out)
        finally:
            plt.close(fig)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hbq-render", description="render figures from hbq result CSVs")
    parser.add_argument("--fig", required=True, choices=sorted(FIGURES),
                        help="figure id")
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory with CSV tables and manifest.json")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        path = render(FigureJob(figure=args.fig, in_dir=Path(args.in_dir),
                                out_path=Path(args.out)))
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
