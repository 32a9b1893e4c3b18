"""Shared fixtures: synthetic result directories and real preset output."""

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

CONVENTIONS = {"transform_normalization": "1/N on the forward transform",
               "antiderivative_zero_mode": 0.0}


def write_table(directory, name, columns, rows):
    with open(directory / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)


def write_manifest(directory, conventions=True):
    payload = {"version": "test"}
    if conventions:
        payload["conventions"] = CONVENTIONS
    with open(directory / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


@pytest.fixture
def synthetic_dir(tmp_path):
    """A directory holding small hand-made versions of every input table."""
    d = tmp_path / "results"
    d.mkdir()
    write_manifest(d)

    rows = [(p, N, 10 ** -(i + p)) for p in (2, 3) for i, N in enumerate((64, 128, 256))]
    write_table(d, "nonlinearity_sweep", ["p", "N", "linf_error"], rows)

    x = np.linspace(-50, 50, 41)
    prof = []
    for e2, p in [(0.0, 0), (10.0, 2), (5.0, 2), (1.0, 2), (0.1, 2)]:
        u = (0.9 - 0.01 * e2) / np.cosh(0.3 * (x - 6.0)) ** 2
        prof.extend((e2, p, xi, ui) for xi, ui in zip(x, u))
    write_table(d, "ibq_limit_profiles", ["eta2", "p", "x", "u"], prof)

    for tag in ("eta1", "eta2"):
        surf = [(xi, ti, np.sin(0.1 * xi) * np.cos(0.2 * ti))
                for ti in np.linspace(0, 10, 6) for xi in np.linspace(-50, 50, 21)]
        write_table(d, f"collision_surface_{tag}", ["x", "t", "u"], surf)

    for case in ("quadratic", "cubic"):
        trace = [(N, 10 * N, t, 4 * np.exp(t * (N / 64.0)))
                 for N in (64, 128) for t in np.linspace(0, 3, 40)]
        write_table(d, f"blowup_trace_{case}", ["N", "M", "t", "max_abs_u"], trace)

    profile = [(t, xi, (1 + t) / np.cosh(xi) ** 2)
               for t in (3.710, 3.711, 3.712) for xi in np.linspace(-10, 10, 31)]
    write_table(d, "blowup_profile", ["t", "x", "u"], profile)

    write_table(d, "blowup_eta2_sweep", ["case", "eta2", "t_blowup"],
                [("quadratic", e2, 2.0 + e2) for e2 in (0.1, 0.5, 1.0)]
                + [("cubic", e2, 0.2 + 0.1 * e2) for e2 in (0.1, 0.5, 1.0)])
    write_table(d, "blowup_p_sweep", ["family", "p", "t_blowup"],
                [("quadratic", p, 4.0 / p) for p in (2, 4, 6)]
                + [("cubic", p, 1.0 / p) for p in (3, 5)])
    return d


def run_hbq(*args) -> None:
    """Invoke the solver CLI: the only interface this package relies on."""
    cmd = [sys.executable, "-m", "hbq.cli", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"hbq {' '.join(args)} failed:\n{proc.stderr}")


@pytest.fixture(scope="session")
def preset_dir(tmp_path_factory):
    """Real preset output for every figure, produced through the hbq CLI."""
    pytest.importorskip("hbq", reason="solver package not installed")
    d = tmp_path_factory.mktemp("presets")
    for preset in ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"):
        run_hbq(preset, "--out-dir", str(d), "--jobs", "2")
    return d
