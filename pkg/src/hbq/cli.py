"""Command-line entry point: run experiments, serialize results.

Layout of an output directory after a run:

    <out-dir>/<scenario>.csv            primary result table
    <out-dir>/<aux>.csv                 auxiliary tables (surfaces, traces)
    <out-dir>/<scenario>_manifest.json  manifest of that run
    <out-dir>/manifest.json             directory manifest, merged across runs

CSV cells hold 17-significant-digit decimal floats, so parsing a file back
recovers the in-memory values bit for bit.  Every manifest carries the
conventions block (transform normalization, antiderivative zero mode,
blow-up threshold, ...) that downstream consumers are expected to verify.

Exit codes: 0 success, 1 configuration error, 2 numerical failure other
than an expected blow-up.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import inspect
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, checks
from .diagnostics import diagnostics_record, linf_error
from .experiments import (BLOWUP_CASES, CONVENTIONS, ExperimentConfig,
                          ResultSet, SCENARIOS, blowup_initial_state,
                          blowup_params, run)
from .integrator import TimeGrid, evolve
from .model import HbqParams, State
from .spectral import NonZeroMeanError, SymmetryError, make_grid
from .waves import ibq_initial_state, initial_state, solitary_wave

PRESETS = {
    "table1": "time_convergence",
    "table2": "space_convergence",
    "table3": "ibq_limit",
    "fig1": "nonlinearity_sweep",
    "fig2": "ibq_limit",
    "fig3": "collision",
    "fig4": "blowup_refinement",
    "fig5": "blowup_profile",
    "fig6": "blowup_eta2_sweep",
    "fig7": "blowup_p_sweep",
}

_LIST_KEYS = {"M_values", "N_values", "p_values", "eta2_values", "eta_values",
              "cases", "snapshot_times", "centers", "ladder"}


@dataclass
class RunManifest:
    """What a run produced and under which conventions."""

    scenario: str
    config: dict
    outputs: list[str]
    runtime_seconds: float
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))
    version: str = __version__
    empty: bool = False

    def to_dict(self) -> dict:
        return {"scenario": self.scenario, "version": self.version,
                "config": self.config, "outputs": self.outputs,
                "runtime_seconds": self.runtime_seconds,
                "conventions": self.conventions, "empty": self.empty}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _write_csv(path: Path, columns: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_resultset(rs: ResultSet, out_dir: str | Path) -> RunManifest:
    """Serialize a result set (and its aux tables) under out_dir.

    Returns the run manifest, which is also written both as
    <scenario>_manifest.json and merged into the directory-level
    manifest.json.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = []
    for table in [rs] + rs.aux:
        path = out / f"{table.scenario}.csv"
        _write_csv(path, table.columns, table.rows)
        outputs.append(path.name)

    manifest = RunManifest(
        scenario=rs.scenario,
        config=_json_safe({k: v for k, v in rs.metadata.items()
                           if k not in ("conventions",)}),
        outputs=outputs,
        runtime_seconds=float(rs.metadata.get("runtime_seconds", 0.0)),
        empty=not rs.rows,
    )
    with open(out / f"{rs.scenario}_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2)

    dir_manifest_path = out / "manifest.json"
    dir_manifest = {"version": __version__, "conventions": dict(CONVENTIONS),
                    "runs": {}}
    if dir_manifest_path.exists():
        try:
            with open(dir_manifest_path, encoding="utf-8") as fh:
                previous = json.load(fh)
            dir_manifest["runs"] = previous.get("runs", {})
        except (OSError, json.JSONDecodeError):
            pass
    dir_manifest["runs"][rs.scenario] = manifest.to_dict()
    with open(dir_manifest_path, "w", encoding="utf-8") as fh:
        json.dump(dir_manifest, fh, indent=2)
    return manifest


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here reserves 2 for
    numerical failures, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out-dir", default=None,
                     help="output directory (default $HBQ_OUT_DIR or ./hbq-out)")
    sub.add_argument("--jobs", type=int, default=1,
                     help="parallel simulations within a sweep")
    sub.add_argument("--N", type=int, default=None)
    sub.add_argument("--M", type=int, default=None)
    sub.add_argument("--T", type=float, default=None)
    sub.add_argument("--L", type=float, default=None)
    sub.add_argument("--eta1", type=float, default=None)
    sub.add_argument("--eta2", type=float, default=None)
    sub.add_argument("--p", type=int, default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="hbq",
                     description="higher-order Boussinesq experiments")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    for name in PRESETS:
        sub = subs.add_parser(name, help=f"preset run: {PRESETS[name]}")
        _add_common(sub)

    sim = subs.add_parser("simulate", help="single run with chosen initial data")
    _add_common(sim)
    sim.add_argument("--initial", default="solitary",
                     choices=["zero", "solitary", "ibq",
                              "blowup-quadratic", "blowup-cubic"])
    sim.add_argument("--sign", type=int, default=1, choices=[1, -1])
    sim.add_argument("--amplitude", type=float, default=0.9,
                     help="amplitude of the ibq initial wave")
    sim.add_argument("--stride", type=int, default=None,
                     help="steps between diagnostic samples")

    sweep = subs.add_parser("sweep", help="config-file driven run")
    sweep.add_argument("--config", required=True, help="INI config file")
    sweep.add_argument("--out-dir", default=None)

    subs.add_parser("check", help="run the standalone invariant suite")
    return parser


def _out_dir(args) -> Path:
    if getattr(args, "out_dir", None):
        return Path(args.out_dir)
    return Path(os.environ.get("HBQ_OUT_DIR", "hbq-out"))


def _coerce(raw: str):
    raw = raw.strip()
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    return raw


def _coerce_value(key: str, raw: str):
    if ":" in raw:  # ladder syntax: "64:500, 128:1000"
        return tuple(tuple(_coerce(part) for part in item.split(":"))
                     for item in raw.split(","))
    if "," in raw or key in _LIST_KEYS:
        return tuple(_coerce(item) for item in raw.split(",") if item.strip())
    return _coerce(raw)


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an ExperimentConfig from an INI file.

    Sections: [experiment] scenario/jobs, [model] eta1/eta2/p/sign,
    [numerics] N/M/T/L, [options] anything the scenario runner accepts
    (comma-separated values become tuples; 'N:M' pairs become ladders).
    """
    ini = configparser.ConfigParser()
    if not Path(path).exists():
        raise FileNotFoundError(f"config file not found: {path}")
    ini.read(path)
    try:
        scenario = ini.get("experiment", "scenario")
    except (configparser.NoSectionError, configparser.NoOptionError):
        raise ValueError("config must set scenario under [experiment]") from None
    cfg = ExperimentConfig(scenario=scenario)
    cfg.jobs = ini.getint("experiment", "jobs", fallback=1)
    for key in ("eta1", "eta2"):
        if ini.has_option("model", key):
            setattr(cfg, key, ini.getfloat("model", key))
    for key in ("p", "sign"):
        if ini.has_option("model", key):
            setattr(cfg, key, ini.getint("model", key))
    if ini.has_section("numerics"):
        for key in ("N", "M"):
            if ini.has_option("numerics", key):
                setattr(cfg, key, ini.getint("numerics", key))
        for key in ("T", "L"):
            if ini.has_option("numerics", key):
                setattr(cfg, key, ini.getfloat("numerics", key))
    if ini.has_section("options"):
        for key, raw in ini.items("options"):
            cfg.options[key] = _coerce_value(key, raw)
    return cfg


# ---------------------------------------------------------------------------
# commands

def _cmd_preset(args, name: str) -> int:
    scenario = PRESETS[name]
    cfg = ExperimentConfig(scenario=scenario, jobs=args.jobs)
    accepted = inspect.signature(SCENARIOS[scenario]).parameters
    for key in ("eta1", "eta2", "p", "L", "N", "M", "T"):
        value = getattr(args, key)
        if value is None:
            continue
        if key in accepted:
            setattr(cfg, key, value)
        else:
            print(f"note: --{key} is not used by {scenario}", file=sys.stderr)
    rs = run(cfg)
    write_resultset(rs, _out_dir(args))
    print(f"{rs.scenario}: {len(rs.rows)} rows -> {_out_dir(args)}")
    return 0


def _simulate_initial(args, grid, params) -> tuple[State, object, bool]:
    """Initial state, optional exact-solution callable, expect-blowup flag."""
    kind = args.initial
    if kind == "zero":
        return State(u=np.zeros(grid.N), v=np.zeros(grid.N)), None, False
    if kind == "solitary":
        wave = solitary_wave(params)
        return initial_state(wave, grid), lambda t: wave.profile(grid.x, t), False
    if kind == "ibq":
        return ibq_initial_state(args.amplitude, grid), None, False
    data = BLOWUP_CASES[kind.removeprefix("blowup-")]
    return blowup_initial_state(data, grid), None, True


def _cmd_simulate(args) -> int:
    blowup_kind = args.initial.removeprefix("blowup-")
    is_blowup = blowup_kind != args.initial
    L = args.L if args.L is not None else (10.0 if is_blowup else 100.0)
    N = args.N if args.N is not None else 512
    T = args.T if args.T is not None else (
        BLOWUP_CASES[blowup_kind].horizon if is_blowup else 5.0)
    M = args.M if args.M is not None else 1000
    params = HbqParams(eta1=args.eta1 if args.eta1 is not None else 1.0,
                       eta2=args.eta2 if args.eta2 is not None else 1.0,
                       p=args.p if args.p is not None else 2,
                       sign=args.sign)
    grid = make_grid(L, N)
    state0, exact, expect_blowup = _simulate_initial(args, grid, params)
    stride = args.stride if args.stride is not None else max(1, M // 50)

    t0 = time.perf_counter()
    traj = evolve(state0, grid, params, TimeGrid(T, M), sample_stride=stride)
    runtime = time.perf_counter() - t0

    snap_rows, diag_rows = [], []
    for s in traj.samples:
        if s.is_finite():
            rec = diagnostics_record(s, grid, params,
                                     exact=None if exact is None else exact(s.t))
            diag_rows.append((rec.t, rec.linf_u, rec.amplitude, rec.I1, rec.I2,
                              rec.I3, rec.blowup_flag, rec.linf_error))
        snap_rows.extend((s.t, x, u, v) for x, u, v in zip(grid.x, s.u, s.v))

    rs = ResultSet("simulate", ["t", "x", "u", "v"], snap_rows,
                   {"conventions": dict(CONVENTIONS), "runtime_seconds": runtime,
                    "initial": args.initial, "N": N, "M": M, "T": T, "L": L,
                    "eta1": params.eta1, "eta2": params.eta2, "p": params.p,
                    "sign": params.sign, "blowup": traj.blowup},
                   aux=[ResultSet("simulate_diagnostics",
                                  ["t", "linf_u", "amplitude", "I1", "I2", "I3",
                                   "blowup_flag", "linf_error"], diag_rows)])
    write_resultset(rs, _out_dir(args))
    if traj.blowup and not expect_blowup:
        print(f"unexpected blow-up at t={traj.final.t:.6g}", file=sys.stderr)
        return 2
    print(f"simulate: reached t={traj.final.t:.6g}"
          f"{' (blow-up)' if traj.blowup else ''} -> {_out_dir(args)}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    rs = run(cfg)
    write_resultset(rs, _out_dir(args))
    print(f"{rs.scenario}: {len(rs.rows)} rows -> {_out_dir(args)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check":
            return 0 if checks.run_all_checks() else 2
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_preset(args, args.command)
    except (SymmetryError, NonZeroMeanError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
