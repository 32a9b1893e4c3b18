"""Standalone invariant battery behind the `hbq check` subcommand.

Quick, self-contained health checks of the numerical core: transform
identities, derivative exactness, integrator order, conservation of the
zero mode, solitary-wave exactness, and the convergence-rate formula
against the reference tables.  Each check returns (name, passed, detail).
"""

from __future__ import annotations

import math

import numpy as np

from .diagnostics import convergence_orders, linf_error
from .integrator import TimeGrid, evolve, rk4_update
from .model import HbqParams, dispersion_symbol
from .spectral import antiderivative, derivative, forward_dft, inverse_dft, make_grid
from .waves import initial_state, solitary_wave, traveling_ode_residual

# reference convergence tables: (resolution, error, printed order)
REFERENCE_TIME_TABLE = [
    (2, 8.662e-3, None),
    (5, 2.530e-4, 3.8561),
    (10, 1.614e-5, 3.9704),
    (50, 2.623e-8, 3.9903),
    (100, 1.637e-9, 4.0021),
]
REFERENCE_SPACE_TABLE = [
    (10, 2.11e-2, None),
    (50, 1.747e-3, 1.5480),
    (100, 4.431e-7, 11.9450),
    (150, 6.500e-10, 16.0916),
    (200, 3.884e-13, 25.8017),
]


def check_roundtrip() -> tuple[str, bool, str]:
    rng = np.random.default_rng(7)
    f = rng.standard_normal(256)
    err = linf_error(inverse_dft(forward_dft(f)), f)
    tol = 1e-11 * np.max(np.abs(f))
    return "dft_roundtrip", err <= tol, f"max err {err:.2e} (tol {tol:.2e})"


def check_parseval() -> tuple[str, bool, str]:
    rng = np.random.default_rng(11)
    grid = make_grid(3.0, 128)
    f = rng.standard_normal(grid.N)
    physical = np.sum(f ** 2) * grid.dx
    spectral = 2.0 * grid.L * np.sum(np.abs(forward_dft(f)) ** 2)
    rel = abs(physical - spectral) / abs(physical)
    return "parseval", rel <= 1e-10, f"relative gap {rel:.2e}"


def check_derivative_exactness() -> tuple[str, bool, str]:
    grid = make_grid(np.pi, 64)
    f = np.sin(3 * grid.x) + 0.5 * np.cos(7 * grid.x)
    exact = 3 * np.cos(3 * grid.x) - 3.5 * np.sin(7 * grid.x)
    err = linf_error(derivative(f, grid, 1), exact)
    return "derivative_exactness", err <= 1e-10, f"max err {err:.2e}"


def check_antiderivative_inverse() -> tuple[str, bool, str]:
    grid = make_grid(2.0, 96)
    f = np.sin(np.pi * grid.x / grid.L) + np.cos(3 * np.pi * grid.x / grid.L)
    err = linf_error(derivative(antiderivative(f, grid), grid, 1), f)
    return "antiderivative_inverse", err <= 1e-10, f"max err {err:.2e}"


def check_rk4_order() -> tuple[str, bool, str]:
    # scalar linear decay y' = -y over one unit of time
    decay = lambda t, y: -y
    errors = []
    for steps in (8, 16, 32, 64):
        y = 1.0
        dt = 1.0 / steps
        for i in range(steps):
            y = rk4_update(decay, i * dt, y, dt)
        errors.append(abs(y - math.exp(-1.0)))
    orders = [math.log(e1 / e2) / math.log(2.0)
              for e1, e2 in zip(errors, errors[1:])]
    ok = all(3.9 <= o <= 4.1 for o in orders)
    return "rk4_scalar_order", ok, f"orders {[f'{o:.3f}' for o in orders]}"


def check_zero_mode_conservation() -> tuple[str, bool, str]:
    params = HbqParams()
    grid = make_grid(100.0, 128)
    st = initial_state(solitary_wave(params), grid)
    traj = evolve(st, grid, params, TimeGrid(1.0, 50), sample_stride=10)
    means = [float(np.mean(s.v)) for s in traj.samples]
    drift = max(abs(m - means[0]) for m in means)
    return "zero_mode_conservation", drift <= 1e-12, f"mean(v) drift {drift:.2e}"


def check_symbol() -> tuple[str, bool, str]:
    grid = make_grid(np.pi, 16)
    sig = dispersion_symbol(grid, HbqParams(eta1=1.0, eta2=1.0))
    ok = sig[0] == 0.0 and abs(sig[1] - 1.0 / 3.0) < 1e-14 and np.all(sig >= 0)
    return "dispersion_symbol", bool(ok), f"sigma(0)={sig[0]}, sigma(1)={sig[1]:.6f}"


def check_solitary_residuals() -> tuple[str, bool, str]:
    grid = make_grid(100.0, 512)
    worst = 0.0
    for p in (2, 3, 4, 5):
        wave = solitary_wave(HbqParams(p=p))
        worst = max(worst, traveling_ode_residual(wave, grid))
    return "solitary_ode_residual", worst < 1e-10, f"max residual {worst:.2e}"


def check_convergence_formula() -> tuple[str, bool, str]:
    worst = 0.0
    for table in (REFERENCE_TIME_TABLE, REFERENCE_SPACE_TABLE):
        orders = convergence_orders([(r, e) for r, e, _ in table])
        for (_, _, printed), computed in zip(table, orders):
            if printed is not None:
                worst = max(worst, abs(computed - printed))
    return "convergence_rate_formula", worst <= 0.05, f"max deviation {worst:.4f}"


ALL_CHECKS = [
    check_roundtrip,
    check_parseval,
    check_derivative_exactness,
    check_antiderivative_inverse,
    check_rk4_order,
    check_zero_mode_conservation,
    check_symbol,
    check_solitary_residuals,
    check_convergence_formula,
]


def run_all_checks(verbose: bool = True) -> bool:
    """Run every check, print one PASS/FAIL line each, return overall result."""
    all_ok = True
    for check in ALL_CHECKS:
        name, ok, detail = check()
        all_ok &= ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
