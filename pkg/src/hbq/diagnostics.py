"""Error norms, convergence rates, conserved integrals and blow-up detection.

The three conserved integrals of the model are stated for the potential U
with u = U_x.  The grid fields determine U_t only up to a constant, so the
package fixes the zero-mean convention (spectral antiderivative with zero
mode 0) for U_t inside I2 and I3, and monitors the mass through the
surrogate I1 = 2*L*mean(u), whose time derivative 2*L*mean(v) is an exact
constant of the scheme.  Every serialized result records this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrator import Trajectory
from .model import HbqParams, State, signed_power
from .spectral import Grid, antiderivative, derivative


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One time-stamped row of run diagnostics."""

    t: float
    linf_u: float
    amplitude: float
    I1: float
    I2: float
    I3: float
    blowup_flag: bool = False
    linf_error: float | None = None


def linf_error(numeric: np.ndarray, exact: np.ndarray) -> float:
    """max_i |numeric_i - exact_i| on a shared grid."""
    numeric, exact = np.asarray(numeric), np.asarray(exact)
    if numeric.shape != exact.shape:
        raise ValueError(f"shape mismatch: {numeric.shape} vs {exact.shape}")
    return float(np.max(np.abs(numeric - exact)))


def convergence_orders(rows: list[tuple[float, float]]) -> list[float | None]:
    """Empirical orders between consecutive (resolution, error) rows.

    order_i = log(e_{i-1}/e_i) / log(r_i/r_{i-1}); the first entry is None.
    A zero error means the run is exact to rounding, reported as inf
    (saturated) rather than an error.
    """
    if len(rows) < 2:
        raise ValueError("need at least two (resolution, error) rows")
    resolutions = [r for r, _ in rows]
    if any(r2 <= r1 for r1, r2 in zip(resolutions, resolutions[1:])):
        raise ValueError("resolutions must be strictly increasing")
    if any(e < 0 for _, e in rows):
        raise ValueError("errors must be nonnegative")
    orders: list[float | None] = [None]
    for (r1, e1), (r2, e2) in zip(rows, rows[1:]):
        if e2 == 0.0:
            orders.append(math.inf)
        elif e1 == 0.0:
            orders.append(-math.inf)
        else:
            orders.append(math.log(e1 / e2) / math.log(r2 / r1))
    return orders


def mass_surrogate(state: State, grid: Grid) -> float:
    """I1 surrogate 2*L*mean(u); exactly linear in t under the scheme."""
    return 2.0 * grid.L * float(np.mean(state.u))


def potential_density(u: np.ndarray, params: HbqParams) -> np.ndarray:
    """F(u) = sign * u**(p+1) / (p+1), the primitive of the nonlinearity."""
    return signed_power(u, params) * u / (params.p + 1)


def conserved_integrals(state: State, grid: Grid,
                        params: HbqParams) -> tuple[float, float, float]:
    """(I1, I2, I3) by spectral quadrature, zero-mean convention for U_t.

    I1 is the 2*L*mean(u) surrogate.  Raises NonZeroMeanError (from the
    antiderivative) when mean(v) is not negligible, since U_t then has no
    periodic representative.
    """
    u, v = state.u, state.v
    w = 2.0 * grid.L / grid.N  # quadrature weight of the equispaced rule
    Ut = antiderivative(v, grid)
    vx = derivative(v, grid, 1)
    vxxx = derivative(v, grid, 3)
    I1 = mass_surrogate(state, grid)
    I2 = w * float(np.sum(u * (Ut - params.eta1 * vx + params.eta2 * vxxx)))
    I3 = w * float(np.sum(Ut ** 2 + 2.0 * potential_density(u, params) + u ** 2
                          + params.eta1 * v ** 2 + params.eta2 * vx ** 2))
    return I1, I2, I3


def diagnostics_record(state: State, grid: Grid, params: HbqParams,
                       exact: np.ndarray | None = None) -> DiagnosticsRecord:
    """Assemble one diagnostics row for the state."""
    finite = state.is_finite()
    if finite:
        I1, I2, I3 = conserved_integrals(state, grid, params)
        linf_u = state.max_abs_u()
        amplitude = float(np.max(state.u))
    else:
        I1 = I2 = I3 = math.nan
        linf_u = amplitude = math.nan
    err = None if exact is None else linf_error(state.u, exact)
    return DiagnosticsRecord(t=state.t, linf_u=linf_u, amplitude=amplitude,
                             I1=I1, I2=I2, I3=I3, blowup_flag=not finite,
                             linf_error=err)


def blowup_condition_check(params: HbqParams, mu: float,
                           u_range: tuple[float, float] = (-1e3, 1e3),
                           samples: int = 10 ** 6) -> bool:
    """Sampled check of u*f(u) <= 2*mu*u**2 + 2*(1+2*mu)*F(u).

    This is the nonlinearity hypothesis of the finite-time blow-up
    criterion.  Sampling is a check, not a proof; samples >= 1000 enforced.
    """
    if mu <= 0:
        raise ValueError(f"mu must be positive, got {mu}")
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    u = np.linspace(u_range[0], u_range[1], samples)
    lhs = u * signed_power(u, params)
    rhs = 2.0 * mu * u ** 2 + 2.0 * (1.0 + 2.0 * mu) * potential_density(u, params)
    return bool(np.all(lhs <= rhs))


def default_mu(params: HbqParams) -> float:
    """mu = (p-1)/4, which closes the inequality for both sign conventions.

    For sign=+1 the two u**(p+1) terms cancel and the gap is 2*mu*u**2; for
    sign=-1 with odd p the even-power terms cancel the same way.
    """
    return (params.p - 1) / 4.0


def blowup_time(traj: Trajectory, threshold: float) -> float | None:
    """First time max|u| reaches the threshold, interpolated between samples.

    None if the trajectory never crosses.  The threshold must exceed the
    initial max|u| so that "first crossing" is meaningful.
    """
    amps = traj.max_abs_u()
    times = traj.times()
    if threshold <= amps[0]:
        raise ValueError(
            f"threshold {threshold} must exceed initial max|u| = {amps[0]:.4g}")
    above = np.nonzero(amps >= threshold)[0]
    if len(above) == 0:
        return None
    i = int(above[0])
    t1, t2 = times[i - 1], times[i]
    a1, a2 = amps[i - 1], amps[i]
    return float(t1 + (threshold - a1) / (a2 - a1) * (t2 - t1))


def final_amplitude(traj: Trajectory) -> float:
    """max over the grid of u at the final sample."""
    return float(np.max(traj.final.u))
