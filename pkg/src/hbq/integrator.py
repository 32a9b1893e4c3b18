"""Classic fourth-order Runge-Kutta stepping of the mode system.

Fixed step size dt = T/M throughout; there is no adaptivity, so runs into a
finite-time blow-up terminate either on non-finite values or on a max-norm
guard, and the recorded termination time is resolution-dependent by design.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import HbqParams, State, dispersion_symbol, rhs_nodes
from .spectral import Grid, two_thirds_mask

#: max|u| above which integration stops rather than run into overflow
DEFAULT_GUARD = 1e6


@dataclass(frozen=True)
class TimeGrid:
    """Final time T split into M equal steps."""

    T: float
    M: int

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError(f"final time must be positive, got {self.T}")
        if self.M < 1:
            raise ValueError(f"step count must be >= 1, got {self.M}")

    @property
    def dt(self) -> float:
        return self.T / self.M


@dataclass
class Trajectory:
    """Sampled states of one run; samples[0] is the initial state.

    When the run terminates early, `blowup` is set and `final` is the last
    state kept: the first state past the guard if it was still finite (useful
    for locating the crossing), otherwise the last fully finite state.
    """

    samples: list[State] = field(default_factory=list)
    blowup: bool = False

    @property
    def final(self) -> State:
        return self.samples[-1]

    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    def max_abs_u(self) -> np.ndarray:
        return np.array([s.max_abs_u() for s in self.samples])


def rk4_update(f, t: float, y, dt: float):
    """One classic RK4 step of y' = f(t, y) for any vector-like y."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_step(state: State, dt: float, grid: Grid, params: HbqParams,
             dealias: bool = False) -> State:
    """Advance the fields by one step of size dt.

    The result may contain non-finite values when the solution is blowing
    up; callers (evolve) treat that as a termination signal, not an error.
    """
    sigma = dispersion_symbol(grid, params)
    mask = two_thirds_mask(grid) if dealias else None
    # overflow while blowing up is a signal, not an error condition
    with np.errstate(over="ignore", invalid="ignore"):
        u, v = _stage_combine(state.u, state.v, sigma, params, dt, mask)
    return State(u=u, v=v, t=state.t + dt)


def _stage_combine(u, v, sigma, params, dt, mask):
    k1u, k1v = rhs_nodes(u, v, sigma, params, mask)
    k2u, k2v = rhs_nodes(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v, sigma, params, mask)
    k3u, k3v = rhs_nodes(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v, sigma, params, mask)
    k4u, k4v = rhs_nodes(u + dt * k3u, v + dt * k3v, sigma, params, mask)
    un = u + (dt / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
    vn = v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return un, vn


def evolve(initial: State, grid: Grid, params: HbqParams, tgrid: TimeGrid,
           sample_stride: int = 1, guard: float = DEFAULT_GUARD,
           dealias: bool = False) -> Trajectory:
    """Run M steps from the initial state, sampling every sample_stride steps.

    Deterministic: identical inputs give bit-identical trajectories on one
    platform.  Early termination on non-finite values or on max|u| > guard
    flags the trajectory as a blow-up; that is an expected outcome for
    blow-up initial data, not a failure.
    """
    if sample_stride < 1:
        raise ValueError(f"sample stride must be >= 1, got {sample_stride}")
    sigma = dispersion_symbol(grid, params)
    mask = two_thirds_mask(grid) if dealias else None
    dt = tgrid.dt

    u, v = initial.u.copy(), initial.v.copy()
    traj = Trajectory(samples=[State(u=u.copy(), v=v.copy(), t=initial.t)])
    for n in range(tgrid.M):
        with np.errstate(over="ignore", invalid="ignore"):
            un, vn = _stage_combine(u, v, sigma, params, dt, mask)
        t = initial.t + (n + 1) * dt
        if not (np.all(np.isfinite(un)) and np.all(np.isfinite(vn))):
            traj.blowup = True
            return traj
        u, v = un, vn
        if np.max(np.abs(u)) > guard:
            traj.samples.append(State(u=u.copy(), v=v.copy(), t=t))
            traj.blowup = True
            return traj
        if (n + 1) % sample_stride == 0 or n + 1 == tgrid.M:
            traj.samples.append(State(u=u.copy(), v=v.copy(), t=t))
    return traj
