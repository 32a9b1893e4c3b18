"""Closed-form solitary waves: initial conditions and exact-solution oracles.

For f(u) = u**p the traveling-wave reduction of the model (integrate the PDE
twice in xi = x - c*t - x0, with decay at infinity) is

    (c**2 - 1)*u - eta1*c**2*u'' + eta2*c**2*u'''' = u**p,

solved exactly by the sech-power profile

    u(xi) = A * sech(B*xi) ** (4/(p-1))

whose amplitude A, inverse width B and speed c are locked to (p, eta1, eta2):

    A    = [eta1**2 c**2 (p+1)(p+3)(3p+1) / (2 eta2 (p**2+2p+5)**2)] ** (1/(p-1))
    B    = [eta1 (p-1)**2 / (4 eta2 (p**2+2p+5))] ** (1/2)
    c**2 = 1 / (1 - 4 eta1**2 (p+1)**2 / (eta2 (p**2+2p+5)**2))

The family exists only when the expression under c**2 is positive, i.e. when
eta2 is large enough relative to eta1**2; there is no free amplitude
parameter.  The eta2 = 0 (improved Boussinesq) equation has its own
one-parameter sech**2 family, provided separately.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import HbqParams, State
from .spectral import Grid, derivative


class NoSolitaryWaveError(ValueError):
    """(p, eta1, eta2) outside the existence region of the sech-power family."""


@dataclass(frozen=True)
class SolitaryWave:
    """One member of the closed-form family: A, B > 0, c**2 > 1, center x0."""

    A: float
    B: float
    c: float
    x0: float
    p: int
    params: HbqParams

    def profile(self, x: np.ndarray | float, t: float = 0.0) -> np.ndarray | float:
        """u(x, t) = A * sech(B*(x - c*t - x0)) ** (4/(p-1))."""
        arg = self.B * (np.asarray(x) - self.c * t - self.x0)
        return self.A * np.cosh(arg) ** (-4.0 / (self.p - 1))

    def profile_dt(self, x: np.ndarray | float, t: float = 0.0) -> np.ndarray | float:
        """Exact time derivative of the profile (what v = u_t must equal)."""
        arg = self.B * (np.asarray(x) - self.c * t - self.x0)
        g = 4.0 / (self.p - 1)
        return g * self.A * self.B * self.c * np.cosh(arg) ** (-g) * np.tanh(arg)

    def moving_left(self) -> "SolitaryWave":
        """Mirror-image wave traveling in the -x direction."""
        return replace(self, c=-self.c)


def solitary_wave(params: HbqParams, x0: float = 0.0) -> SolitaryWave:
    """Amplitude/width/speed of the solitary wave for the given parameters.

    Returns the right-moving root c > 0; use .moving_left() for the other.
    Raises NoSolitaryWaveError outside the existence region, and ValueError
    for sign = -1 (the closed form is derived for f(u) = +u**p).
    """
    if params.sign != 1:
        raise ValueError("solitary family exists for the +u**p nonlinearity only")
    p, e1, e2 = params.p, params.eta1, params.eta2
    q = p * p + 2 * p + 5
    if e2 <= 0 or 1.0 - 4.0 * e1 ** 2 * (p + 1) ** 2 / (e2 * q * q) <= 0.0:
        raise NoSolitaryWaveError(
            f"no solitary wave for p={p}, eta1={e1}, eta2={e2}: "
            f"requires eta2 > {4.0 * e1 ** 2 * (p + 1) ** 2 / (q * q):.6g}"
        )
    c2 = 1.0 / (1.0 - 4.0 * e1 ** 2 * (p + 1) ** 2 / (e2 * q * q))
    c = float(np.sqrt(c2))
    A = float((e1 ** 2 * c2 * (p + 1) * (p + 3) * (3 * p + 1) / (2.0 * e2 * q * q))
              ** (1.0 / (p - 1)))
    B = float(np.sqrt(e1 * (p - 1) ** 2 / (4.0 * e2 * q)))
    return SolitaryWave(A=A, B=B, c=c, x0=float(x0), p=p, params=params)


def initial_state(wave: SolitaryWave, grid: Grid) -> State:
    """Sample (u, u_t) of the wave at t = 0 on the grid."""
    u = np.asarray(wave.profile(grid.x, 0.0), dtype=float)
    v = np.asarray(wave.profile_dt(grid.x, 0.0), dtype=float)
    return State(u=u, v=v, t=0.0)


def superpose(waves: list[SolitaryWave], grid: Grid) -> State:
    """Sum of well-separated waves at t = 0, e.g. for head-on collisions."""
    u = np.zeros(grid.N)
    v = np.zeros(grid.N)
    for w in waves:
        u += w.profile(grid.x, 0.0)
        v += w.profile_dt(grid.x, 0.0)
    return State(u=u, v=v, t=0.0)


def ibq_initial_state(A: float, grid: Grid) -> State:
    """Solitary wave of the eta2 = 0 (improved Boussinesq) equation, p = 2.

    u(x, 0) = A * sech(b*x)**2 with b = sqrt(A/6)/c and c = sqrt(2*A/3 + 1);
    v is the exact time derivative 2*A*b*c * sech(b*x)**2 * tanh(b*x) of the
    right-moving wave.  Used to probe the eta2 -> 0 limit under the
    higher-order dynamics.
    """
    if A <= 0:
        raise ValueError(f"amplitude must be positive, got {A}")
    c = float(np.sqrt(2.0 * A / 3.0 + 1.0))
    b = float(np.sqrt(A / 6.0) / c)
    arg = b * grid.x
    sech2 = np.cosh(arg) ** -2.0
    u = A * sech2
    v = 2.0 * A * b * c * sech2 * np.tanh(arg)
    return State(u=u, v=v, t=0.0)


def ibq_speed(A: float) -> float:
    """Speed c = sqrt(2*A/3 + 1) of the improved-equation wave."""
    return float(np.sqrt(2.0 * A / 3.0 + 1.0))


def traveling_ode_residual(wave: SolitaryWave, grid: Grid) -> float:
    """Max norm of the traveling-wave ODE applied to the sampled profile.

    Derivatives are spectral, so for a well-resolved wave whose tails vanish
    at the domain edge this is an exactness oracle: the closed form should
    leave residual at rounding level, and any perturbation of (A, B, c)
    shows up immediately.
    """
    p, e1, e2 = wave.p, wave.params.eta1, wave.params.eta2
    c2 = wave.c ** 2
    u = np.asarray(wave.profile(grid.x, 0.0), dtype=float)
    res = ((c2 - 1.0) * u
           - e1 * c2 * derivative(u, grid, 2)
           + e2 * c2 * derivative(u, grid, 4)
           - u ** p)
    return float(np.max(np.abs(res)))
