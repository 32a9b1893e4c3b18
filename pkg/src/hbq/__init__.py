"""Pseudo-spectral solver and experiment runners for the higher-order
Boussinesq equation with power nonlinearities."""

from .diagnostics import (blowup_condition_check, blowup_time, conserved_integrals,
                          convergence_orders, final_amplitude, linf_error)
from .integrator import TimeGrid, Trajectory, evolve, rk4_step
from .model import HbqParams, State, dispersion_symbol, rhs
from .spectral import (Grid, antiderivative, derivative, forward_dft,
                       inverse_dft, make_grid)
from .waves import (NoSolitaryWaveError, SolitaryWave, ibq_initial_state,
                    initial_state, solitary_wave, traveling_ode_residual)

__version__ = "0.1.0"

__all__ = [
    "Grid", "HbqParams", "NoSolitaryWaveError", "SolitaryWave", "State",
    "TimeGrid", "Trajectory", "antiderivative", "blowup_condition_check",
    "blowup_time", "conserved_integrals", "convergence_orders", "derivative",
    "dispersion_symbol", "evolve", "final_amplitude", "forward_dft",
    "ibq_initial_state", "initial_state", "inverse_dft", "linf_error",
    "make_grid", "rhs", "rk4_step", "solitary_wave", "traveling_ode_residual",
]
