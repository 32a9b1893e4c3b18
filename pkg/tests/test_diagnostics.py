"""Norms, convergence rates, conserved integrals, blow-up detection."""

import math

import numpy as np
import pytest

from hbq.diagnostics import (blowup_condition_check, blowup_time,
                             conserved_integrals, convergence_orders,
                             default_mu, diagnostics_record, final_amplitude,
                             linf_error, mass_surrogate)
from hbq.experiments import CUBIC_DATA, QUADRATIC_DATA, blowup_initial_state
from hbq.integrator import Trajectory
from hbq.model import HbqParams, State
from hbq.spectral import NonZeroMeanError, make_grid

# initial energy integrals of the blow-up data, frozen from an independent
# adaptive-quadrature evaluation of the closed forms over the whole line
I3_QUADRATIC = -2.0224132801050017
I3_CUBIC = -14804.338386703324


def _traj(amps, times=None):
    times = times if times is not None else list(range(len(amps)))
    samples = [State(u=np.full(4, a), v=np.zeros(4), t=float(t))
               for a, t in zip(amps, times)]
    return Trajectory(samples=samples)


class TestLinfError:
    def test_identical(self):
        f = np.arange(8.0)
        assert linf_error(f, f) == 0.0

    def test_constant_offset(self):
        f = np.arange(8.0)
        assert linf_error(f + 1e-3, f) == pytest.approx(1e-3, rel=1e-12)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            linf_error(np.zeros(4), np.zeros(5))


class TestConvergenceOrders:
    def test_ratio_sixteen_gives_four(self):
        orders = convergence_orders([(10, 1.6e-2), (20, 1e-3)])
        assert orders == [None, pytest.approx(4.0, rel=1e-12)]

    def test_equal_errors_give_zero(self):
        assert convergence_orders([(1, 0.5), (2, 0.5)])[1] == 0.0

    def test_reference_time_orders(self):
        rows = [(2, 8.662e-3), (5, 2.530e-4), (10, 1.614e-5), (50, 2.623e-8),
                (100, 1.637e-9)]
        orders = convergence_orders(rows)
        for got, printed in zip(orders[1:], [3.8561, 3.9704, 3.9903, 4.0021]):
            assert abs(got - printed) <= 0.05

    def test_reference_space_orders(self):
        rows = [(10, 2.11e-2), (50, 1.747e-3), (100, 4.431e-7),
                (150, 6.500e-10), (200, 3.884e-13)]
        orders = convergence_orders(rows)
        for got, printed in zip(orders[1:], [1.5480, 11.9450, 16.0916, 25.8017]):
            assert abs(got - printed) <= 0.05

    def test_zero_error_saturates(self):
        orders = convergence_orders([(1, 1e-3), (2, 0.0)])
        assert orders[1] == math.inf

    def test_validation(self):
        with pytest.raises(ValueError):
            convergence_orders([(1, 0.1)])
        with pytest.raises(ValueError):
            convergence_orders([(2, 0.1), (1, 0.01)])
        with pytest.raises(ValueError):
            convergence_orders([(1, -0.1), (2, 0.01)])


class TestConservedIntegrals:
    def test_zero_state(self):
        grid = make_grid(10.0, 64)
        st = State(np.zeros(64), np.zeros(64))
        assert conserved_integrals(st, grid, HbqParams()) == (0.0, 0.0, 0.0)

    def test_quadratic_blowup_energy(self):
        grid = make_grid(10.0, 512)
        st = blowup_initial_state(QUADRATIC_DATA, grid)
        _, _, i3 = conserved_integrals(st, grid, HbqParams(p=2, sign=1))
        assert i3 == pytest.approx(I3_QUADRATIC, rel=1e-8)
        assert i3 < 0.0

    def test_cubic_blowup_energy(self):
        grid = make_grid(10.0, 512)
        st = blowup_initial_state(CUBIC_DATA, grid)
        _, _, i3 = conserved_integrals(st, grid, HbqParams(p=3, sign=-1))
        assert i3 == pytest.approx(I3_CUBIC, rel=1e-8)
        assert i3 < 0.0

    def test_nonzero_mean_velocity_rejected(self):
        grid = make_grid(10.0, 64)
        st = State(np.zeros(64), np.ones(64))
        with pytest.raises(NonZeroMeanError):
            conserved_integrals(st, grid, HbqParams())

    def test_mass_surrogate(self):
        grid = make_grid(10.0, 64)
        st = State(np.full(64, 0.5), np.zeros(64))
        assert mass_surrogate(st, grid) == pytest.approx(2 * 10.0 * 0.5, rel=1e-14)


class TestBlowupCondition:
    def test_quadratic_quarter(self):
        assert blowup_condition_check(HbqParams(p=2, sign=1), mu=0.25)

    def test_cubic_half(self):
        assert blowup_condition_check(HbqParams(p=3, sign=-1), mu=0.5)

    def test_wide_range_many_samples(self):
        assert blowup_condition_check(HbqParams(p=2, sign=1), mu=0.25,
                                      u_range=(-100.0, 100.0), samples=10 ** 6)

    def test_violated_condition_detected(self):
        # +u^3 with mu too small fails at large |u|
        assert not blowup_condition_check(HbqParams(p=3, sign=1), mu=0.1)

    def test_default_mu(self):
        assert default_mu(HbqParams(p=2)) == 0.25
        assert default_mu(HbqParams(p=3, sign=-1)) == 0.5
        for p in (2, 3, 4, 5, 6):
            sign = 1 if p % 2 == 0 else -1
            params = HbqParams(p=p, sign=sign)
            assert blowup_condition_check(params, default_mu(params))

    def test_validation(self):
        with pytest.raises(ValueError):
            blowup_condition_check(HbqParams(), mu=0.0)
        with pytest.raises(ValueError):
            blowup_condition_check(HbqParams(), mu=0.25, samples=10)


class TestBlowupTime:
    def test_interpolated_crossing(self):
        traj = _traj([1.0, 2.0, 6.0], times=[0.0, 1.0, 2.0])
        # crosses 4.0 halfway between t=1 and t=2
        assert blowup_time(traj, 4.0) == pytest.approx(1.5, rel=1e-12)

    def test_no_crossing(self):
        assert blowup_time(_traj([1.0, 2.0, 3.0]), 10.0) is None

    def test_threshold_below_initial_rejected(self):
        with pytest.raises(ValueError):
            blowup_time(_traj([5.0, 6.0]), 2.0)

    def test_first_crossing_wins(self):
        traj = _traj([1.0, 8.0, 2.0, 9.0], times=[0.0, 1.0, 2.0, 3.0])
        assert blowup_time(traj, 4.0) < 1.0


class TestRecords:
    def test_final_amplitude(self):
        assert final_amplitude(_traj([1.0, 3.0, 2.0])) == 2.0

    def test_record_fields(self):
        grid = make_grid(10.0, 64)
        st = State(np.sin(np.pi * grid.x / 10.0), np.zeros(64), t=1.5)
        rec = diagnostics_record(st, grid, HbqParams())
        assert rec.t == 1.5
        assert rec.amplitude <= rec.linf_u
        assert not rec.blowup_flag
        assert rec.linf_error is None

    def test_record_flags_nonfinite(self):
        grid = make_grid(10.0, 8)
        st = State(np.full(8, np.nan), np.zeros(8))
        rec = diagnostics_record(st, grid, HbqParams())
        assert rec.blowup_flag
