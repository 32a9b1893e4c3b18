"""Transform-pair identities, derivative exactness, antiderivative inversion."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hbq.spectral import (Grid, NonZeroMeanError, SymmetryError, antiderivative,
                          derivative, forward_dft, inverse_dft, make_grid,
                          two_thirds_mask)

fields = arrays(np.float64, 64,
                elements=st.floats(-10, 10, allow_nan=False, width=64))


class TestMakeGrid:
    def test_small_grid_nodes_and_wavenumbers(self):
        grid = make_grid(np.pi, 4)
        np.testing.assert_allclose(grid.x, [-np.pi, -np.pi / 2, 0.0, np.pi / 2],
                                   atol=1e-15)
        assert sorted(grid.k) == [-2, -1, 0, 1]

    def test_spacing(self):
        grid = make_grid(100.0, 512)
        assert grid.dx == 2 * 100.0 / 512 == 0.390625
        np.testing.assert_allclose(np.diff(grid.x), grid.dx)

    def test_right_endpoint_excluded(self):
        grid = make_grid(1.0, 8)
        assert grid.x[0] == -1.0
        assert grid.x[-1] < 1.0

    def test_wavenumbers_each_once(self):
        grid = make_grid(2.5, 16)
        assert sorted(grid.k) == list(range(-8, 8))

    @pytest.mark.parametrize("L,N", [(1.0, 3), (1.0, 5), (1.0, 2), (0.0, 8),
                                     (-2.0, 8)])
    def test_invalid_arguments(self, L, N):
        with pytest.raises(ValueError):
            make_grid(L, N)


class TestTransformPair:
    def test_constant_field(self):
        F = forward_dft(np.full(16, 3.0))
        assert F[0] == pytest.approx(3.0, abs=1e-14)
        assert np.max(np.abs(F[1:])) < 1e-14

    def test_single_cosine(self):
        # f_j = cos(X_j) has coefficients 1/2 at k = +-1
        X = 2 * np.pi * np.arange(32) / 32
        F = forward_dft(np.cos(X))
        assert F[1] == pytest.approx(0.5, abs=1e-14)
        assert F[-1] == pytest.approx(0.5, abs=1e-14)
        others = np.delete(F, [1, 31])
        assert np.max(np.abs(others)) < 1e-14

    def test_inverse_of_unit_mean_mode(self):
        F = np.zeros(16, dtype=complex)
        F[0] = 1.0
        np.testing.assert_allclose(inverse_dft(F), np.ones(16), atol=1e-14)

    def test_inverse_of_cosine_coefficients(self):
        F = np.zeros(32, dtype=complex)
        F[1] = F[-1] = 0.5
        X = 2 * np.pi * np.arange(32) / 32
        np.testing.assert_allclose(inverse_dft(F), np.cos(X), atol=1e-14)

    def test_symmetry_violation_raises(self):
        F = np.zeros(16, dtype=complex)
        F[1] = 1.0  # no conjugate partner at k = -1
        with pytest.raises(SymmetryError):
            inverse_dft(F)

    @settings(deadline=None, max_examples=50)
    @given(fields)
    def test_roundtrip(self, f):
        back = inverse_dft(forward_dft(f))
        tol = 1e-11 * max(1.0, np.max(np.abs(f)))
        assert np.max(np.abs(back - f)) <= tol

    @settings(deadline=None, max_examples=50)
    @given(fields)
    def test_parseval(self, f):
        grid = make_grid(3.0, len(f))
        physical = np.sum(f ** 2) * grid.dx
        spectral = 2 * grid.L * np.sum(np.abs(forward_dft(f)) ** 2)
        assert physical == pytest.approx(spectral, rel=1e-10, abs=1e-12)

    def test_conjugate_symmetry_of_real_input(self):
        rng = np.random.default_rng(0)
        F = forward_dft(rng.standard_normal(32))
        for k in range(1, 16):
            assert F[-k] == pytest.approx(np.conj(F[k]), abs=1e-14)


class TestDerivative:
    def test_single_mode_first_derivative(self):
        grid = make_grid(7.0, 64)
        f = np.sin(np.pi * grid.x / grid.L)
        exact = (np.pi / grid.L) * np.cos(np.pi * grid.x / grid.L)
        assert np.max(np.abs(derivative(f, grid, 1) - exact)) < 1e-12

    def test_constant_derivative_is_zero(self):
        grid = make_grid(1.0, 16)
        for order in (1, 2, 3, 4):
            assert np.max(np.abs(derivative(np.full(16, 2.5), grid, order))) < 1e-13

    def test_second_derivative_cosine(self):
        grid = make_grid(5.0, 64)
        f = np.cos(np.pi * grid.x / grid.L)
        exact = -(np.pi / grid.L) ** 2 * f
        np.testing.assert_allclose(derivative(f, grid, 2), exact, atol=1e-13)

    def test_trig_polynomial_exactness(self):
        # random trig polynomial strictly below the Nyquist mode
        grid = make_grid(2.0, 32)
        rng = np.random.default_rng(3)
        ks = np.arange(1, 16)
        a, b = rng.standard_normal(15), rng.standard_normal(15)
        w = np.pi / grid.L
        f = sum(a[i] * np.cos(k * w * grid.x) + b[i] * np.sin(k * w * grid.x)
                for i, k in enumerate(ks))
        exact = sum(-a[i] * k * w * np.sin(k * w * grid.x)
                    + b[i] * k * w * np.cos(k * w * grid.x)
                    for i, k in enumerate(ks))
        assert np.max(np.abs(derivative(f, grid, 1) - exact)) < 1e-11

    def test_linearity(self):
        grid = make_grid(1.5, 32)
        rng = np.random.default_rng(4)
        f, g = rng.standard_normal(32), rng.standard_normal(32)
        lhs = derivative(2.0 * f - 3.0 * g, grid, 1)
        rhs = 2.0 * derivative(f, grid, 1) - 3.0 * derivative(g, grid, 1)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_nyquist_mode_zeroed_for_odd_orders(self):
        grid = make_grid(np.pi, 8)
        f = np.cos(4 * grid.x)  # pure Nyquist mode, k = -N/2
        assert np.max(np.abs(derivative(f, grid, 1))) == 0.0
        # even order keeps it
        np.testing.assert_allclose(derivative(f, grid, 2), -16.0 * f, atol=1e-12)

    def test_invalid_order(self):
        grid = make_grid(1.0, 8)
        with pytest.raises(ValueError):
            derivative(np.zeros(8), grid, 0)


class TestAntiderivative:
    def test_single_mode(self):
        grid = make_grid(4.0, 64)
        f = np.cos(np.pi * grid.x / grid.L)
        exact = (grid.L / np.pi) * np.sin(np.pi * grid.x / grid.L)
        np.testing.assert_allclose(antiderivative(f, grid), exact, atol=1e-13)

    def test_zero_field(self):
        grid = make_grid(1.0, 16)
        assert np.max(np.abs(antiderivative(np.zeros(16), grid))) == 0.0

    def test_nonzero_mean_rejected(self):
        grid = make_grid(1.0, 16)
        with pytest.raises(NonZeroMeanError):
            antiderivative(np.ones(16), grid)

    def test_result_is_zero_mean(self):
        grid = make_grid(2.0, 64)
        f = np.sin(np.pi * grid.x / grid.L) + np.cos(2 * np.pi * grid.x / grid.L)
        assert abs(np.mean(antiderivative(f, grid))) < 1e-14

    def test_derivative_inverts_antiderivative(self):
        grid = make_grid(3.0, 64)
        rng = np.random.default_rng(5)
        f = rng.standard_normal(64)
        f -= f.mean()
        back = derivative(antiderivative(f, grid), grid, 1)
        # recovers f up to its (zero) mean; Nyquist content is lost, so
        # compare after projecting it out of the reference too
        f_ref = inverse_dft(np.where(np.abs(grid.k) == 32, 0, forward_dft(f)),
                            check=False)
        assert np.max(np.abs(back - f_ref)) < 1e-10 * max(1, np.max(np.abs(f)))


def test_two_thirds_mask_keeps_low_modes():
    grid = make_grid(1.0, 12)
    mask = two_thirds_mask(grid)
    kept = sorted(grid.k[mask])
    assert kept == [-4, -3, -2, -1, 0, 1, 2, 3, 4]
