"""Discrete Fourier transforms and spectral calculus on a uniform periodic grid.

The physical domain is [-L, L] with N evenly spaced nodes (right endpoint
excluded).  Transforms use integer wavenumbers k in {-N/2, ..., N/2-1}; the
map to physical wavenumbers is k -> pi*k/L, so differentiation is
multiplication by (i*pi*k/L)**n in coefficient space.

Conventions, fixed once for the whole package:

* forward transform carries the 1/N factor, the inverse carries none;
* for odd derivative orders the unpaired k = -N/2 mode is zeroed (it has no
  conjugate partner, and keeping it would make the result complex);
* the antiderivative puts 0 in the zero mode, i.e. results are zero-mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: relative size above which leftover imaginary content in an inverse
#: transform is treated as an error rather than rounding noise
IMAG_RESIDUE_TOL = 1e-10

#: relative mean size above which a field has no periodic antiderivative
MEAN_TOL = 1e-10


class SymmetryError(ValueError):
    """Inverse transform of coefficients that do not describe a real field."""


class NonZeroMeanError(ValueError):
    """Antiderivative requested for a field with non-negligible mean."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L, L) with its wavenumber bookkeeping.

    Attributes:
        L: half-length of the physical domain.
        N: number of nodes, even and >= 4.
        x: node coordinates -L + 2*L*j/N, j = 0..N-1.
        k: integer wavenumbers in FFT order; as a set, {-N/2, ..., N/2-1}.
    """

    L: float
    N: int
    x: np.ndarray = field(repr=False)
    k: np.ndarray = field(repr=False)

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    def scaled_wavenumbers(self) -> np.ndarray:
        """Physical wavenumbers pi*k/L, aligned with coefficient arrays."""
        return np.pi * self.k / self.L


def make_grid(L: float, N: int) -> Grid:
    """Build a Grid, validating L > 0 and N even, N >= 4."""
    if L <= 0:
        raise ValueError(f"domain half-length must be positive, got L={L}")
    if N < 4 or N % 2 != 0:
        raise ValueError(f"grid size must be even and >= 4, got N={N}")
    x = -L + 2.0 * L * np.arange(N) / N
    k = np.fft.fftfreq(N, d=1.0 / N)  # integer wavenumbers, FFT order
    return Grid(L=float(L), N=int(N), x=x, k=k)


def forward_dft(f: np.ndarray) -> np.ndarray:
    """Fourier coefficients of a real field, with the 1/N normalization.

    coeff(k) = (1/N) * sum_j f_j * exp(-i*k*X_j), X_j = 2*pi*j/N.
    """
    f = np.asarray(f)
    return np.fft.fft(f) / len(f)


def inverse_dft(F: np.ndarray, check: bool = True) -> np.ndarray:
    """Real field from conjugate-symmetric coefficients.

    f_j = sum_k coeff(k) * exp(i*k*X_j).  Imaginary residue below
    IMAG_RESIDUE_TOL (relative to the field size) is discarded; larger
    residue raises SymmetryError.  Pass check=False on internal paths where
    symmetry holds by construction.
    """
    F = np.asarray(F)
    f = np.fft.ifft(F) * len(F)
    if check:
        scale = max(1.0, float(np.max(np.abs(f.real))))
        residue = float(np.max(np.abs(f.imag)))
        if residue > IMAG_RESIDUE_TOL * scale:
            raise SymmetryError(
                f"imaginary residue {residue:.3e} exceeds {IMAG_RESIDUE_TOL:.0e}"
                " relative tolerance; coefficients are not conjugate-symmetric"
            )
    return f.real


def derivative(f: np.ndarray, grid: Grid, order: int = 1) -> np.ndarray:
    """Spectral derivative of the given order.

    Multiplies coefficients by (i*pi*k/L)**order.  For odd orders the
    k = -N/2 mode is zeroed to keep the result real.
    """
    if order < 1:
        raise ValueError(f"derivative order must be >= 1, got {order}")
    factor = (1j * grid.scaled_wavenumbers()) ** order
    if order % 2 == 1:
        factor[grid.N // 2] = 0.0
    return inverse_dft(factor * forward_dft(f), check=False)


def antiderivative(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Zero-mean periodic antiderivative, coefficients divided by i*pi*k/L.

    Requires the input to be (numerically) zero-mean; otherwise no periodic
    antiderivative exists and NonZeroMeanError is raised.  The zero mode of
    the result is set to 0.
    """
    f = np.asarray(f)
    mean = float(np.mean(f))
    scale = max(1.0, float(np.max(np.abs(f))))
    if abs(mean) > MEAN_TOL * scale:
        raise NonZeroMeanError(
            f"field mean {mean:.3e} too large for a periodic antiderivative"
        )
    kap = grid.scaled_wavenumbers()
    F = forward_dft(f)
    out = np.zeros_like(F)
    nonzero = kap != 0.0
    out[nonzero] = F[nonzero] / (1j * kap[nonzero])
    return inverse_dft(out, check=False)


def two_thirds_mask(grid: Grid) -> np.ndarray:
    """Boolean mask keeping |k| <= N/3 (the 2/3 dealiasing rule).

    Off by default everywhere in this package; provided for experiments that
    want to rule aliasing in or out.
    """
    return np.abs(grid.k) <= grid.N / 3.0
