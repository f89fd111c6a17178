"""Uniform 1-D spatial grid for the cantilever coordinate.

The grid is periodic: the momentum array holds the discrete conjugate
frequencies in FFT order (same convention as ``numpy.fft.fftfreq``), so a
spectral kinetic factor built from it matches the fast transforms used by
the propagator point for point.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid on [z_min, z_max) with n_points points, dz = span/n.

    z_max is excluded: under periodic boundary conditions z_max is the same
    point as z_min.
    """

    z_min: float
    z_max: float
    n_points: int

    @property
    def dz(self) -> float:
        return (self.z_max - self.z_min) / self.n_points

    @cached_property
    def z(self) -> np.ndarray:
        zs = self.z_min + self.dz * np.arange(self.n_points)
        zs.setflags(write=False)
        return zs

    @cached_property
    def momenta(self) -> np.ndarray:
        """Conjugate momenta in FFT order; max |p| = pi/dz."""
        p = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dz)
        p.setflags(write=False)
        return p

    @property
    def dp(self) -> float:
        return 2.0 * np.pi / (self.n_points * self.dz)


def make_grid(z_min: float, z_max: float, n_points: int) -> SpatialGrid:
    """Build a grid, validating the propagator's requirements.

    n_points must be a power of two >= 8 (transform performance), and the
    interval must be non-degenerate.
    """
    if not isinstance(n_points, (int, np.integer)):
        raise TypeError(f"n_points must be an integer, got {type(n_points).__name__}")
    if not _is_power_of_two(int(n_points)) or n_points < 8:
        raise ValueError(f"n_points must be a power of two >= 8, got {n_points}")
    if not (z_max > z_min):
        raise ValueError(f"degenerate interval: z_min={z_min}, z_max={z_max}")
    if not (np.isfinite(z_min) and np.isfinite(z_max)):
        raise ValueError("grid bounds must be finite")
    return SpatialGrid(float(z_min), float(z_max), int(n_points))
