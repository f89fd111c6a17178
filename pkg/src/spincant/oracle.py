"""Brute-force dense reference propagator for validating the fast core.

Builds the full 2n x 2n Hamiltonian of one component pair (the two pairs
obey identical equations) with the kinetic block formed by conjugating the
diagonal p^2/2 with the discrete Fourier matrix, so the operator semantics
match the spectral fast path exactly. Evolution applies exact matrix
exponentials of midpoint-frozen Hamiltonians via Hermitian
eigendecomposition. Cost guards keep this to small grids only.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .grid import SpatialGrid
from .params import PhysicalParams, SimConfig
from .schedules import DriveSchedule
from .spinor import POSITION, SpinorField

MAX_ORACLE_POINTS = 256


@dataclass(frozen=True)
class DenseHamiltonian:
    """Hermitian (here: real symmetric) pair Hamiltonian at a fixed time.

    Basis ordering: first the n grid values of the s1=up component, then the
    n grid values of the s1=down component. Both component pairs obey the
    same matrix.
    """

    grid: SpatialGrid
    tau: float
    matrix: np.ndarray

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))


@lru_cache(maxsize=8)
def _kinetic_block(grid: SpatialGrid) -> np.ndarray:
    n = grid.n_points
    j = np.arange(n)
    fourier = np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    p2_half = 0.5 * grid.momenta ** 2
    kin = (fourier.conj().T * p2_half) @ fourier
    # p^2 is symmetric under k -> n-k, so this circulant is exactly real;
    # dropping the ~1e-13 imaginary round-off lets the evolution use the
    # much faster real-symmetric eigensolver
    return np.ascontiguousarray(kin.real)


def assemble(grid: SpatialGrid, params: PhysicalParams, s: DriveSchedule,
             tau: float) -> DenseHamiltonian:
    """Dense pair Hamiltonian: kinetic + harmonic potential on both diagonal
    blocks, the sweep/coupling tilt with opposite signs, and -eps/2 identity
    off-diagonal blocks."""
    n = grid.n_points
    if n > MAX_ORACLE_POINTS:
        raise ValueError(
            f"oracle limited to {MAX_ORACLE_POINTS} grid points, got {n}"
        )
    kin = _kinetic_block(grid)
    z = grid.z
    tilt = 0.5 * s.phi_dot(tau) - params.eta * z
    harm = 0.5 * z ** 2
    h = np.zeros((2 * n, 2 * n))
    h[:n, :n] = kin + np.diag(harm + tilt)
    h[n:, n:] = kin + np.diag(harm - tilt)
    off = -0.5 * s.epsilon(tau) * np.eye(n)
    h[:n, n:] = off
    h[n:, :n] = off
    return DenseHamiltonian(grid, tau, h)


def oracle_evolve(f0: SpinorField, cfg: SimConfig, s: DriveSchedule,
                  dt_oracle: float | None = None) -> SpinorField:
    """Evolve by exact exponentials of midpoint-frozen Hamiltonians.

    dt_oracle defaults to cfg.dt / 4 and may only be smaller: the
    piecewise-constant approximation must out-resolve the integrator it
    polices.
    """
    if f0.space != POSITION:
        raise ValueError("oracle_evolve requires a position-space field")
    if dt_oracle is None:
        dt_oracle = cfg.dt / 4.0
    if dt_oracle > cfg.dt / 4.0 + 1e-15:
        raise ValueError("dt_oracle must be at most dt/4")
    grid = cfg.grid
    n = grid.n_points
    if n > MAX_ORACLE_POINTS:
        raise ValueError(
            f"oracle limited to {MAX_ORACLE_POINTS} grid points, got {n}"
        )
    n_sub = max(1, int(round(cfg.t_final / dt_oracle)))
    h_sub = cfg.t_final / n_sub

    comp = f0.components
    # columns: the s2=up pair and the s2=down pair, stacked (up-block, down-block)
    psi = np.empty((2 * n, 2), dtype=np.complex128)
    psi[:n, 0], psi[n:, 0] = comp[0, 0], comp[1, 0]
    psi[:n, 1], psi[n:, 1] = comp[0, 1], comp[1, 1]

    for k in range(n_sub):
        h = assemble(grid, cfg.physical, s, (k + 0.5) * h_sub).matrix
        w, v = sla.eigh(h, driver="evd", check_finite=False)
        psi = (v * np.exp(-1j * w * h_sub)) @ (v.T @ psi)

    out = f0.copy()
    out.components[0, 0], out.components[1, 0] = psi[:n, 0], psi[n:, 0]
    out.components[0, 1], out.components[1, 1] = psi[:n, 1], psi[n:, 1]
    return out
