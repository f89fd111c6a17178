"""Four-component spinor field of the cantilever + two-spin system.

The state is

    Psi(z) = u_uu|up,up> + u_ud|up,dn> + u_du|dn,up> + u_dd|dn,dn>

stored as one complex array of shape (2, 2, n): first index is the driven
spin s1, second the remote spin s2 (0 = up, 1 = down), last the grid point.

The equations of motion never couple different s2 values, so the total
probability in each s2 column ("pair mass") is a constant of motion.
"""

from dataclasses import dataclass

import numpy as np

from .grid import SpatialGrid

POSITION = "position"
MOMENTUM = "momentum"

# fraction of grid points on each side watched by the edge-leak monitor,
# and the probability each side is allowed to hold
EDGE_FRACTION = 0.05
EDGE_LEAK_LIMIT = 1e-6


@dataclass
class SpinorField:
    grid: SpatialGrid
    components: np.ndarray  # complex128, shape (2, 2, n_points)
    space: str = POSITION

    def __post_init__(self):
        c = np.asarray(self.components)
        if c.shape != (2, 2, self.grid.n_points):
            raise ValueError(
                f"components shape {c.shape} does not match grid "
                f"(expected (2, 2, {self.grid.n_points}))"
            )
        if c.dtype != np.complex128:
            c = c.astype(np.complex128)
        self.components = c
        if self.space not in (POSITION, MOMENTUM):
            raise ValueError(f"unknown representation tag: {self.space!r}")

    def copy(self) -> "SpinorField":
        return SpinorField(self.grid, self.components.copy(), self.space)


def zero_field(grid: SpatialGrid) -> SpinorField:
    return SpinorField(grid, np.zeros((2, 2, grid.n_points), dtype=np.complex128))


def coherent_packet(grid: SpatialGrid, alpha: complex) -> np.ndarray:
    """Minimum-uncertainty oscillator packet with mean coordinate sqrt(2)*Re(alpha).

    u(z) = pi^(-1/4) exp[-(z - sqrt(2) mu)^2 / 2 + i sqrt(2) nu z],
    mu = Re(alpha), nu = Im(alpha). The constant global phase is dropped.
    """
    mu = np.real(alpha)
    nu = np.imag(alpha)
    z = grid.z
    return np.pi ** -0.25 * np.exp(-0.5 * (z - np.sqrt(2.0) * mu) ** 2 + 1j * np.sqrt(2.0) * nu * z)


def initial_state(grid: SpatialGrid, alpha: complex) -> SpinorField:
    """Coherent cantilever packet times the entangled pair (|uu> + |dd>)/sqrt(2)."""
    f = zero_field(grid)
    packet = coherent_packet(grid, alpha) / np.sqrt(2.0)
    f.components[0, 0] = packet
    f.components[1, 1] = packet
    return f


def field_norm2(f: SpinorField) -> float:
    """Total probability: sum over components and grid of |u|^2 times the cell size."""
    w = f.grid.dz if f.space == POSITION else f.grid.dp
    return float(np.sum(np.abs(f.components) ** 2) * w)


def pair_masses(f: SpinorField) -> tuple[float, float]:
    """Probability in the s2=up pair (u_uu, u_du) and the s2=down pair (u_ud, u_dd).

    Both are conserved under evolution; they sum to the total norm^2.
    """
    if f.space != POSITION:
        raise ValueError("pair_masses requires a position-space field")
    dens = np.abs(f.components) ** 2
    m_up2 = float(np.sum(dens[:, 0, :]) * f.grid.dz)
    m_dn2 = float(np.sum(dens[:, 1, :]) * f.grid.dz)
    return m_up2, m_dn2


def to_momentum(f: SpinorField) -> SpinorField:
    """Continuum-normalized momentum representation on the grid's FFT frequencies.

    u~(p_k) = dz/sqrt(2 pi) * exp(-i p_k z_min) * sum_j u(z_j) exp(-2 pi i k j / n),
    so that sum_k |u~|^2 dp equals sum_j |u|^2 dz (Parseval).
    """
    if f.space != POSITION:
        raise ValueError("field is already in momentum space")
    g = f.grid
    phase = np.exp(-1j * g.momenta * g.z_min)
    comp = np.fft.fft(f.components, axis=-1) * (g.dz / np.sqrt(2.0 * np.pi)) * phase
    return SpinorField(g, comp, MOMENTUM)


def to_position(f: SpinorField) -> SpinorField:
    if f.space != MOMENTUM:
        raise ValueError("field is already in position space")
    g = f.grid
    phase = np.exp(1j * g.momenta * g.z_min)
    comp = np.fft.ifft(f.components * phase, axis=-1) * (np.sqrt(2.0 * np.pi) / g.dz)
    return SpinorField(g, comp, POSITION)


def edge_leak(f: SpinorField) -> tuple[float, float]:
    """Probability in the outer EDGE_FRACTION of grid points on each side."""
    if f.space != POSITION:
        raise ValueError("edge_leak requires a position-space field")
    n = f.grid.n_points
    m = max(1, int(round(EDGE_FRACTION * n)))
    dens = np.sum(np.abs(f.components) ** 2, axis=(0, 1))
    left = float(np.sum(dens[:m]) * f.grid.dz)
    right = float(np.sum(dens[n - m:]) * f.grid.dz)
    return left, right
