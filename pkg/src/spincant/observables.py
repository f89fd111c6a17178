"""Everything measured from a spinor field.

Covers the position distribution P(z), peak detection, the two-branch cat
decomposition with per-branch spin data, component proportionality ratios,
spin expectation values, alignment with the effective drive field, and
extraction of the branch oscillation phases from centroid time series.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grid import SpatialGrid
from .schedules import DriveSchedule, effective_field
from .spinor import POSITION, SpinorField, pair_masses

RATIO_SUPPORT_FRACTION = 1e-3   # evaluate ratios only where P > fraction * max(P)
RATIO_MIN_DENOMINATOR_MASS = 1e-6
WINDOW = 2.0 * np.pi            # phase-fit window: one cantilever period
MIN_WINDOW_SAMPLES = 8

_SX = 0.5 * np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = 0.5 * np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = 0.5 * np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class DecompositionUnavailableError(ValueError):
    """The field does not present exactly two peaks to split between."""


class RatioUndefinedError(ValueError):
    """The denominator component carries too little probability to divide by."""


class InsufficientDataError(ValueError):
    """Not enough two-peak samples to fit branch phases."""


@dataclass(frozen=True)
class PositionDistribution:
    grid: SpatialGrid
    values: np.ndarray  # P(z_j) >= 0
    mass: float         # sum P dz, equals the field norm^2


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    mass: float
    index: int


@dataclass(frozen=True)
class BranchData:
    side: str            # "left" or "right" of the split point
    mass: float
    centroid: float
    p_up2: float         # P(s2=up | branch)
    bloch: tuple[float, float, float]  # first-spin Bloch vector on the branch
    residual: float      # 1 - largest Schmidt weight / mass; 0 = exact product


@dataclass(frozen=True)
class CatDecomposition:
    z_split: float
    branch_a: BranchData  # the branch with the larger P(s2=up)
    branch_b: BranchData


@dataclass(frozen=True)
class SpinExpectations:
    s1_bloch: tuple[float, float, float]
    s2_z: float


@dataclass(frozen=True)
class BranchPhaseSeries:
    times: np.ndarray        # input sample times
    z_a: np.ndarray          # branch centroid trajectories (NaN where unavailable)
    z_b: np.ndarray
    window_times: np.ndarray  # window centers
    phase_a: np.ndarray
    phase_b: np.ndarray
    delta_phi: np.ndarray    # unsigned phase separation, folded into [0, pi]


def position_distribution(f: SpinorField) -> PositionDistribution:
    """P(z) = sum of |u|^2 over all four components, pointwise."""
    if f.space != POSITION:
        raise ValueError("position_distribution requires a position-space field")
    values = np.sum(np.abs(f.components) ** 2, axis=(0, 1))
    return PositionDistribution(f.grid, values, float(np.sum(values) * f.grid.dz))


def find_peaks(dist: PositionDistribution, threshold: float = 0.1,
               merge_width: float = 2.0) -> list[Peak]:
    """Local maxima above threshold * max(P), merged when closer than
    merge_width; masses from a watershed split at the minimum between
    neighbouring peaks. Sorted by position."""
    vals = dist.values
    n = vals.size
    top = float(vals.max(initial=0.0))
    if top <= 0.0:
        return []
    cut = threshold * top
    idx = np.flatnonzero(
        (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:]) & (vals[1:-1] > cut)
    ) + 1
    # collapse plateaus (runs of equal-height neighbours) to their first index
    kept: list[int] = []
    for j in idx:
        if kept and j == kept[-1] + 1 and vals[j] == vals[kept[-1]]:
            continue
        kept.append(int(j))
    # merge peaks closer than merge_width, keeping the higher one
    z = dist.grid.z
    merged = True
    while merged and len(kept) > 1:
        merged = False
        for i in range(len(kept) - 1):
            if z[kept[i + 1]] - z[kept[i]] < merge_width:
                kept.pop(i + 1 if vals[kept[i]] >= vals[kept[i + 1]] else i)
                merged = True
                break
    # watershed boundaries at the minimum between consecutive peaks
    bounds = [0]
    for i in range(len(kept) - 1):
        lo, hi = kept[i], kept[i + 1]
        bounds.append(lo + int(np.argmin(vals[lo:hi + 1])))
    bounds.append(n)
    dz = dist.grid.dz
    return [
        Peak(float(z[j]), float(vals[j]), float(np.sum(vals[bounds[i]:bounds[i + 1]]) * dz), j)
        for i, j in enumerate(kept)
    ]


def _branch_data(f: SpinorField, sl: slice, side: str) -> BranchData:
    comp = f.components[:, :, sl]
    dz = f.grid.dz
    dens = np.abs(comp) ** 2
    mass = float(np.sum(dens) * dz)
    zs = f.grid.z[sl]
    centroid = float(np.sum(zs * np.sum(dens, axis=(0, 1))) * dz / mass)
    p_up2 = float(np.sum(dens[:, 0, :]) * dz / mass)
    # first-spin reduced density matrix restricted to the branch
    rho1 = np.einsum("ack,bck->ab", comp, comp.conj()) * dz / mass
    bloch = tuple(float(np.real(np.trace(rho1 @ S))) for S in (_SX, _SY, _SZ))
    # largest Schmidt weight between the cantilever and the joint spin space
    mat = comp.reshape(4, -1).T * np.sqrt(dz)
    svals = np.linalg.svd(mat, compute_uv=False)
    residual = float(1.0 - svals[0] ** 2 / mass)
    return BranchData(side, mass, centroid, p_up2, bloch, residual)


def decompose_cat(f: SpinorField, peaks: list[Peak]) -> CatDecomposition:
    """Split the field at the minimum of P(z) between two peaks and analyse
    each branch: mass, centroid, conditional remote-spin probability,
    first-spin Bloch vector, and a product-state residual (1 minus the
    largest Schmidt weight fraction; 0 means the branch factorizes exactly
    into packet x spins)."""
    if len(peaks) != 2:
        raise DecompositionUnavailableError(
            f"cat decomposition needs exactly 2 peaks, found {len(peaks)}"
        )
    dist = position_distribution(f)
    lo, hi = peaks[0].index, peaks[1].index
    j_split = lo + int(np.argmin(dist.values[lo:hi + 1]))
    left = _branch_data(f, slice(0, j_split), "left")
    right = _branch_data(f, slice(j_split, f.grid.n_points), "right")
    a, b = (left, right) if left.p_up2 >= right.p_up2 else (right, left)
    return CatDecomposition(float(f.grid.z[j_split]), a, b)


_PAIR_COMPONENTS = {
    "up2": ((0, 0), (1, 0)),   # numerator u_uu, denominator u_du
    "down2": ((0, 1), (1, 1)),  # numerator u_ud, denominator u_dd
}


def component_ratio(f: SpinorField, pair: str) -> tuple[complex, float]:
    """Least-squares complex constant c with u_num ~ c * u_den over the
    support window P > RATIO_SUPPORT_FRACTION * max(P); the residual is the
    relative L2 misfit left after removing c * u_den."""
    if pair not in _PAIR_COMPONENTS:
        raise ValueError(f"pair must be 'up2' or 'down2', got {pair!r}")
    (ni, nj), (di, dj) = _PAIR_COMPONENTS[pair]
    num = f.components[ni, nj]
    den = f.components[di, dj]
    dist = position_distribution(f)
    window = dist.values > RATIO_SUPPORT_FRACTION * dist.values.max(initial=0.0)
    den_w = den[window]
    num_w = num[window]
    den_mass = float(np.sum(np.abs(den_w) ** 2) * f.grid.dz)
    if den_mass <= RATIO_MIN_DENOMINATOR_MASS:
        raise RatioUndefinedError(
            f"denominator component mass {den_mass:.3g} below "
            f"{RATIO_MIN_DENOMINATOR_MASS} in the evaluation window"
        )
    c = complex(np.sum(den_w.conj() * num_w) / np.sum(np.abs(den_w) ** 2))
    num_power = float(np.sum(np.abs(num_w) ** 2))
    if num_power == 0.0:
        return c, 0.0
    misfit = float(np.sum(np.abs(num_w - c * den_w) ** 2))
    return c, math.sqrt(misfit / num_power)


def spin_expectations(f: SpinorField) -> SpinExpectations:
    """Bloch vector of the driven spin (traced over z and the remote spin)
    and <S_z> of the remote spin; both normalized by the field norm^2."""
    if f.space != POSITION:
        raise ValueError("spin_expectations requires a position-space field")
    comp = f.components
    dz = f.grid.dz
    norm2 = np.sum(np.abs(comp) ** 2) * dz
    if norm2 == 0.0:
        raise ValueError("cannot take expectations of a zero field")
    rho1 = np.einsum("ack,bck->ab", comp, comp.conj()) * dz / norm2
    bloch = tuple(float(np.real(np.trace(rho1 @ S))) for S in (_SX, _SY, _SZ))
    m_up2, m_dn2 = pair_masses(f)
    return SpinExpectations(bloch, 0.5 * (m_up2 - m_dn2) / float(norm2))


def alignment_angle(bloch, s: DriveSchedule, tau: float) -> float:
    """Angle between a branch Bloch vector and the nearer of +-B_eff(tau);
    the branch anti-aligned with the field therefore reports its angle to
    -B_eff, matching how the two measurement outcomes are described."""
    v = np.asarray(bloch, dtype=float)
    vn = np.linalg.norm(v)
    if vn <= 1e-6:
        raise ValueError(f"degenerate Bloch vector (|v| = {vn:.3g})")
    b = np.asarray(effective_field(s, tau))
    bn = np.linalg.norm(b)
    if bn == 0.0:
        raise ValueError(f"effective field vanishes at tau={tau}")
    return float(np.arccos(np.clip(abs(v @ b) / (vn * bn), 0.0, 1.0)))


def _fit_phase(t: np.ndarray, x: np.ndarray) -> float:
    """Phase phi of x ~ A cos(t + phi) + B by linear least squares."""
    design = np.column_stack([np.cos(t), np.sin(t), np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(design, x, rcond=None)
    return math.atan2(-coef[1], coef[0])


def track_branch_phases(times, z_a, z_b) -> BranchPhaseSeries:
    """Fit each branch centroid trajectory to A cos(tau + phi) + B over a
    sliding one-period window and report the per-window phases and their
    unsigned separation delta_phi in [0, pi].

    NaN entries (samples without two-peak data, e.g. while the branches
    cross) are skipped inside each window; a window needs at least
    MIN_WINDOW_SAMPLES valid samples for each branch.
    """
    times = np.asarray(times, dtype=float)
    z_a = np.asarray(z_a, dtype=float)
    z_b = np.asarray(z_b, dtype=float)
    valid = np.isfinite(z_a) & np.isfinite(z_b)
    if not np.any(valid):
        raise InsufficientDataError("no two-peak samples at all")
    t_valid = times[valid]
    if t_valid[-1] - t_valid[0] < 2.0 * WINDOW:
        raise InsufficientDataError(
            "need at least two oscillation periods of two-peak data, have "
            f"{t_valid[-1] - t_valid[0]:.3g} time units"
        )
    w_times, ph_a, ph_b, dphi = [], [], [], []
    for i in range(times.size):
        t0 = times[i]
        if t0 + WINDOW > times[-1]:
            break
        in_win = valid & (times >= t0) & (times < t0 + WINDOW)
        if np.count_nonzero(in_win) < MIN_WINDOW_SAMPLES:
            continue
        tw = times[in_win]
        pa = _fit_phase(tw, z_a[in_win])
        pb = _fit_phase(tw, z_b[in_win])
        sep = abs((pa - pb + np.pi) % (2.0 * np.pi) - np.pi)
        w_times.append(t0 + 0.5 * WINDOW)
        ph_a.append(pa)
        ph_b.append(pb)
        dphi.append(sep)
    if not w_times:
        raise InsufficientDataError("no window had enough two-peak samples")
    return BranchPhaseSeries(
        times, z_a, z_b,
        np.asarray(w_times), np.asarray(ph_a), np.asarray(ph_b), np.asarray(dphi),
    )
