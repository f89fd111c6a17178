"""Observable sampling during evolution and the resulting run record."""

import platform
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import EdgeLeakError
from .observables import (
    DecompositionUnavailableError,
    decompose_cat,
    find_peaks,
    position_distribution,
    spin_expectations,
)
from .params import SimConfig
from .spinor import EDGE_LEAK_LIMIT, SpinorField, edge_leak, field_norm2, pair_masses

# timeseries.csv column order; peak1/peak2 are the two most massive peaks
# (by position), branch columns are NaN until the cat decomposition exists
TIMESERIES_COLUMNS = [
    "tau", "norm2", "mass_up2", "mass_down2", "z_mean",
    "s1_x", "s1_y", "s1_z", "s2_z",
    "n_peaks",
    "peak1_z", "peak1_height", "peak1_mass",
    "peak2_z", "peak2_height", "peak2_mass",
    "branch_a_z", "branch_b_z", "branch_a_mass", "branch_b_mass",
    "p_up2_a", "p_up2_b", "residual_a", "residual_b",
]

NAN = float("nan")


@dataclass
class SampleRow:
    tau: float
    norm2: float
    mass_up2: float
    mass_down2: float
    z_mean: float
    s1_x: float
    s1_y: float
    s1_z: float
    s2_z: float
    n_peaks: int
    peak1_z: float = NAN
    peak1_height: float = NAN
    peak1_mass: float = NAN
    peak2_z: float = NAN
    peak2_height: float = NAN
    peak2_mass: float = NAN
    branch_a_z: float = NAN
    branch_b_z: float = NAN
    branch_a_mass: float = NAN
    branch_b_mass: float = NAN
    p_up2_a: float = NAN
    p_up2_b: float = NAN
    residual_a: float = NAN
    residual_b: float = NAN

    def values(self) -> list[float]:
        return [getattr(self, name) for name in TIMESERIES_COLUMNS]


@dataclass(frozen=True)
class Provenance:
    code_version: str
    platform: str
    wall_seconds: float
    dt: float
    n_steps: int
    grid: tuple[float, float, int]


@dataclass
class RunRecord:
    """Everything a run produces: config echo, observable rows, snapshots."""

    config: SimConfig
    rows: list[SampleRow]
    snapshots: list[tuple[float, SpinorField]]
    provenance: Provenance

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def sample_row(tau: float, f: SpinorField, peak_threshold: float,
               merge_width: float) -> SampleRow:
    """Compute one observable row; raises EdgeLeakError when probability
    reaches the monitored edge bands."""
    left, right = edge_leak(f)
    if left > EDGE_LEAK_LIMIT or right > EDGE_LEAK_LIMIT:
        raise EdgeLeakError(
            f"probability reached the grid edge at tau={tau:.6g} "
            f"(left={left:.3e}, right={right:.3e}, limit={EDGE_LEAK_LIMIT:.0e}); "
            f"widen the domain"
        )
    with np.errstate(invalid="ignore"):  # NaN fields are caught by the evolve guard
        dist = position_distribution(f)
        m_up2, m_dn2 = pair_masses(f)
        spins = spin_expectations(f)
        z_mean = float(np.sum(f.grid.z * dist.values) * f.grid.dz / dist.mass)
        peaks = find_peaks(dist, threshold=peak_threshold, merge_width=merge_width)
    row = SampleRow(
        tau=tau,
        norm2=field_norm2(f),
        mass_up2=m_up2,
        mass_down2=m_dn2,
        z_mean=z_mean,
        s1_x=spins.s1_bloch[0],
        s1_y=spins.s1_bloch[1],
        s1_z=spins.s1_bloch[2],
        s2_z=spins.s2_z,
        n_peaks=len(peaks),
    )
    main = sorted(sorted(peaks, key=lambda p: p.mass, reverse=True)[:2],
                  key=lambda p: p.position)
    if len(main) >= 1:
        row.peak1_z, row.peak1_height, row.peak1_mass = (
            main[0].position, main[0].height, main[0].mass)
    if len(main) >= 2:
        row.peak2_z, row.peak2_height, row.peak2_mass = (
            main[1].position, main[1].height, main[1].mass)
    try:
        cat = decompose_cat(f, peaks)
    except DecompositionUnavailableError:
        return row
    row.branch_a_z = cat.branch_a.centroid
    row.branch_b_z = cat.branch_b.centroid
    row.branch_a_mass = cat.branch_a.mass
    row.branch_b_mass = cat.branch_b.mass
    row.p_up2_a = cat.branch_a.p_up2
    row.p_up2_b = cat.branch_b.p_up2
    row.residual_a = cat.branch_a.residual
    row.residual_b = cat.branch_b.residual
    return row


@dataclass
class ObservableSinks:
    """Collects observable rows and field snapshots during evolve."""

    peak_threshold: float
    merge_width: float
    snapshot_steps: dict[int, float]  # step index -> snapped tau
    rows: list[SampleRow] = field(default_factory=list)
    snapshots: list[tuple[float, SpinorField]] = field(default_factory=list)
    _t0: float = field(default_factory=time.perf_counter)

    @classmethod
    def from_config(cls, cfg: SimConfig) -> "ObservableSinks":
        steps: dict[int, float] = {}
        for ts in cfg.snapshot_times:
            k = int(round(ts / cfg.dt))
            k = min(k, cfg.n_steps())
            steps.setdefault(k, k * cfg.dt)  # snapped value is what gets recorded
        return cls(cfg.peak_threshold, cfg.merge_width, steps)

    def emit(self, tau: float, f: SpinorField) -> None:
        self.rows.append(sample_row(tau, f, self.peak_threshold, self.merge_width))

    def snapshot(self, tau: float, f: SpinorField) -> None:
        self.snapshots.append((tau, f.copy()))


def collect_provenance(cfg: SimConfig, n_steps: int,
                       t0: float | None = None) -> Provenance:
    wall = time.perf_counter() - t0 if t0 is not None else 0.0
    return Provenance(
        code_version=__version__,
        platform=platform.platform(),
        wall_seconds=wall,
        dt=cfg.dt,
        n_steps=n_steps,
        grid=(cfg.grid.z_min, cfg.grid.z_max, cfg.grid.n_points),
    )
