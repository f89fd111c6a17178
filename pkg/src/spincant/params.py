"""Physical parameters and the full simulation configuration."""

from dataclasses import dataclass

import numpy as np

from .grid import SpatialGrid
from .schedules import DriveSchedule, make_schedule

# phase advance allowed per step from the spin-sweep term, dt * max|phi_dot| / 2
PHASE_ADVANCE_BOUND = 0.25

DEFAULT_PEAK_THRESHOLD = 0.1
DEFAULT_MERGE_WIDTH = 2.0


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionless spin-cantilever coupling eta and initial coherent amplitude alpha.

    The rf carrier is kept on the spin's Larmor frequency, so the detuning
    field exists only as a placeholder and must stay zero.
    """

    eta: float
    alpha: complex
    larmor_detuning: float = 0.0

    def __post_init__(self):
        if self.eta < 0.0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.larmor_detuning != 0.0:
            raise ValueError("larmor_detuning is fixed at zero")

    @property
    def z0(self) -> float:
        """Mean initial cantilever coordinate, sqrt(2) * Re(alpha)."""
        return float(np.sqrt(2.0) * np.real(self.alpha))


@dataclass(frozen=True)
class SimConfig:
    physical: PhysicalParams
    grid: SpatialGrid
    dt: float
    t_final: float
    schedule_id: str
    schedule_params: tuple[tuple[str, float], ...] = ()
    snapshot_times: tuple[float, ...] = ()
    observable_stride: int = 1
    output_dir: str = "run-output"
    peak_threshold: float = DEFAULT_PEAK_THRESHOLD
    merge_width: float = DEFAULT_MERGE_WIDTH

    def schedule(self) -> DriveSchedule:
        return make_schedule(self.schedule_id, dict(self.schedule_params))

    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt)) if self.t_final > 0.0 else 0


def validate_config(cfg: SimConfig) -> SimConfig:
    """Check the cross-field invariants; returns cfg so calls can be chained."""
    if not (cfg.dt > 0.0):
        raise ValueError(f"dt must be positive, got {cfg.dt}")
    if cfg.t_final < 0.0:
        raise ValueError(f"t_final must be non-negative, got {cfg.t_final}")
    for ts in cfg.snapshot_times:
        if ts < 0.0 or ts > cfg.t_final:
            raise ValueError(
                f"snapshot time {ts} outside [0, t_final={cfg.t_final}]"
            )
    if cfg.observable_stride < 1:
        raise ValueError(f"observable_stride must be >= 1, got {cfg.observable_stride}")
    if not (0.0 < cfg.peak_threshold < 1.0):
        raise ValueError(f"peak_threshold must lie in (0, 1), got {cfg.peak_threshold}")
    if cfg.merge_width < 0.0:
        raise ValueError(f"merge_width must be non-negative, got {cfg.merge_width}")
    sched = cfg.schedule()  # also validates id and parameter names
    advance = cfg.dt * sched.max_abs_phi_dot(cfg.t_final) / 2.0
    if advance > PHASE_ADVANCE_BOUND:
        raise ValueError(
            f"dt too large for this schedule: phase advance per step "
            f"{advance:.3g} exceeds {PHASE_ADVANCE_BOUND}"
        )
    return cfg
