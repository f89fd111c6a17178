"""Time-dependent drive schedules: rf amplitude eps(tau) and phase rate phi_dot(tau).

The production schedule ("paper-eq6") ramps the rf amplitude linearly to a
plateau while phi_dot sweeps linearly up to the switch time, then oscillates
sinusoidally at the cantilever frequency. That periodic sweep of the
effective field performs a cyclic adiabatic inversion of the driven spin,
which resonantly pumps the cantilever.

Schedules are pure: the same tau always gives the same value. A registry
keyed by identifier lets sweep drivers substitute custom schedules.
"""

import math
from dataclasses import dataclass

__all__ = [
    "DriveSchedule",
    "CyclicInversionSchedule",
    "SineToySchedule",
    "effective_field",
    "make_schedule",
    "register_schedule",
    "schedule_ids",
]


class DriveSchedule:
    """Base class; concrete schedules define epsilon(tau) and phi_dot(tau)."""

    schedule_id: str = ""

    def epsilon(self, tau: float) -> float:
        raise NotImplementedError

    def phi_dot(self, tau: float) -> float:
        raise NotImplementedError

    def params(self) -> dict[str, float]:
        raise NotImplementedError

    def max_abs_phi_dot(self, t_final: float, n_samples: int = 100_000) -> float:
        """Sampled bound on |phi_dot| over [0, t_final] (schedules are smooth
        on the 2*pi cantilever scale, so dense uniform sampling is adequate)."""
        if t_final <= 0.0:
            return abs(self.phi_dot(0.0))
        h = t_final / n_samples
        return max(abs(self.phi_dot(k * h)) for k in range(n_samples + 1))

    @staticmethod
    def _check_tau(tau: float) -> None:
        if tau < 0.0:
            raise ValueError(f"schedule evaluated at negative time: tau={tau}")


@dataclass(frozen=True)
class CyclicInversionSchedule(DriveSchedule):
    """Linear rf ramp to a plateau; phi_dot sweeps linearly, then runs sinusoidally.

    eps(tau)     = ramp_slope * tau            for tau <= switch_time
                 = plateau                     after
    phi_dot(tau) = sweep_start + sweep_slope * tau          for tau <= switch_time
                 = mod_amplitude * sin(tau - switch_time)   after

    The defaults make both functions continuous at the switch.
    """

    ramp_slope: float = 20.0
    plateau: float = 400.0
    sweep_start: float = -600.0
    sweep_slope: float = 30.0
    mod_amplitude: float = 1000.0
    switch_time: float = 20.0

    schedule_id = "paper-eq6"

    def __post_init__(self):
        if self.ramp_slope < 0.0 or self.plateau < 0.0:
            raise ValueError("rf amplitude must stay non-negative")
        if self.switch_time < 0.0:
            raise ValueError("switch_time must be non-negative")

    def epsilon(self, tau: float) -> float:
        self._check_tau(tau)
        if tau <= self.switch_time:
            return self.ramp_slope * tau
        return self.plateau

    def phi_dot(self, tau: float) -> float:
        self._check_tau(tau)
        if tau <= self.switch_time:
            return self.sweep_start + self.sweep_slope * tau
        return self.mod_amplitude * math.sin(tau - self.switch_time)

    def params(self) -> dict[str, float]:
        return {
            "ramp_slope": self.ramp_slope,
            "plateau": self.plateau,
            "sweep_start": self.sweep_start,
            "sweep_slope": self.sweep_slope,
            "mod_amplitude": self.mod_amplitude,
            "switch_time": self.switch_time,
        }

    def max_abs_phi_dot(self, t_final: float, n_samples: int = 100_000) -> float:
        # piecewise form has an analytic bound
        ramp_end = min(t_final, self.switch_time)
        m = max(abs(self.sweep_start), abs(self.sweep_start + self.sweep_slope * ramp_end))
        if t_final > self.switch_time:
            m = max(m, abs(self.mod_amplitude))
        return m


@dataclass(frozen=True)
class SineToySchedule(DriveSchedule):
    """Constant rf amplitude with a sinusoidal phase rate; used for small
    validation instances (eps_const=0, phidot_amplitude=0 gives a free
    oscillator)."""

    eps_const: float = 5.0
    phidot_amplitude: float = 2.0
    phidot_omega: float = 1.0

    schedule_id = "toy-sine"

    def __post_init__(self):
        if self.eps_const < 0.0:
            raise ValueError("rf amplitude must stay non-negative")

    def epsilon(self, tau: float) -> float:
        self._check_tau(tau)
        return self.eps_const

    def phi_dot(self, tau: float) -> float:
        self._check_tau(tau)
        return self.phidot_amplitude * math.sin(self.phidot_omega * tau)

    def params(self) -> dict[str, float]:
        return {
            "eps_const": self.eps_const,
            "phidot_amplitude": self.phidot_amplitude,
            "phidot_omega": self.phidot_omega,
        }

    def max_abs_phi_dot(self, t_final: float, n_samples: int = 100_000) -> float:
        return abs(self.phidot_amplitude)


def effective_field(s: DriveSchedule, tau: float) -> tuple[float, float, float]:
    """Effective magnetic field (eps, 0, -phi_dot) seen by the driven spin in
    the rotating frame. The small position-dependent correction from the
    cantilever coupling is deliberately excluded."""
    return (s.epsilon(tau), 0.0, -s.phi_dot(tau))


_REGISTRY: dict[str, type] = {
    "paper-eq6": CyclicInversionSchedule,
    "toy-sine": SineToySchedule,
}


def register_schedule(schedule_id: str, factory: type) -> None:
    """Register a schedule class under an identifier (sweep extension point)."""
    _REGISTRY[schedule_id] = factory


def schedule_ids() -> list[str]:
    return sorted(_REGISTRY)


def make_schedule(schedule_id: str, params: dict[str, float] | None = None) -> DriveSchedule:
    """Instantiate a registered schedule; unknown ids and unknown parameter
    names are errors (typo guard)."""
    if schedule_id not in _REGISTRY:
        raise ValueError(
            f"unknown schedule {schedule_id!r}; known: {', '.join(schedule_ids())}"
        )
    cls = _REGISTRY[schedule_id]
    params = dict(params or {})
    if hasattr(cls, "__dataclass_fields__"):
        unknown = set(params) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(
                f"unknown parameter(s) for schedule {schedule_id!r}: "
                f"{', '.join(sorted(unknown))}"
            )
    return cls(**params)
