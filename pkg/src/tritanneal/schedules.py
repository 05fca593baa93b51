"""Annealing schedule family g(t) = c / f(t).

Four decay profiles are supported, f(t) in {log(1+t), sqrt(t), t, t**2}.
All profiles diverge at t = 0, so evaluation is restricted to t >= t_floor.
When a schedule is built with t_floor=None the floor is derived by the
consumer from its own grid spacing (half the step for the quantum
evolution, half the sweep spacing for the classical cooling grid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PROFILES = ("log", "sqrt", "linear", "quadratic")

# Fallback floor for direct evaluations with no natural grid spacing
# (e.g. spectral scans): half of the smallest contemplated time step.
DEFAULT_T_FLOOR = 5e-4


@dataclass(frozen=True)
class Schedule:
    """Driver-amplitude schedule g(t) = c / f(t) over a total time T_total.

    c is commonly one of {1, 5, 10, 20}, but any positive scale is accepted.
    """

    profile: str
    c: float
    T_total: float
    t_floor: float | None = None

    def __post_init__(self) -> None:
        if self.profile not in PROFILES:
            raise ValueError(f"unknown profile {self.profile!r}, expected one of {PROFILES}")
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"scale c must be positive and finite, got {self.c!r}")
        if not (self.T_total > 0 and math.isfinite(self.T_total)):
            raise ValueError(f"T_total must be positive and finite, got {self.T_total!r}")
        if self.t_floor is not None and not self.t_floor > 0:
            raise ValueError(f"t_floor must be positive when given, got {self.t_floor!r}")

    def effective_floor(self, spacing: float) -> float:
        """The evaluation floor: explicit t_floor if set, else half the grid spacing."""
        return self.t_floor if self.t_floor is not None else 0.5 * spacing


def _f_array(profile: str, t: np.ndarray) -> np.ndarray:
    if profile == "log":
        return np.log1p(t)
    if profile == "sqrt":
        return np.sqrt(t)
    if profile == "linear":
        return np.asarray(t, dtype=np.float64)
    return np.asarray(t, dtype=np.float64) ** 2


def _check_time(sched: Schedule, t: float) -> None:
    floor = sched.t_floor if sched.t_floor is not None else 0.0
    if not t > 0 or t < floor:
        raise ValueError(f"schedule evaluated at t={t!r}, below its floor {floor!r}")


def g_of_t(sched: Schedule, t: float) -> float:
    """Driver amplitude c / f(t); strictly decreasing on t >= t_floor."""
    _check_time(sched, t)
    return sched.c / float(_f_array(sched.profile, np.float64(t)))


def g_dot(sched: Schedule, t: float) -> float:
    """Closed-form time derivative of g(t) = c / f(t)."""
    _check_time(sched, t)
    c = sched.c
    if sched.profile == "log":
        return -c / ((1.0 + t) * math.log1p(t) ** 2)
    if sched.profile == "sqrt":
        return -c / (2.0 * t ** 1.5)
    if sched.profile == "linear":
        return -c / t ** 2
    return -2.0 * c / t ** 3


def g_values(sched: Schedule, times: np.ndarray) -> np.ndarray:
    """Vectorized g(t) over an array of times already guaranteed >= floor."""
    return sched.c / _f_array(sched.profile, np.asarray(times, dtype=np.float64))


def classical_temperature(sched: Schedule, sweep_index: int, total_sweeps: int) -> float:
    """Cooling temperature for Monte Carlo sweep k of S.

    The sweep grid maps onto the schedule's time axis at midpoints,
    t_k = t_floor + (k + 1/2) * (T_total / S), and the temperature is taken
    to follow the driver amplitude itself: T(k) = g(t_k).  Strictly
    decreasing in k and strictly positive.
    """
    if not 0 <= sweep_index < total_sweeps:
        raise ValueError(
            f"sweep index {sweep_index} out of range for {total_sweeps} sweeps"
        )
    spacing = sched.T_total / total_sweeps
    floor = sched.effective_floor(spacing)
    t_k = floor + (sweep_index + 0.5) * spacing
    return g_of_t(sched, t_k)


def sweep_temperature_grid(sched: Schedule, total_sweeps: int, invert: bool = False) -> np.ndarray:
    """Temperatures for all S sweeps at once.

    With invert=True the schedule value is read as an inverse temperature
    instead (T = 1/g), the alternative interpretation of cooling along the
    same shape; the default follows classical_temperature.
    """
    if total_sweeps < 1:
        raise ValueError("total_sweeps must be >= 1")
    spacing = sched.T_total / total_sweeps
    floor = sched.effective_floor(spacing)
    t_k = floor + (np.arange(total_sweeps) + 0.5) * spacing
    g = g_values(sched, t_k)
    return 1.0 / g if invert else g
