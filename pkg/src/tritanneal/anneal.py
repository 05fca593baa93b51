"""Trit simulated annealing with single-site Metropolis updates.

One sweep performs N updates; each picks a site uniformly at random,
proposes one of the two alternative trit values uniformly (symmetric
proposal), and accepts with probability min{1, exp(-dE/T)}.  The
temperature follows the shared annealing schedule across sweeps.

Restarts use independent, reproducible Philox streams keyed by
(seed, restart_index); the stream identity is what output metadata
records as the PRNG.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .chain import ChainInstance, classical_energy, exact_ground_state, validate_config
from .schedules import Schedule, sweep_temperature_grid

PRNG_IDENTITY = "numpy.random.Philox(key=(seed, restart_index)); draw order: initial config, then per-run (S,N) site/proposal/uniform blocks"

# Full energy recompute cadence, to cap incremental-update drift.
RECOMPUTE_EVERY = 100

TEMPERATURE_MODES = ("temperature", "inverse")


@dataclass(frozen=True)
class TARunConfig:
    """Budget and reproducibility knobs for one annealing experiment.

    temperature_mode selects how the schedule value is read: as the
    temperature itself ("temperature", the default) or as an inverse
    temperature ("inverse"), for sensitivity checks.
    """

    sweeps: int
    restarts: int
    seed: int
    schedule: Schedule
    energy_tol: float = 1e-6
    temperature_mode: str = "temperature"

    def __post_init__(self) -> None:
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if not self.energy_tol > 0:
            raise ValueError("energy_tol must be positive")
        if self.temperature_mode not in TEMPERATURE_MODES:
            raise ValueError(f"temperature_mode must be one of {TEMPERATURE_MODES}")


@dataclass(frozen=True)
class TARunResult:
    final_energies: np.ndarray
    success_probability: float
    ground_energy: float


def local_energy(inst: ChainInstance, values: np.ndarray, site: int, m: int) -> float:
    """Energy carried by site i if it held value m, with the rest of the
    configuration fixed: -J*m*sum(neighbour values) - h*m + D*m**2."""
    s = validate_config(values, inst.N)
    if not 0 <= site < inst.N:
        raise ValueError(f"site {site} out of range for {inst.N} sites")
    if m not in (-1, 0, 1):
        raise ValueError(f"trit value must be in {{-1, 0, +1}}, got {m!r}")
    nb = 0.0
    if site > 0:
        nb += float(s[site - 1])
    if site < inst.N - 1:
        nb += float(s[site + 1])
    return -inst.J * m * nb - inst.h * m + inst.D * m * m


def delta_energy(inst: ChainInstance, values: np.ndarray, site: int, m_new: int) -> float:
    """Energy change of the single-site move s[site] -> m_new.

    Equals the full-energy difference exactly, computed from local terms.
    """
    s = validate_config(values, inst.N)
    if not 0 <= site < inst.N:
        raise ValueError(f"site {site} out of range for {inst.N} sites")
    if m_new not in (-1, 0, 1):
        raise ValueError(f"trit value must be in {{-1, 0, +1}}, got {m_new!r}")
    if m_new == s[site]:
        raise ValueError("proposed value equals the current value")
    return local_energy(inst, s, site, m_new) - local_energy(inst, s, site, int(s[site]))


@njit(cache=True)
def _sweep_kernel(values, J, h, D, temperature, sites, props, uniforms):  # pragma: no cover
    """One sweep of N single-site Metropolis updates, in place.

    Returns the accumulated accepted energy change.  Proposal convention:
    the two alternatives to the current value, in ascending order, indexed
    by the 0/1 proposal draw.
    """
    n = values.size
    accumulated = 0.0
    for u in range(n):
        i = sites[u]
        m = values[i]
        # alternatives to m in ascending order
        if m == -1:
            m_new = 0 if props[u] == 0 else 1
        elif m == 0:
            m_new = -1 if props[u] == 0 else 1
        else:
            m_new = -1 if props[u] == 0 else 0
        nb = 0.0
        if i > 0:
            nb += values[i - 1]
        if i < n - 1:
            nb += values[i + 1]
        d_e = -(m_new - m) * (J * nb + h) + D * (m_new * m_new - m * m)
        if d_e <= 0.0 or uniforms[u] < np.exp(-d_e / temperature):
            values[i] = m_new
            accumulated += d_e
    return accumulated


@njit(cache=True)
def _config_energy_kernel(values, J, h, D):  # pragma: no cover
    n = values.size
    bond = 0.0
    field = 0.0
    quad = 0.0
    for i in range(n):
        if i < n - 1:
            bond += values[i] * values[i + 1]
        field += values[i]
        quad += values[i] * values[i]
    return -J * bond - h * field + D * quad


@njit(cache=True)
def _restart_kernel(values, J, h, D, temps, sites, props, uniforms):  # pragma: no cover
    """All sweeps of one restart; tracks the running energy incrementally
    with a periodic full recompute, and returns (final, trajectory min)."""
    energy = _config_energy_kernel(values, J, h, D)
    traj_min = energy
    n_sweeps = temps.size
    for k in range(n_sweeps):
        energy += _sweep_kernel(values, J, h, D, temps[k], sites[k], props[k], uniforms[k])
        if (k + 1) % RECOMPUTE_EVERY == 0:
            energy = _config_energy_kernel(values, J, h, D)
        if energy < traj_min:
            traj_min = energy
    return energy, traj_min


def metropolis_sweep(
    inst: ChainInstance, values: np.ndarray, temperature: float, rng: np.random.Generator
) -> np.ndarray:
    """One Metropolis sweep (N single-site updates) at fixed temperature.

    Returns the updated configuration; the input is left untouched.
    """
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature!r}")
    s = validate_config(values, inst.N).copy()
    sites = rng.integers(0, inst.N, inst.N)
    props = rng.integers(0, 2, inst.N)
    uniforms = rng.random(inst.N)
    _sweep_kernel(s, inst.J, inst.h, inst.D, float(temperature), sites, props, uniforms)
    return s


def restart_rng(seed: int, restart_index: int) -> np.random.Generator:
    """The reproducible stream for one restart."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, restart_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def ta_run(inst: ChainInstance, cfg: TARunConfig) -> TARunResult:
    """Full annealing experiment: R independent restarts of S sweeps each.

    Each restart draws a uniform random initial configuration, cools along
    the schedule grid, and records its terminal energy.  Success counts
    terminal energies within energy_tol of the exhaustive ground energy.
    """
    e0, _ = exact_ground_state(inst)
    temps = sweep_temperature_grid(
        cfg.schedule, cfg.sweeps, invert=(cfg.temperature_mode == "inverse")
    )
    finals = np.empty(cfg.restarts)
    for r in range(cfg.restarts):
        rng = restart_rng(cfg.seed, r)
        values = rng.integers(-1, 2, inst.N).astype(np.int8)
        sites = rng.integers(0, inst.N, (cfg.sweeps, inst.N))
        props = rng.integers(0, 2, (cfg.sweeps, inst.N))
        uniforms = rng.random((cfg.sweeps, inst.N))
        _restart_kernel(values, inst.J, inst.h, inst.D, temps, sites, props, uniforms)
        finals[r] = classical_energy(inst, values)
    success = float(np.mean(np.abs(finals - e0) <= cfg.energy_tol))
    return TARunResult(final_energies=finals, success_probability=success, ground_energy=e0)
