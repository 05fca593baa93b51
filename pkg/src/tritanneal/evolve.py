"""Suzuki-Trotter time evolution of the annealing Hamiltonian.

The instantaneous Hamiltonian is H(t) = H_P + H_D(t) with a diagonal
problem part and a transverse driver H_D(t) = -g(t) * sum_i S_i^x.  A
symmetric second-order kernel

    exp(-i H_P dt/2) * exp(-i H_D dt) * exp(-i H_P dt/2)

is composed into the standard fourth-order scheme with five substeps of
relative widths (p, p, 1-4p, p, p), p = 1/(4 - 4**(1/3)); the middle
substep runs backward in time.  The driver amplitude is frozen at each
substep's own midpoint.  Time-step convergence is established by halving
dt until the final ground-state fidelity stabilizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .chain import (
    SQRT_HALF,
    ChainInstance,
    QuantumState,
    _check_dense_size,
    _rotate_all_sites,
    diagonal_of_hp,
    exact_ground_state,
)
from .errors import ConvergenceError
from .schedules import Schedule, g_values

# Fourth-order Suzuki composition constant.
P4 = 1.0 / (4.0 - 4.0 ** (1.0 / 3.0))
# Relative substep widths and the midpoints where g is sampled.
SUBSTEP_WIDTHS = np.array([P4, P4, 1.0 - 4.0 * P4, P4, P4])
SUBSTEP_MIDPOINTS = np.array(
    [0.5 * P4, 1.5 * P4, 0.5, 1.0 - 1.5 * P4, 1.0 - 0.5 * P4]
)
SUBSTEP_WIDTHS.setflags(write=False)
SUBSTEP_MIDPOINTS.setflags(write=False)


@dataclass(frozen=True)
class EvolutionConfig:
    """Controls for the Trotter integration and its convergence loop.

    T_total=None takes the total time from the schedule.  The nominal step
    dt is halved until the final fidelity changes by at most
    convergence_tol, up to max_halvings times.
    """

    dt: float = 0.1
    convergence_tol: float = 1e-4
    max_halvings: int = 6
    T_total: float | None = None

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")
        if self.max_halvings < 1:
            raise ValueError("max_halvings must be >= 1")
        if self.T_total is not None and not self.T_total > 0:
            raise ValueError("T_total must be positive when given")


@dataclass(frozen=True)
class EvolutionResult:
    state: QuantumState
    steps_used: int
    dt_used: float
    fidelity: float


def driver_ground_state(n_sites: int) -> QuantumState:
    """Product ground state of the transverse driver -g * sum_i S_i^x, g > 0.

    Per site this is the S^x eigenvector with maximal eigenvalue +1,
    v = (1/2, 1/sqrt(2), 1/2) in the (+1, 0, -1) basis.
    """
    _check_dense_size(n_sites)
    v = np.array([0.5, SQRT_HALF, 0.5], dtype=np.complex128)
    amps = np.array([1.0], dtype=np.complex128)
    for _ in range(n_sites):
        amps = np.kron(amps, v)
    return QuantumState(amps)


@njit(cache=True)
def _order2_kernel(amps, phase_half, n_sites, angle):  # pragma: no cover
    amps *= phase_half
    _rotate_all_sites(amps, n_sites, angle)
    amps *= phase_half


@njit(cache=True)
def _order4_kernel(amps, n_sites, g5, wp, wm, phase_p, phase_m):  # pragma: no cover
    _order2_kernel(amps, phase_p, n_sites, g5[0] * wp)
    _order2_kernel(amps, phase_p, n_sites, g5[1] * wp)
    _order2_kernel(amps, phase_m, n_sites, g5[2] * wm)
    _order2_kernel(amps, phase_p, n_sites, g5[3] * wp)
    _order2_kernel(amps, phase_p, n_sites, g5[4] * wp)


@njit(cache=True)
def _run_kernel(amps, diag, n_sites, g_matrix, dt):  # pragma: no cover
    wp = P4 * dt
    wm = (1.0 - 4.0 * P4) * dt
    phase_p = np.exp(-1j * diag * (0.5 * wp))
    phase_m = np.exp(-1j * diag * (0.5 * wm))
    for j in range(g_matrix.shape[0]):
        _order4_kernel(amps, n_sites, g_matrix[j], wp, wm, phase_p, phase_m)


def trotter_step_order2(
    state: QuantumState, inst: ChainInstance, g_mid: float, dt: float
) -> QuantumState:
    """One symmetric second-order step with the driver amplitude frozen at g_mid.

    The problem factor is an elementwise phase by the diagonal of H_P; the
    driver factor is the exact site-by-site rotation by angle g_mid * dt.
    """
    diag = diagonal_of_hp(inst)
    amps = state.amplitudes.copy()
    phase_half = np.exp(-1j * diag * (0.5 * dt))
    _order2_kernel(amps, phase_half, inst.N, float(g_mid) * float(dt))
    return QuantumState(amps)


def trotter_step_order4(
    state: QuantumState,
    inst: ChainInstance,
    sched: Schedule,
    t_start: float,
    dt: float,
) -> QuantumState:
    """One fourth-order step covering schedule time [t_start, t_start + dt].

    Five second-order kernels with widths SUBSTEP_WIDTHS * dt, each
    evaluated with g at its own substep midpoint.
    """
    diag = diagonal_of_hp(inst)
    g5 = g_values(sched, t_start + SUBSTEP_MIDPOINTS * dt)
    amps = state.amplitudes.copy()
    wp = P4 * dt
    wm = (1.0 - 4.0 * P4) * dt
    phase_p = np.exp(-1j * diag * (0.5 * wp))
    phase_m = np.exp(-1j * diag * (0.5 * wm))
    _order4_kernel(amps, inst.N, g5, wp, wm, phase_p, phase_m)
    return QuantumState(amps)


def _single_run(
    inst: ChainInstance, sched: Schedule, diag: np.ndarray, T_total: float, dt_nominal: float, t_floor: float
) -> tuple[np.ndarray, int, float]:
    n_steps = math.ceil(T_total / dt_nominal)
    dt = T_total / n_steps
    times = t_floor + (np.arange(n_steps)[:, None] + SUBSTEP_MIDPOINTS[None, :]) * dt
    g_matrix = g_values(sched, times)
    amps = driver_ground_state(inst.N).amplitudes.copy()
    _run_kernel(amps, diag, inst.N, g_matrix, dt)
    return amps, n_steps, dt


def _ground_weight(amps: np.ndarray, ground: list[int]) -> float:
    return float((np.abs(amps[ground]) ** 2).sum())


def aqa_success(state: QuantumState, inst: ChainInstance) -> float:
    """Total weight of the final state on the (possibly degenerate) classical
    ground set: sum over ground basis indices of |amplitude|**2."""
    _, ground = exact_ground_state(inst)
    return _ground_weight(state.amplitudes, ground)


def evolve(
    inst: ChainInstance, sched: Schedule, cfg: EvolutionConfig | None = None
) -> EvolutionResult:
    """Integrate from the driver ground state to t = T_total with dt halving.

    The full evolution runs at the nominal dt, then again at dt/2; if the
    ground-state fidelity moves by more than convergence_tol the halving
    continues, up to max_halvings.  The finer of the last two runs is
    returned.  The schedule floor is frozen at dt/2 of the *initial*
    nominal step (or the schedule's explicit t_floor) so that every run in
    the sequence integrates the same schedule.
    """
    if cfg is None:
        cfg = EvolutionConfig()
    T_total = cfg.T_total if cfg.T_total is not None else sched.T_total
    t_floor = sched.effective_floor(cfg.dt)
    diag = diagonal_of_hp(inst)
    _, ground = exact_ground_state(inst)

    amps, n_steps, dt = _single_run(inst, sched, diag, T_total, cfg.dt, t_floor)
    fids = [_ground_weight(amps, ground)]
    for _ in range(cfg.max_halvings):
        amps, n_steps, dt = _single_run(inst, sched, diag, T_total, dt / 2.0, t_floor)
        fids.append(_ground_weight(amps, ground))
        if abs(fids[-1] - fids[-2]) <= cfg.convergence_tol:
            return EvolutionResult(QuantumState(amps), n_steps, dt, fids[-1])
    raise ConvergenceError(
        f"fidelity not converged to {cfg.convergence_tol} after "
        f"{cfg.max_halvings} halvings (dt={dt}, last two fidelities "
        f"{fids[-2]:.8f} -> {fids[-1]:.8f})",
        dt=dt,
        fidelities=(fids[-2], fids[-1]),
    )
