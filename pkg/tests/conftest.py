"""Shared test oracles: dense operators, matrix-exponential steppers, and
an independent tensor-product rotation, all built without touching the
package's evolution kernels."""

from __future__ import annotations

import math

import numpy as np
import pytest
from numba import njit
from scipy.linalg import expm

from tritanneal.chain import ChainInstance, diagonal_of_hp
from tritanneal.evolve import driver_ground_state
from tritanneal.schedules import Schedule, g_of_t

SX3 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]], dtype=complex) / math.sqrt(2)
SZ3 = np.diag([1.0, 0.0, -1.0]).astype(complex)


def kron_chain(ops: list[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def dense_site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    eye = np.eye(3, dtype=complex)
    return kron_chain([op if j == site else eye for j in range(n_sites)])


def dense_sx_total(n_sites: int) -> np.ndarray:
    return sum(dense_site_operator(SX3, i, n_sites) for i in range(n_sites))


def dense_hamiltonian(inst: ChainInstance, g: float) -> np.ndarray:
    return np.diag(diagonal_of_hp(inst).astype(complex)) - g * dense_sx_total(inst.N)


def expm_midpoint_stepper(
    inst: ChainInstance, sched: Schedule, T_total: float, dt: float, t_floor: float
) -> np.ndarray:
    """Independent integrator: exponentiate H(g(t_mid)) exactly on each step."""
    n_steps = math.ceil(T_total / dt)
    dt_eff = T_total / n_steps
    hp = np.diag(diagonal_of_hp(inst).astype(complex))
    sxt = dense_sx_total(inst.N)
    psi = driver_ground_state(inst.N).amplitudes.copy()
    for j in range(n_steps):
        g = g_of_t(sched, t_floor + (j + 0.5) * dt_eff)
        psi = expm(-1j * (hp - g * sxt) * dt_eff) @ psi
    return psi


def einsum_site_rotation(amps: np.ndarray, n_sites: int, site: int, angle: float) -> np.ndarray:
    """Reference exp(+i*angle*S^x) on one site via dense matrix exponential."""
    u = expm(1j * angle * SX3)
    shaped = amps.reshape(3 ** site, 3, 3 ** (n_sites - 1 - site))
    return np.einsum("ab,ibj->iaj", u, shaped).reshape(-1)


@njit(cache=True)
def fixed_temperature_counts(values, J, h, D, temperature, sites, props, uniforms, powers):
    """Run Metropolis sweeps at fixed temperature, counting the basis index
    occupied after each sweep.  Independent tally used for stationarity tests."""
    n = values.size
    n_sweeps = sites.shape[0]
    dim = 1
    for _ in range(n):
        dim *= 3
    counts = np.zeros(dim, dtype=np.int64)
    for k in range(n_sweeps):
        for u in range(n):
            i = sites[k, u]
            m = values[i]
            if m == -1:
                m_new = 0 if props[k, u] == 0 else 1
            elif m == 0:
                m_new = -1 if props[k, u] == 0 else 1
            else:
                m_new = -1 if props[k, u] == 0 else 0
            nb = 0.0
            if i > 0:
                nb += values[i - 1]
            if i < n - 1:
                nb += values[i + 1]
            d_e = -(m_new - m) * (J * nb + h) + D * (m_new * m_new - m * m)
            if d_e <= 0.0 or uniforms[k, u] < np.exp(-d_e / temperature):
                values[i] = m_new
        index = 0
        for i in range(n):
            index += (1 - values[i]) * powers[i]
        counts[index] += 1
    return counts


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
