"""Spin-1 open-chain primitives.

Defines the chain instance (couplings J, longitudinal field h, single-ion
anisotropy D), the ternary computational basis and its integer indexing,
the spin-1 operator matrices, the classical cost function, and the
matrix-free single-site transverse rotation used by the Trotter evolution.

Basis convention: each site has levels ordered (+1, 0, -1), encoded as the
base-3 digit d = 1 - s, with site 0 the most significant digit of the
basis index.  Sites are 0-based throughout the API.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ResourceLimitError

# 3**12 ~ 5.3e5 amplitudes; dense state vectors stay desk scale up to here.
MAX_DENSE_SITES = 12
# Absolute energy window for identifying degenerate ground states.
GROUND_DEGENERACY_TOL = 1e-9
# Allowed deviation from unit norm at state construction.
NORM_TOL = 1e-10

SQRT_HALF = 2.0 ** -0.5

SPIN_Z = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, -1.0]], dtype=np.complex128)
SPIN_X = SQRT_HALF * np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]], dtype=np.complex128)
# Fixed by the cyclic commutation relation: S^y = -i [S^z, S^x].
SPIN_Y = -1j * (SPIN_Z @ SPIN_X - SPIN_X @ SPIN_Z)

for _op in (SPIN_Z, SPIN_X, SPIN_Y):
    _op.setflags(write=False)


@dataclass(frozen=True)
class ChainInstance:
    """Open spin-1 chain with nearest-neighbour bonds (i, i+1), i = 0..N-2.

    Energy of a classical configuration s in {-1, 0, +1}^N:

        H(s) = -J * sum_i s_i s_{i+1} - h * sum_i s_i + D * sum_i s_i**2
    """

    N: int
    J: float
    h: float
    D: float

    def __post_init__(self) -> None:
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError(f"site count must be a positive integer, got {self.N!r}")
        for name in ("J", "h", "D"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"parameter {name} must be finite, got {value!r}")

    @property
    def dim(self) -> int:
        return 3 ** self.N

    @property
    def neighbors(self) -> list[tuple[int, int]]:
        """The N-1 nearest-neighbour pairs of the open chain."""
        return [(i, i + 1) for i in range(self.N - 1)]


def _check_dense_size(n_sites: int) -> None:
    if n_sites > MAX_DENSE_SITES:
        raise ResourceLimitError(
            f"dense operations support at most {MAX_DENSE_SITES} sites, got {n_sites}"
        )


def validate_config(values: np.ndarray, n_sites: int) -> np.ndarray:
    """Check a trit configuration for length and alphabet; return it as int8."""
    arr = np.asarray(values)
    if arr.shape != (n_sites,):
        raise ValueError(f"configuration must have shape ({n_sites},), got {arr.shape}")
    if not np.isin(arr, (-1, 0, 1)).all():
        raise ValueError("configuration entries must be in {-1, 0, +1}")
    return arr.astype(np.int8)


def encode_config(values: np.ndarray) -> int:
    """Basis index of a trit configuration (site 0 most significant)."""
    arr = np.asarray(values)
    index = 0
    for s in arr:
        index = 3 * index + (1 - int(s))
    return index


def decode_config(index: int, n_sites: int) -> np.ndarray:
    """Trit configuration at a given basis index."""
    if not 0 <= index < 3 ** n_sites:
        raise ValueError(f"basis index {index} out of range for {n_sites} sites")
    out = np.empty(n_sites, dtype=np.int8)
    rem = index
    for i in range(n_sites - 1, -1, -1):
        out[i] = 1 - (rem % 3)
        rem //= 3
    return out


def all_configs(n_sites: int) -> np.ndarray:
    """All 3**N trit configurations in basis-index order, shape (3**N, N)."""
    _check_dense_size(n_sites)
    idx = np.arange(3 ** n_sites)
    powers = 3 ** (n_sites - 1 - np.arange(n_sites))
    digits = (idx[:, None] // powers[None, :]) % 3
    return (1 - digits).astype(np.int8)


def classical_energy(inst: ChainInstance, values: np.ndarray) -> float:
    """Classical cost H(s) of one configuration."""
    s = validate_config(values, inst.N).astype(np.float64)
    bond = float(np.dot(s[:-1], s[1:]))
    return -inst.J * bond - inst.h * float(s.sum()) + inst.D * float((s * s).sum())


def diagonal_of_hp(inst: ChainInstance) -> np.ndarray:
    """Diagonal of the problem Hamiltonian over the computational basis.

    Entry k is the classical energy of the configuration decoded from basis
    index k; the operator is never materialized as a dense matrix.
    """
    _check_dense_size(inst.N)
    s = all_configs(inst.N).astype(np.float64)
    if inst.N > 1:
        bond = (s[:, :-1] * s[:, 1:]).sum(axis=1)
    else:
        bond = np.zeros(s.shape[0])
    return -inst.J * bond - inst.h * s.sum(axis=1) + inst.D * (s * s).sum(axis=1)


def exact_ground_state(inst: ChainInstance) -> tuple[float, list[int]]:
    """Exhaustive ground-state search.

    Returns the minimum classical energy and all basis indices whose energy
    lies within GROUND_DEGENERACY_TOL of it, sorted ascending.
    """
    diag = diagonal_of_hp(inst)
    e0 = float(diag.min())
    indices = np.flatnonzero(diag <= e0 + GROUND_DEGENERACY_TOL)
    return e0, [int(i) for i in indices]


@dataclass(frozen=True)
class QuantumState:
    """Complex amplitude vector over the 3**N computational basis, unit norm."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128)  # defensive copy
        n = round(math.log(amps.size, 3))
        if 3 ** n != amps.size:
            raise ValueError(f"amplitude vector length {amps.size} is not a power of 3")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_sites(self) -> int:
        return round(math.log(self.amplitudes.size, 3))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@njit(cache=True)
def _rotate_site(amps, n_sites, site, angle):  # pragma: no cover - exercised via wrappers
    """In-place exp(+i*angle*S^x) on one site of a flat state vector.

    Closed form for spin-1, using (S^x)**3 = S^x:
        exp(i a S^x) = I + i sin(a) S^x + (cos(a) - 1) (S^x)**2
    """
    c = np.cos(angle)
    s = np.sin(angle)
    u00 = 0.5 * (1.0 + c)
    u02 = 0.5 * (c - 1.0)
    ud = 1j * (s * SQRT_HALF)
    right = 3 ** (n_sites - 1 - site)
    left = 3 ** site
    for a in range(left):
        base = a * 3 * right
        for b in range(right):
            i0 = base + b
            i1 = i0 + right
            i2 = i1 + right
            x0 = amps[i0]
            x1 = amps[i1]
            x2 = amps[i2]
            amps[i0] = u00 * x0 + ud * x1 + u02 * x2
            amps[i1] = ud * x0 + c * x1 + ud * x2
            amps[i2] = u02 * x0 + ud * x1 + u00 * x2


@njit(cache=True)
def _rotate_all_sites(amps, n_sites, angle):  # pragma: no cover - exercised via wrappers
    for site in range(n_sites):
        _rotate_site(amps, n_sites, site, angle)


def apply_driver_term(state: QuantumState, site: int, angle: float) -> QuantumState:
    """Apply exp(+i*angle*S^x) on one site (identity elsewhere).

    This is the single-site factor of the transverse-driver exponential;
    sites commute, so a full driver step is a product of these rotations.
    Norm is preserved to rounding.
    """
    n = state.n_sites
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for {n} sites")
    amps = state.amplitudes.copy()
    _rotate_site(amps, n, site, float(angle))
    return QuantumState(amps)
