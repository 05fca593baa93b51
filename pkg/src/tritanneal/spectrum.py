"""Spectral diagnostics along the annealing path.

Builds dense H(t) = H_P - g(t) * sum_i S_i^x at sampled times, tracks the
low-lying spectrum and the gap between the two lowest levels, estimates
the worst adiabatic error max_t |<psi_1|dH/dt|psi_0>|^2 / gap^4, and
evaluates the Landau-Zener excitation probability for an avoided crossing.

Dense matrices are acceptable here because diagnostics run on short
chains; the evolution path itself never materializes an operator.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .chain import SPIN_X, ChainInstance, diagonal_of_hp
from .errors import DiagnosticUnavailableError, ResourceLimitError
from .schedules import DEFAULT_T_FLOOR, Schedule, g_dot, g_of_t

# Hard cap on eigensolver input size.
MAX_EIG_DIM = 3 ** 10
# Dense H(t) construction cap: 3**7 = 2187 keeps the matrix under ~80 MB.
MAX_DENSE_HAMILTONIAN_SITES = 7
HERMITICITY_TOL = 1e-10
DEGENERACY_GAP_TOL = 1e-9


@dataclass(frozen=True)
class SpectralSlice:
    """Low-lying spectrum of H(t) at one sampled time."""

    t: float
    g: float
    energies: np.ndarray
    psi0: np.ndarray
    psi1: np.ndarray
    gap: float
    degenerate: bool


@dataclass(frozen=True)
class GapScanResult:
    slices: list[SpectralSlice]
    gap_min: float
    t_at_min: float


def sx_total_dense(n_sites: int) -> np.ndarray:
    """Dense sum of single-site S^x operators."""
    if n_sites > MAX_DENSE_HAMILTONIAN_SITES:
        raise ResourceLimitError(
            f"dense operators support at most {MAX_DENSE_HAMILTONIAN_SITES} sites"
        )
    dim = 3 ** n_sites
    out = np.zeros((dim, dim), dtype=np.complex128)
    eye = np.eye(3, dtype=np.complex128)
    for i in range(n_sites):
        op = np.array([[1.0]], dtype=np.complex128)
        for j in range(n_sites):
            op = np.kron(op, SPIN_X if j == i else eye)
        out += op
    return out


def dense_hamiltonian(inst: ChainInstance, g: float) -> np.ndarray:
    """Dense H = H_P - g * sum_i S_i^x."""
    if inst.N > MAX_DENSE_HAMILTONIAN_SITES:
        raise ResourceLimitError(
            f"dense Hamiltonians support at most {MAX_DENSE_HAMILTONIAN_SITES} sites"
        )
    H = np.diag(diagonal_of_hp(inst).astype(np.complex128))
    H -= g * sx_total_dense(inst.N)
    return H


def hermitian_eigs(matrix: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The k lowest eigenpairs of a dense Hermitian matrix.

    Returns (eigenvalues ascending, eigenvectors as columns).
    """
    H = np.asarray(matrix)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if H.shape[0] > MAX_EIG_DIM:
        raise ResourceLimitError(f"matrix dimension {H.shape[0]} exceeds {MAX_EIG_DIM}")
    if not 1 <= k <= H.shape[0]:
        raise ValueError(f"k={k} out of range for dimension {H.shape[0]}")
    scale = max(1.0, float(np.abs(H).max()))
    if float(np.abs(H - H.conj().T).max()) > HERMITICITY_TOL * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(H)
    return vals[:k], vecs[:, :k]


def gap_scan(
    inst: ChainInstance,
    sched: Schedule,
    n_samples: int = 400,
    k: int = 6,
) -> GapScanResult:
    """Spectrum of H(t) on a log-spaced time grid over [t_floor, T_total].

    The grid is logarithmic because g(t) varies fastest at small t for all
    profiles.  Slices whose gap falls below DEGENERACY_GAP_TOL are flagged
    degenerate.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    k = min(k, inst.dim)
    floor = sched.t_floor if sched.t_floor is not None else DEFAULT_T_FLOOR
    times = np.geomspace(floor, sched.T_total, n_samples)
    slices: list[SpectralSlice] = []
    gap_min = np.inf
    t_at_min = times[0]
    for t in times:
        g = g_of_t(sched, float(t))
        vals, vecs = hermitian_eigs(dense_hamiltonian(inst, g), k)
        gap = float(vals[1] - vals[0]) if k >= 2 else 0.0
        slices.append(
            SpectralSlice(
                t=float(t),
                g=g,
                energies=vals.copy(),
                psi0=vecs[:, 0].copy(),
                psi1=vecs[:, 1].copy() if k >= 2 else vecs[:, 0].copy(),
                gap=gap,
                degenerate=gap < DEGENERACY_GAP_TOL,
            )
        )
        if gap < gap_min:
            gap_min = gap
            t_at_min = float(t)
    return GapScanResult(slices=slices, gap_min=float(gap_min), t_at_min=t_at_min)


def adiabatic_error_bound(slices: list[SpectralSlice], sched: Schedule) -> float:
    """Worst-case adiabatic error estimate over the sampled path.

    dH/dt = -g'(t) * sum_i S_i^x, so each slice contributes
    |g'(t)|^2 * |<psi_1| Sx_tot |psi_0>|^2 / gap^4.  Degenerate slices are
    skipped with a warning; if every slice is degenerate the estimate is
    unavailable.
    """
    if not slices:
        raise ValueError("no slices given")
    n_sites = round(np.log(slices[0].psi0.size) / np.log(3.0))
    sxt = sx_total_dense(n_sites)
    worst = None
    skipped = 0
    for sl in slices:
        if sl.degenerate:
            skipped += 1
            continue
        element = -g_dot(sched, sl.t) * complex(np.vdot(sl.psi1, sxt @ sl.psi0))
        value = abs(element) ** 2 / sl.gap ** 4
        if worst is None or value > worst:
            worst = value
    if skipped:
        warnings.warn(
            f"{skipped} degenerate slice(s) excluded from the adiabatic estimate",
            stacklevel=2,
        )
    if worst is None:
        raise DiagnosticUnavailableError("every sampled slice has a degenerate ground state")
    return float(worst)


def landau_zener(gap_min: float, alpha: float) -> float:
    """Excitation probability exp(-pi * gap_min**2 / (2 * hbar * |alpha|)).

    hbar = 1 throughout; alpha is the diabatic slope difference at the
    avoided crossing and must be nonzero.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero (alpha -> 0 is the adiabatic limit)")
    return float(np.exp(-np.pi * gap_min ** 2 / (2.0 * abs(alpha))))


def fit_diabatic_slope(scan: GapScanResult, window: int = 5) -> float:
    """Estimate the diabatic slope difference from the gap branches.

    Convention (an implementation choice, reported as such in output
    metadata): fit straight lines to gap(t) over up to `window` samples on
    each side of the minimum and return right slope minus left slope.
    """
    slices = scan.slices
    ts = np.array([sl.t for sl in slices])
    gaps = np.array([sl.gap for sl in slices])
    i_min = int(np.argmin(gaps))
    lo = max(0, i_min - window)
    hi = min(len(slices) - 1, i_min + window)
    left_t, left_g = ts[lo : i_min + 1], gaps[lo : i_min + 1]
    right_t, right_g = ts[i_min : hi + 1], gaps[i_min : hi + 1]
    if left_t.size < 2 or right_t.size < 2:
        raise ValueError("gap minimum too close to the scan boundary to fit slopes")
    left_slope = float(np.polyfit(left_t, left_g, 1)[0])
    right_slope = float(np.polyfit(right_t, right_g, 1)[0])
    return right_slope - left_slope
