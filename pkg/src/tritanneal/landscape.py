"""Classical energy-landscape diagnostics by exhaustive enumeration.

Adjacency is defined by one-step single-site moves s_i -> s_i +- 1 (so
-1 <-> 0 <-> +1; a direct -1 <-> +1 hop is not a neighbour).  Greedy
steepest descent with a deterministic tie-break partitions the
configuration space into basins of attraction, one per one-step local
minimum.  The order parameter f(s) is the fraction of sites occupying
the +-1 levels.

Tie-break rule (reported in output metadata): among strictly-downhill
moves pick the lowest resulting energy; ties go to the smallest site
index, then to the move that decreases s_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import (
    ChainInstance,
    all_configs,
    decode_config,
    diagonal_of_hp,
    encode_config,
    validate_config,
)

TIE_BREAK_RULE = (
    "steepest descent; ties: lowest energy, then smallest site index, "
    "then the move decreasing s_i"
)


@dataclass(frozen=True)
class BasinDecomposition:
    """Partition of all 3**N configurations into greedy-descent basins."""

    minima: list[np.ndarray]
    minima_indices: list[int]
    basin_of: np.ndarray
    basin_sizes: np.ndarray
    n_basins: int
    largest_fraction: float


@dataclass(frozen=True)
class EnergyScatter:
    """Energy versus order parameter for every configuration, with the
    per-f lower envelope and the one-step local minima marked."""

    f: np.ndarray
    energy: np.ndarray
    is_local_min: np.ndarray
    envelope_f: np.ndarray
    envelope_energy: np.ndarray


@dataclass(frozen=True)
class BasinCurveRow:
    D: float
    n_basins: int
    largest_fraction: float


def one_step_neighbors(values: np.ndarray) -> list[np.ndarray]:
    """All configurations one single-site +-1 move away, in tie-break order
    (site ascending, decreasing move before increasing move)."""
    n = values.shape[0] if hasattr(values, "shape") else len(values)
    s = validate_config(values, n)
    out = []
    for i in range(n):
        for delta in (-1, +1):
            m = int(s[i]) + delta
            if -1 <= m <= 1:
                nb = s.copy()
                nb[i] = m
                out.append(nb)
    return out


def _descent_table(inst: ChainInstance) -> tuple[np.ndarray, np.ndarray]:
    """Steepest-descent successor of every configuration (-1 at local minima).

    Candidate moves are laid out in tie-break priority order so that the
    first occurrence of the minimum energy change implements the rule.
    """
    n = inst.N
    m_total = inst.dim
    energies = diagonal_of_hp(inst)
    powers = 3 ** (n - 1 - np.arange(n))
    idx = np.arange(m_total)
    digits = (idx[:, None] // powers[None, :]) % 3
    cand_delta = np.full((m_total, 2 * n), np.inf)
    cand_to = np.zeros((m_total, 2 * n), dtype=np.int64)
    for i in range(n):
        d = digits[:, i]
        s = 1 - d
        for j, move in enumerate((-1, +1)):
            s_new = s + move
            ok = (s_new >= -1) & (s_new <= 1)
            target = idx + ((1 - s_new) - d) * powers[i]
            col = 2 * i + j
            cand_to[ok, col] = target[ok]
            cand_delta[ok, col] = energies[target[ok]] - energies[ok]
    best = np.argmin(cand_delta, axis=1)  # first occurrence wins ties
    best_delta = cand_delta[idx, best]
    successor = np.where(best_delta < 0.0, cand_to[idx, best], -1)
    return successor, energies


def greedy_descent(inst: ChainInstance, values: np.ndarray) -> tuple[np.ndarray, int]:
    """Follow steepest one-step moves to a local minimum.

    Returns the fixed point and the number of moves taken.  The energy
    strictly decreases along the path, so termination is guaranteed.
    """
    s = validate_config(values, inst.N)
    successor, _ = _descent_table(inst)
    cur = encode_config(s)
    length = 0
    while successor[cur] != -1:
        cur = int(successor[cur])
        length += 1
    return decode_config(cur, inst.N), length


def decompose_basins(inst: ChainInstance) -> BasinDecomposition:
    """Run greedy descent from every configuration and group by terminal
    minimum.  Deterministic given the tie-break rule; paths are memoized
    (every configuration on a descent path shares its terminal basin)."""
    successor, _ = _descent_table(inst)
    m_total = inst.dim
    basin_of = np.full(m_total, -1, dtype=np.int64)
    minima_indices: list[int] = []
    for start in range(m_total):
        path = []
        cur = start
        while basin_of[cur] == -1:
            nxt = successor[cur]
            if nxt == -1:
                basin_of[cur] = len(minima_indices)
                minima_indices.append(cur)
                break
            path.append(cur)
            cur = int(nxt)
        label = basin_of[cur]
        for p in path:
            basin_of[p] = label
    sizes = np.bincount(basin_of, minlength=len(minima_indices))
    configs = all_configs(inst.N)
    minima = [configs[i].copy() for i in minima_indices]
    return BasinDecomposition(
        minima=minima,
        minima_indices=minima_indices,
        basin_of=basin_of,
        basin_sizes=sizes,
        n_basins=len(minima_indices),
        largest_fraction=float(sizes.max()) / m_total,
    )


def basin_curves_along_d(
    inst_base: ChainInstance, J_fixed: float, D_values: np.ndarray
) -> list[BasinCurveRow]:
    """Basin count and largest-basin dominance along a cut in D at fixed J, h."""
    rows = []
    for D in D_values:
        if not np.isfinite(D):
            raise ValueError(f"D values must be finite, got {D!r}")
        inst = ChainInstance(N=inst_base.N, J=J_fixed, h=inst_base.h, D=float(D))
        dec = decompose_basins(inst)
        rows.append(BasinCurveRow(float(D), dec.n_basins, dec.largest_fraction))
    return rows


def order_parameter_f(values: np.ndarray) -> float:
    """Fraction of sites occupying the +-1 levels."""
    n = values.shape[0] if hasattr(values, "shape") else len(values)
    s = validate_config(values, n)
    return float(np.count_nonzero(s)) / n


def energy_vs_f_scatter(inst: ChainInstance) -> EnergyScatter:
    """Enumerate all configurations as (f, energy) points.

    One-step local minima are marked, and for each attained f value the
    minimum energy over configurations with that f forms the envelope.
    """
    successor, energies = _descent_table(inst)
    configs = all_configs(inst.N)
    f = np.count_nonzero(configs, axis=1) / inst.N
    is_min = successor == -1
    env_f = np.unique(f)
    env_e = np.array([energies[f == fv].min() for fv in env_f])
    return EnergyScatter(
        f=f,
        energy=energies,
        is_local_min=is_min,
        envelope_f=env_f,
        envelope_energy=env_e,
    )
