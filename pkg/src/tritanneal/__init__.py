"""Spin-1 quantum annealing vs trit simulated annealing on open chains.

Desk-scale simulators for the anisotropic spin-1 annealer and its
classical trit-annealing baseline, with shared schedules, spectral
diagnostics, energy-landscape analysis, and a reproducible sweep harness.
"""

from ._version import __version__
from .anneal import TARunConfig, TARunResult, delta_energy, local_energy, metropolis_sweep, ta_run
from .chain import (
    ChainInstance,
    QuantumState,
    all_configs,
    apply_driver_term,
    classical_energy,
    decode_config,
    diagonal_of_hp,
    encode_config,
    exact_ground_state,
)
from .errors import (
    ConvergenceError,
    DiagnosticUnavailableError,
    ResourceLimitError,
    TritannealError,
)
from .evolve import (
    EvolutionConfig,
    EvolutionResult,
    aqa_success,
    driver_ground_state,
    evolve,
    trotter_step_order2,
    trotter_step_order4,
)
from .landscape import (
    BasinDecomposition,
    EnergyScatter,
    basin_curves_along_d,
    decompose_basins,
    energy_vs_f_scatter,
    greedy_descent,
    one_step_neighbors,
    order_parameter_f,
)
from .schedules import PROFILES, Schedule, classical_temperature, g_dot, g_of_t
from .spectrum import (
    GapScanResult,
    SpectralSlice,
    adiabatic_error_bound,
    fit_diabatic_slope,
    gap_scan,
    hermitian_eigs,
    landau_zener,
)
from .sweep import SweepConfig, SweepRecord, record_seed, run_sweep, sector_summary

__all__ = [
    "__version__",
    "ChainInstance",
    "QuantumState",
    "TritannealError",
    "ResourceLimitError",
    "ConvergenceError",
    "DiagnosticUnavailableError",
    "Schedule",
    "PROFILES",
    "g_of_t",
    "g_dot",
    "classical_temperature",
    "classical_energy",
    "diagonal_of_hp",
    "exact_ground_state",
    "encode_config",
    "decode_config",
    "all_configs",
    "apply_driver_term",
    "EvolutionConfig",
    "EvolutionResult",
    "driver_ground_state",
    "trotter_step_order2",
    "trotter_step_order4",
    "evolve",
    "aqa_success",
    "TARunConfig",
    "TARunResult",
    "local_energy",
    "delta_energy",
    "metropolis_sweep",
    "ta_run",
    "SpectralSlice",
    "GapScanResult",
    "hermitian_eigs",
    "gap_scan",
    "adiabatic_error_bound",
    "landau_zener",
    "fit_diabatic_slope",
    "BasinDecomposition",
    "EnergyScatter",
    "one_step_neighbors",
    "greedy_descent",
    "decompose_basins",
    "basin_curves_along_d",
    "order_parameter_f",
    "energy_vs_f_scatter",
    "SweepConfig",
    "SweepRecord",
    "record_seed",
    "run_sweep",
    "sector_summary",
]
