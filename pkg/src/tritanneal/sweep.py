"""(J, D) grid sweep comparing quantum and classical annealing.

For every (J, D, c, profile) tuple the quantum evolution and the trit
annealer run with the same schedule and matched budgets, producing one
record with both success probabilities and their difference.  Records are
keyed by the tuple, written incrementally to a CSV store (so interrupted
sweeps can resume), and canonically ordered at finalization.  A JSON
sidecar records the effective configuration, code version, PRNG identity
and schedule-floor convention.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ._version import __version__
from .anneal import PRNG_IDENTITY, TARunConfig, ta_run
from .chain import ChainInstance, exact_ground_state
from .evolve import EvolutionConfig, aqa_success, evolve
from .schedules import PROFILES, Schedule

HIGH_FIDELITY_THRESHOLD = 0.9
CSV_HEADER = ("J", "D", "c", "profile", "p_aqa", "p_ta", "diff", "hi_fid", "dt_used", "seed", "degenerate")
WORKERS_ENV_VAR = "TRITANNEAL_WORKERS"


@dataclass(frozen=True)
class SweepConfig:
    """Grid, budgets and reproducibility knobs for one sweep.

    Ranges are (min, max, step) triples; grid values are generated by
    index (min + i*step, rounded to 10 decimals) so that D = 0 lands
    exactly on the sector boundary.
    """

    J_range: tuple[float, float, float] = (-5.0, 5.0, 0.2)
    D_range: tuple[float, float, float] = (-5.0, 5.0, 0.2)
    c_list: tuple[float, ...] = (1.0, 5.0, 10.0, 20.0)
    profiles: tuple[str, ...] = PROFILES
    h: float = 0.2
    N: int = 5
    T_total: float = 1000.0
    S: int = 1000
    R: int = 20
    base_seed: int = 0
    worker_count: int = 0  # 0 means: env var, else cpu count

    def __post_init__(self) -> None:
        for prof in self.profiles:
            if prof not in PROFILES:
                raise ValueError(f"unknown profile {prof!r}")
        if self.S < 1 or self.R < 1 or self.N < 1:
            raise ValueError("S, R and N must all be >= 1")

    @staticmethod
    def from_dict(data: dict) -> "SweepConfig":
        kwargs = dict(data)
        for key in ("J_range", "D_range", "c_list", "profiles"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return SweepConfig(**kwargs)

    @staticmethod
    def from_file(path: str | Path) -> "SweepConfig":
        with open(path, encoding="utf-8") as fh:
            return SweepConfig.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SweepRecord:
    """One grid-point comparison row."""

    J: float
    D: float
    c: float
    profile: str
    p_aqa: float
    p_ta: float
    diff: float
    hi_fid: bool
    dt_used: float
    seed: int
    degenerate: bool
    error: str | None = None


def grid_values(rng: tuple[float, float, float]) -> np.ndarray:
    """Grid points min + i*step, generated by index and rounded to 10
    decimals so repeated addition cannot drift the sector boundary."""
    lo, hi, step = rng
    if step <= 0:
        raise ValueError("grid step must be positive")
    count = int(round((hi - lo) / step)) + 1
    return np.round(lo + np.arange(count) * step, 10)


def record_seed(base_seed: int, j_index: int, d_index: int, c: float, profile: str) -> int:
    """Stable per-record seed, independent of execution order and platform."""
    text = f"{base_seed}|{j_index}|{d_index}|{c!r}|{profile}"
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big")


def effective_worker_count(cfg: SweepConfig) -> int:
    if cfg.worker_count > 0:
        return cfg.worker_count
    env = os.environ.get(WORKERS_ENV_VAR, "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def run_point(cfg: SweepConfig, j_index: int, d_index: int, c: float, profile: str) -> SweepRecord:
    """Evaluate one (J, D, c, profile) tuple: quantum fidelity, classical
    success, and their difference, under a shared schedule.

    Numerical failures on either side leave that side's probability NaN
    and attach the error text to the record, so a long sweep survives
    isolated bad grid points.
    """
    J = float(grid_values(cfg.J_range)[j_index])
    D = float(grid_values(cfg.D_range)[d_index])
    seed = record_seed(cfg.base_seed, j_index, d_index, c, profile)
    inst = ChainInstance(N=cfg.N, J=J, h=cfg.h, D=D)
    sched = Schedule(profile=profile, c=c, T_total=cfg.T_total)
    _, ground = exact_ground_state(inst)
    degenerate = len(ground) > 1

    errors = []
    try:
        ta = ta_run(inst, TARunConfig(sweeps=cfg.S, restarts=cfg.R, seed=seed, schedule=sched))
        p_ta = ta.success_probability
    except Exception as exc:  # noqa: BLE001 - any point failure becomes an error record
        p_ta = math.nan
        errors.append(f"ta: {type(exc).__name__}: {exc}")
    try:
        res = evolve(inst, sched, EvolutionConfig())
        p_aqa = aqa_success(res.state, inst)
        dt_used = res.dt_used
    except Exception as exc:  # noqa: BLE001
        p_aqa = math.nan
        dt_used = math.nan
        errors.append(f"aqa: {type(exc).__name__}: {exc}")

    return SweepRecord(
        J=J,
        D=D,
        c=float(c),
        profile=profile,
        p_aqa=p_aqa,
        p_ta=p_ta,
        diff=p_aqa - p_ta,
        hi_fid=bool(p_aqa > HIGH_FIDELITY_THRESHOLD) if not math.isnan(p_aqa) else False,
        dt_used=dt_used,
        seed=seed,
        degenerate=degenerate,
        error="; ".join(errors) if errors else None,
    )


def _record_key(J: float, D: float, c: float, profile: str) -> tuple:
    return (round(float(J), 10), round(float(D), 10), round(float(c), 10), profile)


def _record_row(rec: SweepRecord) -> list[str]:
    return [
        f"{rec.J:.10g}",
        f"{rec.D:.10g}",
        f"{rec.c:.10g}",
        rec.profile,
        f"{rec.p_aqa:.17g}",
        f"{rec.p_ta:.17g}",
        f"{rec.diff:.17g}",
        str(int(rec.hi_fid)),
        f"{rec.dt_used:.17g}",
        str(rec.seed),
        str(int(rec.degenerate)),
    ]


def read_records(path: str | Path) -> list[SweepRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(
                SweepRecord(
                    J=float(row["J"]),
                    D=float(row["D"]),
                    c=float(row["c"]),
                    profile=row["profile"],
                    p_aqa=float(row["p_aqa"]),
                    p_ta=float(row["p_ta"]),
                    diff=float(row["diff"]),
                    hi_fid=bool(int(row["hi_fid"])),
                    dt_used=float(row["dt_used"]),
                    seed=int(row["seed"]),
                    degenerate=bool(int(row["degenerate"])),
                )
            )
    return records


def _metadata_path(out_path: Path) -> Path:
    return out_path.with_name(out_path.name + ".meta.json")


def write_metadata(out_path: Path, cfg: SweepConfig, errors: dict[str, str], n_records: int) -> None:
    meta = {
        "tool": "tritanneal sweep",
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "config": cfg.to_dict(),
        "prng": PRNG_IDENTITY,
        "t_floor_convention": (
            "schedules evaluated at grid midpoints with floor = half the grid "
            "spacing (quantum: half the initial time step; classical: half the "
            "sweep spacing) unless an explicit t_floor is configured"
        ),
        "n_records": n_records,
        "errors": errors,
    }
    with open(_metadata_path(out_path), "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)


def _task_list(cfg: SweepConfig, done: set[tuple]) -> list[tuple[int, int, float, str]]:
    j_vals = grid_values(cfg.J_range)
    d_vals = grid_values(cfg.D_range)
    tasks = []
    for ci, c in enumerate(cfg.c_list):
        for pi, profile in enumerate(cfg.profiles):
            for j_index in range(len(j_vals)):
                for d_index in range(len(d_vals)):
                    key = _record_key(j_vals[j_index], d_vals[d_index], c, profile)
                    if key not in done:
                        tasks.append((j_index, d_index, float(c), profile))
    return tasks


def _canonical_sort_key(cfg: SweepConfig):
    j_vals = list(grid_values(cfg.J_range))
    d_vals = list(grid_values(cfg.D_range))
    c_order = {round(float(c), 10): i for i, c in enumerate(cfg.c_list)}
    p_order = {p: i for i, p in enumerate(cfg.profiles)}

    def key(rec: SweepRecord):
        return (
            c_order.get(round(rec.c, 10), len(c_order)),
            p_order.get(rec.profile, len(p_order)),
            j_vals.index(round(rec.J, 10)) if round(rec.J, 10) in j_vals else -1,
            d_vals.index(round(rec.D, 10)) if round(rec.D, 10) in d_vals else -1,
        )

    return key


def run_sweep(
    cfg: SweepConfig,
    out_path: str | Path,
    resume: bool = False,
    progress: bool = False,
) -> list[SweepRecord]:
    """Run (or resume) the full grid sweep, persisting one CSV row per tuple.

    Rows are appended as they complete (single writer, flushed per row);
    on finalization the store is rewritten in canonical (c, profile, J, D)
    order, which makes interrupted-and-resumed runs byte-identical to
    uninterrupted ones.  Grid points that fail numerically produce a
    record with NaN probabilities and an entry in the metadata sidecar.
    """
    out_path = Path(out_path)
    existing: list[SweepRecord] = []
    if resume and out_path.exists():
        existing = read_records(out_path)
    done = {_record_key(r.J, r.D, r.c, r.profile) for r in existing}
    tasks = _task_list(cfg, done)

    records = list(existing)
    errors: dict[str, str] = {}
    workers = effective_worker_count(cfg)

    mode = "a" if (resume and out_path.exists()) else "w"
    with open(out_path, mode, newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if mode == "w":
            writer.writerow(CSV_HEADER)
            fh.flush()

        def consume(rec: SweepRecord) -> None:
            records.append(rec)
            writer.writerow(_record_row(rec))
            fh.flush()
            if rec.error is not None:
                errors[f"J={rec.J:.10g},D={rec.D:.10g},c={rec.c:.10g},{rec.profile}"] = rec.error
            if progress:
                print(
                    f"[{len(records)}] J={rec.J:+.2f} D={rec.D:+.2f} c={rec.c:g} "
                    f"{rec.profile}: p_aqa={rec.p_aqa:.4f} p_ta={rec.p_ta:.4f}",
                    flush=True,
                )

        if workers <= 1 or len(tasks) <= 1:
            for task in tasks:
                consume(run_point(cfg, *task))
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [(task, pool.submit(run_point, cfg, *task)) for task in tasks]
                for task, fut in futures:
                    try:
                        rec = fut.result()
                    except Exception as exc:  # noqa: BLE001 - worker crash
                        j_index, d_index, c, profile = task
                        rec = SweepRecord(
                            J=float(grid_values(cfg.J_range)[j_index]),
                            D=float(grid_values(cfg.D_range)[d_index]),
                            c=float(c),
                            profile=profile,
                            p_aqa=math.nan,
                            p_ta=math.nan,
                            diff=math.nan,
                            hi_fid=False,
                            dt_used=math.nan,
                            seed=record_seed(cfg.base_seed, j_index, d_index, c, profile),
                            degenerate=False,
                            error=f"worker: {type(exc).__name__}: {exc}",
                        )
                    consume(rec)

    records.sort(key=_canonical_sort_key(cfg))
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(_record_row(rec))
    write_metadata(out_path, cfg, errors, len(records))
    return records


@dataclass(frozen=True)
class SectorSummaryRow:
    c: float
    profile: str
    frac_positive_d_pos: float
    frac_positive_d_neg: float
    mean_diff_d_pos: float
    mean_diff_d_neg: float
    frac_positive_d_zero: float
    mean_diff_d_zero: float
    n_high_fidelity: int
    n_records: int


def sector_summary(records: list[SweepRecord]) -> list[SectorSummaryRow]:
    """Per-(c, profile) statistics split by the sign of D.

    D = 0 points sit on the sector boundary and are reported separately.
    Records with NaN probabilities (errored grid points) are excluded.
    """
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple[float, str], list[SweepRecord]] = {}
    for rec in records:
        groups.setdefault((rec.c, rec.profile), []).append(rec)

    def stats(subset: list[SweepRecord]) -> tuple[float, float]:
        if not subset:
            return 0.0, 0.0
        diffs = np.array([r.diff for r in subset])
        return float(np.mean(diffs > 0.0)), float(diffs.mean())

    rows = []
    for (c, profile), recs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        valid = [r for r in recs if not math.isnan(r.diff)]
        pos = [r for r in valid if r.D > 0]
        neg = [r for r in valid if r.D < 0]
        zero = [r for r in valid if r.D == 0]
        fp_pos, md_pos = stats(pos)
        fp_neg, md_neg = stats(neg)
        fp_zero, md_zero = stats(zero)
        rows.append(
            SectorSummaryRow(
                c=c,
                profile=profile,
                frac_positive_d_pos=fp_pos,
                frac_positive_d_neg=fp_neg,
                mean_diff_d_pos=md_pos,
                mean_diff_d_neg=md_neg,
                frac_positive_d_zero=fp_zero,
                mean_diff_d_zero=md_zero,
                n_high_fidelity=sum(r.hi_fid for r in valid),
                n_records=len(recs),
            )
        )
    return rows


def write_summary(rows: list[SectorSummaryRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            (
                "c",
                "profile",
                "frac_positive_d_pos",
                "frac_positive_d_neg",
                "mean_diff_d_pos",
                "mean_diff_d_neg",
                "frac_positive_d_zero",
                "mean_diff_d_zero",
                "n_high_fidelity",
                "n_records",
            )
        )
        for row in rows:
            writer.writerow(
                (
                    f"{row.c:.10g}",
                    row.profile,
                    f"{row.frac_positive_d_pos:.17g}",
                    f"{row.frac_positive_d_neg:.17g}",
                    f"{row.mean_diff_d_pos:.17g}",
                    f"{row.mean_diff_d_neg:.17g}",
                    f"{row.frac_positive_d_zero:.17g}",
                    f"{row.mean_diff_d_zero:.17g}",
                    str(row.n_high_fidelity),
                    str(row.n_records),
                )
            )
