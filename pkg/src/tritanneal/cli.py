"""Command-line interface: every experiment and diagnostic as a subcommand.

Exit codes: 0 success, 2 usage error, 3 numerical/convergence failure,
4 resource limit.  Flags override config-file values; every output file
embeds the effective configuration (and seed where randomness is used).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from ._version import __version__
from .anneal import PRNG_IDENTITY, TEMPERATURE_MODES, TARunConfig, ta_run
from .chain import ChainInstance, exact_ground_state
from .errors import ConvergenceError, DiagnosticUnavailableError, ResourceLimitError
from .evolve import EvolutionConfig, aqa_success, evolve
from .landscape import TIE_BREAK_RULE, basin_curves_along_d, energy_vs_f_scatter
from .schedules import PROFILES, Schedule
from .spectrum import adiabatic_error_bound, fit_diabatic_slope, gap_scan, landau_zener
from .sweep import SweepConfig, run_sweep, sector_summary, write_summary

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4


def _meta(config: dict, seed: int | None = None, **extra) -> dict:
    # no timestamp here: rerunning a command from its embedded config must
    # reproduce the output file byte for byte
    meta = {
        "version": __version__,
        "config": config,
        "seed": seed,
    }
    meta.update(extra)
    return meta


def _write_json(path: str | Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object")
    return data


def _merge(parser: argparse.ArgumentParser, args: argparse.Namespace, defaults: dict, required: tuple[str, ...]) -> dict:
    """Effective configuration: defaults <- config file <- explicit flags."""
    merged = dict(defaults)
    merged.update(_load_config_file(getattr(args, "config", None)))
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    for key in required:
        if merged.get(key) is None:
            parser.error(f"missing required value: --{key}")
    return merged


def _add_instance_flags(p: argparse.ArgumentParser, with_d: bool = True) -> None:
    p.add_argument("--J", type=float, help="nearest-neighbour coupling")
    if with_d:
        p.add_argument("--D", type=float, help="single-ion anisotropy")
    p.add_argument("--h", type=float, help="longitudinal field (default 0.2)")
    p.add_argument("--N", type=int, help="chain length (default 5)")


def _add_schedule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c", type=float, help="driver scale (default 20)")
    p.add_argument("--profile", choices=PROFILES, help="decay profile (default log)")
    p.add_argument("--T", type=float, help="total schedule time (default 1000)")
    p.add_argument("--t-floor", type=float, dest="t_floor", help="explicit schedule floor")


INSTANCE_DEFAULTS = {"J": None, "D": None, "h": 0.2, "N": 5}
SCHEDULE_DEFAULTS = {"c": 20.0, "profile": "log", "T": 1000.0, "t_floor": None}


def _schedule_from(cfg: dict) -> Schedule:
    return Schedule(profile=cfg["profile"], c=cfg["c"], T_total=cfg["T"], t_floor=cfg["t_floor"])


def _instance_from(cfg: dict) -> ChainInstance:
    return ChainInstance(N=cfg["N"], J=cfg["J"], h=cfg["h"], D=cfg["D"])


def cmd_aqa(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    defaults = {**INSTANCE_DEFAULTS, **SCHEDULE_DEFAULTS, "dt": 0.1, "tol": 1e-4, "max_halvings": 6}
    cfg = _merge(parser, args, defaults, required=("J", "D"))
    inst = _instance_from(cfg)
    sched = _schedule_from(cfg)
    evo = EvolutionConfig(dt=cfg["dt"], convergence_tol=cfg["tol"], max_halvings=cfg["max_halvings"])
    e0, ground = exact_ground_state(inst)
    started = time.perf_counter()
    try:
        res = evolve(inst, sched, evo)
    except ConvergenceError as exc:
        _write_json(
            args.out,
            {
                "error": str(exc),
                "dt": exc.dt,
                "fidelities": list(exc.fidelities),
                "meta": _meta(cfg),
            },
        )
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    payload = {
        "p_aqa": aqa_success(res.state, inst),
        "dt_used": res.dt_used,
        "ground_energy": e0,
        "degenerate": len(ground) > 1,
        "runtime_seconds": time.perf_counter() - started,
        "meta": _meta(cfg),
    }
    _write_json(args.out, payload)
    print(f"p_aqa={payload['p_aqa']:.6f} dt_used={res.dt_used:g} -> {args.out}")
    return EXIT_OK


def cmd_ta(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    defaults = {
        **INSTANCE_DEFAULTS,
        **SCHEDULE_DEFAULTS,
        "S": 1000,
        "R": 20,
        "seed": 0,
        "energy_tol": 1e-6,
        "temperature_mode": "temperature",
    }
    cfg = _merge(parser, args, defaults, required=("J", "D"))
    if cfg["S"] < 1 or cfg["R"] < 1:
        parser.error("S and R must be >= 1")
    inst = _instance_from(cfg)
    run_cfg = TARunConfig(
        sweeps=cfg["S"],
        restarts=cfg["R"],
        seed=cfg["seed"],
        schedule=_schedule_from(cfg),
        energy_tol=cfg["energy_tol"],
        temperature_mode=cfg["temperature_mode"],
    )
    res = ta_run(inst, run_cfg)
    payload = {
        "p_ta": res.success_probability,
        "final_energies": [float(e) for e in res.final_energies],
        "ground_energy": res.ground_energy,
        "seed": cfg["seed"],
        "meta": _meta(cfg, seed=cfg["seed"], prng=PRNG_IDENTITY),
    }
    _write_json(args.out, payload)
    print(f"p_ta={res.success_probability:.4f} -> {args.out}")
    return EXIT_OK


def cmd_sweep(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    overrides = {}
    if args.J_range is not None:
        overrides["J_range"] = tuple(args.J_range)
    if args.D_range is not None:
        overrides["D_range"] = tuple(args.D_range)
    if args.c is not None:
        overrides["c_list"] = tuple(args.c)
    if args.profiles is not None:
        overrides["profiles"] = tuple(args.profiles)
    for key in ("h", "N", "T_total", "S", "R", "base_seed", "worker_count"):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    cfg = SweepConfig.from_dict({**file_cfg, **overrides})
    records = run_sweep(cfg, args.out, resume=args.resume, progress=args.progress)
    summary_path = Path(args.out).with_name(Path(args.out).stem + "_summary.csv")
    write_summary(sector_summary(records), summary_path)
    print(f"{len(records)} records -> {args.out} (summary: {summary_path})")
    return EXIT_OK


def cmd_landscape(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    cfg = _merge(parser, args, dict(INSTANCE_DEFAULTS), required=("J", "D"))
    inst = _instance_from(cfg)
    scatter = energy_vs_f_scatter(inst)
    prefix = Path(args.out_prefix)
    scatter_path = prefix.with_name(prefix.name + "_scatter.csv")
    envelope_path = prefix.with_name(prefix.name + "_envelope.csv")
    with open(scatter_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("f", "energy", "is_local_min"))
        for f, e, m in zip(scatter.f, scatter.energy, scatter.is_local_min):
            writer.writerow((f"{f:.10g}", f"{e:.17g}", str(int(m))))
    with open(envelope_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("f", "min_energy"))
        for f, e in zip(scatter.envelope_f, scatter.envelope_energy):
            writer.writerow((f"{f:.10g}", f"{e:.17g}"))
    _write_json(
        prefix.with_name(prefix.name + ".meta.json"),
        _meta(cfg, tie_break=TIE_BREAK_RULE, files=[str(scatter_path), str(envelope_path)]),
    )
    print(f"{scatter.f.size} configurations -> {scatter_path}, {envelope_path}")
    return EXIT_OK


def cmd_spectrum(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    defaults = {**INSTANCE_DEFAULTS, **SCHEDULE_DEFAULTS, "samples": 400, "k": 6}
    cfg = _merge(parser, args, defaults, required=("J", "D"))
    inst = _instance_from(cfg)
    sched = _schedule_from(cfg)
    scan = gap_scan(inst, sched, n_samples=cfg["samples"], k=cfg["k"])
    k = len(scan.slices[0].energies)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "g"] + [f"E{i}" for i in range(k)] + ["gap", "flag_degenerate"])
        for sl in scan.slices:
            writer.writerow(
                [f"{sl.t:.17g}", f"{sl.g:.17g}"]
                + [f"{e:.17g}" for e in sl.energies]
                + [f"{sl.gap:.17g}", str(int(sl.degenerate))]
            )
    extras: dict = {"gap_min": scan.gap_min, "t_at_min": scan.t_at_min}
    try:
        extras["adiabatic_error_bound"] = adiabatic_error_bound(scan.slices, sched)
    except DiagnosticUnavailableError as exc:
        extras["adiabatic_error_bound"] = None
        extras["adiabatic_error_note"] = str(exc)
    try:
        alpha = fit_diabatic_slope(scan)
        extras["alpha_fit"] = alpha
        extras["alpha_fit_convention"] = (
            "linear regression of the gap on up to 5 samples each side of its minimum; "
            "alpha = right slope - left slope"
        )
        extras["landau_zener"] = landau_zener(scan.gap_min, alpha) if alpha != 0 else None
    except ValueError as exc:
        extras["alpha_fit"] = None
        extras["alpha_fit_note"] = str(exc)
    _write_json(Path(args.out).with_name(Path(args.out).name + ".meta.json"), _meta(cfg, **extras))
    print(f"{len(scan.slices)} slices, gap_min={scan.gap_min:.6g} at t={scan.t_at_min:.6g} -> {args.out}")
    return EXIT_OK


def cmd_basins(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    defaults = {"J": None, "h": 0.2, "N": 5, "D_min": -5.0, "D_max": 5.0, "D_step": 0.5}
    cfg = _merge(parser, args, defaults, required=("J",))
    if cfg["D_step"] <= 0:
        parser.error("--D-step must be positive")
    count = int(round((cfg["D_max"] - cfg["D_min"]) / cfg["D_step"])) + 1
    d_values = np.round(cfg["D_min"] + np.arange(count) * cfg["D_step"], 10)
    base = ChainInstance(N=cfg["N"], J=cfg["J"], h=cfg["h"], D=0.0)
    rows = basin_curves_along_d(base, cfg["J"], d_values)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("D", "n_basins", "largest_fraction"))
        for row in rows:
            writer.writerow((f"{row.D:.10g}", str(row.n_basins), f"{row.largest_fraction:.17g}"))
    _write_json(
        Path(args.out).with_name(Path(args.out).name + ".meta.json"),
        _meta(cfg, tie_break=TIE_BREAK_RULE),
    )
    print(f"{len(rows)} rows -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tritanneal",
        description="Spin-1 quantum annealing vs trit simulated annealing on open chains",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_aqa = sub.add_parser("aqa", help="quantum annealing run; reports ground-state fidelity")
    _add_instance_flags(p_aqa)
    _add_schedule_flags(p_aqa)
    p_aqa.add_argument("--dt", type=float, help="initial Trotter step (default 0.1)")
    p_aqa.add_argument("--tol", type=float, help="fidelity convergence tolerance (default 1e-4)")
    p_aqa.add_argument("--max-halvings", type=int, dest="max_halvings", help="default 6")
    p_aqa.add_argument("--config", help="JSON file with flag defaults")
    p_aqa.add_argument("--out", default="aqa.json", help="output JSON path")
    p_aqa.set_defaults(func=cmd_aqa)

    p_ta = sub.add_parser("ta", help="trit simulated annealing run; reports success probability")
    _add_instance_flags(p_ta)
    _add_schedule_flags(p_ta)
    p_ta.add_argument("--S", type=int, help="sweeps per restart (default 1000)")
    p_ta.add_argument("--R", type=int, help="independent restarts (default 20)")
    p_ta.add_argument("--seed", type=int, help="base seed (default 0)")
    p_ta.add_argument("--energy-tol", type=float, dest="energy_tol", help="success window (default 1e-6)")
    p_ta.add_argument(
        "--temperature-mode",
        choices=TEMPERATURE_MODES,
        dest="temperature_mode",
        help="read the schedule as temperature (default) or inverse temperature",
    )
    p_ta.add_argument("--config", help="JSON file with flag defaults")
    p_ta.add_argument("--out", default="ta.json", help="output JSON path")
    p_ta.set_defaults(func=cmd_ta)

    p_sweep = sub.add_parser("sweep", help="(J, D) grid sweep comparing both annealers")
    p_sweep.add_argument("--config", help="JSON sweep configuration")
    p_sweep.add_argument("--out", default="sweep.csv", help="output CSV path")
    p_sweep.add_argument("--resume", action="store_true", help="skip records already in the output")
    p_sweep.add_argument("--progress", action="store_true", help="print one line per record")
    p_sweep.add_argument("--J-range", type=float, nargs=3, dest="J_range", metavar=("MIN", "MAX", "STEP"))
    p_sweep.add_argument("--D-range", type=float, nargs=3, dest="D_range", metavar=("MIN", "MAX", "STEP"))
    p_sweep.add_argument("--c", type=float, nargs="+", help="driver scales")
    p_sweep.add_argument("--profiles", choices=PROFILES, nargs="+", help="decay profiles")
    p_sweep.add_argument("--h", type=float)
    p_sweep.add_argument("--N", type=int)
    p_sweep.add_argument("--T", type=float, dest="T_total")
    p_sweep.add_argument("--S", type=int)
    p_sweep.add_argument("--R", type=int)
    p_sweep.add_argument("--seed", type=int, dest="base_seed")
    p_sweep.add_argument("--workers", type=int, dest="worker_count")
    p_sweep.set_defaults(func=cmd_sweep)

    p_land = sub.add_parser("landscape", help="energy vs order parameter for every configuration")
    _add_instance_flags(p_land)
    p_land.add_argument("--config", help="JSON file with flag defaults")
    p_land.add_argument("--out-prefix", dest="out_prefix", default="landscape", help="output path prefix")
    p_land.set_defaults(func=cmd_landscape)

    p_spec = sub.add_parser("spectrum", help="instantaneous spectrum along the annealing path")
    _add_instance_flags(p_spec)
    _add_schedule_flags(p_spec)
    p_spec.add_argument("--samples", type=int, help="number of time samples (default 400)")
    p_spec.add_argument("--k", type=int, help="eigenvalues per slice (default 6)")
    p_spec.add_argument("--config", help="JSON file with flag defaults")
    p_spec.add_argument("--out", default="spectrum.csv", help="output CSV path")
    p_spec.set_defaults(func=cmd_spectrum)

    p_bas = sub.add_parser("basins", help="basin statistics along a cut in D")
    p_bas.add_argument("--J", type=float, help="nearest-neighbour coupling")
    p_bas.add_argument("--h", type=float)
    p_bas.add_argument("--N", type=int)
    p_bas.add_argument("--D-min", type=float, dest="D_min")
    p_bas.add_argument("--D-max", type=float, dest="D_max")
    p_bas.add_argument("--D-step", type=float, dest="D_step")
    p_bas.add_argument("--config", help="JSON file with flag defaults")
    p_bas.add_argument("--out", default="basins.csv", help="output CSV path")
    p_bas.set_defaults(func=cmd_basins)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
