"""Command-line surface: load a scenario config, run sweeps and searches,
write plottable CSVs plus a run manifest per command.

All numbers are serialized with 17 significant digits so outputs are
byte-stable for fixed inputs; files are written atomically (temp + rename).

Exit codes: 0 success, 2 validation error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .capacity import (
    CapacityNumericalError,
    evaluate_placement,
    single_relay_link,
)
from .channel import far_field_factor, los_channel
from .geometry import build_ura, canonical_frame, centered_ura
from .montecarlo import mc_sweep
from .placement import (
    optimize_single,
    root_const_gain,
    root_max_power,
    single_antenna_proxy,
    spacing_sweep,
    two_step_search,
)
from .relay import region_boundary
from .scenario import Scenario, ScenarioError, scenario_from_config

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

# Entry magnitudes deviating more than this from the nominal hop value
# mark the placement as near-field, where the closed-form bound loosens.
NEAR_FIELD_DEVIATION = 0.02


@dataclass
class RunManifest:
    """Provenance record written next to every command output."""

    command: str
    scenario_digest: str
    seed: int
    output_paths: list[str]
    tool_version: str
    wall_time_s: float


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, payload: Any) -> None:
    _atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def scenario_digest(config: dict) -> str:
    """Stable hash of a canonicalized (key-order independent) config."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _load_config(args: argparse.Namespace) -> dict:
    try:
        with open(args.config) as handle:
            config = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"config {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ScenarioError(f"config {args.config} must hold a JSON object")
    if getattr(args, "nf_db", None) is not None:
        config["noise_figure_db"] = args.nf_db
    if getattr(args, "power_mode", None) is not None:
        config["relay_power_mode"] = args.power_mode
    return config


def _swarm_counts(config: dict) -> tuple[int, int]:
    swarm = config.get("swarm_array", {})
    counts = swarm.get("counts", [2, 2])
    return int(counts[0]), int(counts[1])


def _swarm_spacings(config: dict) -> tuple[float, float]:
    swarm = config.get("swarm_array")
    if not swarm or "spacings_m" not in swarm:
        raise ScenarioError(
            "fixed-spec placement needs config field 'swarm_array.spacings_m'"
        )
    spacings = swarm["spacings_m"]
    return float(spacings[0]), float(spacings[1])


def _r1_grid(args: argparse.Namespace, scenario: Scenario) -> np.ndarray:
    if not args.r1_step > 0:
        raise ScenarioError(f"--r1-step must be > 0, got {args.r1_step}")
    if not 0 < args.r1_min < args.r1_max < scenario.link_distance_m:
        raise ScenarioError(
            "--r1-min/--r1-max must satisfy 0 < min < max < link distance, "
            f"got [{args.r1_min}, {args.r1_max}]"
        )
    count = int(np.floor((args.r1_max - args.r1_min) / args.r1_step + 1e-9)) + 1
    return args.r1_min + args.r1_step * np.arange(count)


def _finish(
    command: str,
    config: dict,
    seed: int,
    outputs: list[Path],
    started_at: float,
    out_dir: Path,
) -> int:
    manifest = RunManifest(
        command=command,
        scenario_digest=scenario_digest(config),
        seed=int(seed),
        output_paths=[str(p) for p in outputs],
        tool_version=__version__,
        wall_time_s=time.perf_counter() - started_at,
    )
    _write_json(out_dir / f"{command.replace('-', '_')}_manifest.json", manifest.__dict__)
    return EXIT_OK


def _near_field_flag(scenario: Scenario, positions: np.ndarray, r1_m: float) -> bool:
    tx_points, rx_points, _ = canonical_frame(scenario, r1_m)
    lam = scenario.wavelength_m
    h1 = los_channel(tx_points, positions, lam)
    h2 = los_channel(positions, rx_points, lam)
    dev1 = far_field_factor(h1, r1_m).max_magnitude_deviation
    dev2 = far_field_factor(h2, scenario.link_distance_m - r1_m).max_magnitude_deviation
    return max(dev1, dev2) > NEAR_FIELD_DEVIATION


def cmd_single_sweep(args: argparse.Namespace) -> int:
    started_at = time.perf_counter()
    config = _load_config(args)
    scenario = single_antenna_proxy(scenario_from_config(config))
    grid = _r1_grid(args, scenario)

    boundary = region_boundary(scenario)
    flagged: dict[int, list[str]] = {}

    def flag_nearest(r1: float, label: str) -> None:
        index = int(np.argmin(np.abs(grid - r1)))
        flagged.setdefault(index, []).append(label)

    if grid[0] <= boundary <= grid[-1]:
        flag_nearest(boundary, "region_boundary")
    power_root = root_max_power(scenario)
    if grid[0] <= power_root <= min(boundary, grid[-1]):
        flag_nearest(power_root, "max_power_root")
    for root in root_const_gain(scenario):
        if max(boundary, grid[0]) <= root <= grid[-1]:
            flag_nearest(root, "const_gain_root")

    rows = []
    for index, r1 in enumerate(grid):
        cap, gain = single_relay_link(scenario, float(r1))
        rows.append(
            (
                float(r1),
                cap,
                gain.alpha_u,
                gain.regime.value,
                ";".join(flagged.get(index, [])),
            )
        )

    out_dir = Path(args.out)
    csv_path = out_dir / "single_sweep.csv"
    _write_csv(
        csv_path,
        ["r1_m", "capacity_bits_per_use", "alpha_u", "regime", "root_flags"],
        rows,
    )
    return _finish("single-sweep", config, 0, [csv_path], started_at, out_dir)


def cmd_single_opt(args: argparse.Namespace) -> int:
    started_at = time.perf_counter()
    config = _load_config(args)
    scenario = single_antenna_proxy(scenario_from_config(config))
    solution = optimize_single(scenario, args.r1_min, args.r1_max)

    payload = {
        "r1_m": solution.r1_m,
        "capacity_bits_per_use": solution.capacity_bits_per_use,
        "bound_gap": solution.bound_gap,
        "candidates_evaluated": [
            {
                "r1_m": entry.value,
                "capacity_bits_per_use": entry.capacity_bits_per_use,
                "regime": entry.regime.value,
            }
            for entry in solution.candidates_evaluated
        ],
    }
    out_dir = Path(args.out)
    json_path = out_dir / "single_opt.json"
    _write_json(json_path, payload)
    return _finish("single-opt", config, 0, [json_path], started_at, out_dir)


def cmd_swarm_sweep(args: argparse.Namespace) -> int:
    started_at = time.perf_counter()
    config = _load_config(args)
    scenario = scenario_from_config(config)
    grid = _r1_grid(args, scenario)
    counts = _swarm_counts(config)

    rows = []
    for r1 in grid:
        r1 = float(r1)
        if args.placement == "ura-search":
            solution = two_step_search(
                scenario, counts, sweep_points=args.sweep_points, r1_m=r1
            )
            spec = solution.swarm_spec
        else:
            _, _, swarm_reference = canonical_frame(scenario, r1)
            spec = centered_ura(counts, _swarm_spacings(config), swarm_reference)
        positions = build_ura(spec)
        report = evaluate_placement(scenario, positions, r1)
        rows.append(
            (
                r1,
                report.capacity_bits_per_use,
                report.bound_trace,
                report.bound_singular,
                report.bound_far_field,
                _near_field_flag(scenario, positions, r1),
                report.icn_h1,
                report.icn_h2,
                report.alpha_u,
                report.regime.value,
                spec.spacings_m[0],
                spec.spacings_m[1],
            )
        )

    out_dir = Path(args.out)
    csv_path = out_dir / "swarm_sweep.csv"
    _write_csv(
        csv_path,
        [
            "r1_m",
            "capacity_bits_per_use",
            "bound_trace",
            "bound_singular",
            "bound_far_field",
            "near_field",
            "icn_h1",
            "icn_h2",
            "alpha_u",
            "regime",
            "du0_m",
            "du1_m",
        ],
        rows,
    )
    return _finish("swarm-sweep", config, 0, [csv_path], started_at, out_dir)


def cmd_mc(args: argparse.Namespace) -> int:
    started_at = time.perf_counter()
    config = _load_config(args)
    scenario = scenario_from_config(config)
    grid = _r1_grid(args, scenario)
    counts = _swarm_counts(config)
    n_uavs = counts[0] * counts[1]

    stats = mc_sweep(
        scenario,
        [float(r1) for r1 in grid],
        n_samples=args.samples,
        square_width_m=args.width,
        master_seed=args.seed,
        n_uavs=n_uavs,
        max_workers=args.workers,
    )
    rows = [
        (s.r1_m, s.mean, s.p5, s.p95, s.max, s.n_samples)
        for s in stats
    ]
    out_dir = Path(args.out)
    csv_path = out_dir / "mc.csv"
    _write_csv(
        csv_path,
        ["r1_m", "mean_bits_per_use", "p5_bits_per_use", "p95_bits_per_use", "max_bits_per_use", "n_samples"],
        rows,
    )
    return _finish("mc", config, args.seed, [csv_path], started_at, out_dir)


def cmd_spacing_sweep(args: argparse.Namespace) -> int:
    started_at = time.perf_counter()
    config = _load_config(args)
    scenario = scenario_from_config(config)
    counts = _swarm_counts(config)
    samples = spacing_sweep(
        scenario,
        args.r1,
        (args.spacing_min, args.spacing_max),
        args.points,
        n_uavs=counts,
    )
    rows = [
        (s.spacing_m, s.capacity_bits_per_use, s.icn_h1, s.icn_h2) for s in samples
    ]
    out_dir = Path(args.out)
    csv_path = out_dir / "spacing_sweep.csv"
    _write_csv(
        csv_path,
        ["spacing_m", "capacity_bits_per_use", "icn_h1", "icn_h2"],
        rows,
    )
    return _finish("spacing-sweep", config, 0, [csv_path], started_at, out_dir)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="scenario config JSON")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--nf-db", type=float, default=None, help="override noise figure (dB)")
    parser.add_argument(
        "--power-mode",
        choices=["per-uav", "total"],
        default=None,
        help="override relay power budget interpretation",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarmrelay",
        description="Capacity and placement analysis for UAV amplify-and-forward MIMO relays",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("single-sweep", help="single-relay capacity over a distance grid")
    _add_common(p)
    p.add_argument("--r1-min", type=float, default=10.0)
    p.add_argument("--r1-max", type=float, default=990.0)
    p.add_argument("--r1-step", type=float, default=1.0)
    p.set_defaults(func=cmd_single_sweep)

    p = sub.add_parser("single-opt", help="optimal single-relay distance")
    _add_common(p)
    p.add_argument("--r1-min", type=float, default=10.0)
    p.add_argument("--r1-max", type=float, default=None)
    p.set_defaults(func=cmd_single_opt)

    p = sub.add_parser("swarm-sweep", help="swarm capacity and bounds over a distance grid")
    _add_common(p)
    p.add_argument("--r1-min", type=float, default=100.0)
    p.add_argument("--r1-max", type=float, default=900.0)
    p.add_argument("--r1-step", type=float, default=100.0)
    p.add_argument(
        "--placement",
        choices=["ura-search", "fixed-spec"],
        default="ura-search",
        help="search the swarm spacing or use the config's swarm_array",
    )
    p.add_argument("--sweep-points", type=int, default=25)
    p.set_defaults(func=cmd_swarm_sweep)

    p = sub.add_parser("mc", help="random-placement capacity statistics")
    _add_common(p)
    p.add_argument("--r1-min", type=float, default=100.0)
    p.add_argument("--r1-max", type=float, default=900.0)
    p.add_argument("--r1-step", type=float, default=100.0)
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--width", type=float, default=80.0, help="placement square width (m)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("spacing-sweep", help="capacity and hop orthogonality vs swarm spacing")
    _add_common(p)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--spacing-min", type=float, required=True)
    p.add_argument("--spacing-max", type=float, required=True)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_spacing_sweep)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ValueError) as exc:
        print(f"swarmrelay: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except CapacityNumericalError as exc:
        print(f"swarmrelay: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"swarmrelay: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
