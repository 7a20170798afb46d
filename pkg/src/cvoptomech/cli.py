"""Command-line interface and experiment driver.

Subcommands: `simulate <config-file>`, `figure <preset-name> --out <dir>`,
`presets`. Every run writes one CSV per configured output name plus a
companion `<name>.meta.json` recording parameters, grids, tolerances, and
the artifact version. Identical inputs produce byte-identical outputs.

Exit codes: 0 success, 2 config error, 4 instability, 3 any other
numerical or physicality failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import tolerances
from ._kernels import BACKEND
from .config import RunConfig, parse_config
from .dynamics import (
    EntanglementSeries,
    IntegrationConfig,
    entanglement_series,
    integrate_covariance,
    max_negativity,
)
from .errors import ConfigError, NumericalError, PhysicalityError, StabilityError
from .gaussian import thermal_vacuum_initial
from .model import build_drift_diffusion
from .output_mode import entanglement_vs_duration
from .presets import get_preset, list_presets
from .version import __version__

SERIES_HEADER = ("t_inv_gamma", "t_paper_units", "e_n", "n_th", "scheme", "regime")
SWEEP_HEADER = ("n_th", "max_e_n", "argmax_t_or_tau", "scheme_or_config")

# Times are emitted both raw (units of 1/gamma) and in the figure unit
# 2*pi/(10^3 gamma), so plots overlay the reference axes directly.
PAPER_TIME_UNIT = 2.0 * math.pi / 1.0e3

_MAX_WORKERS = 8


@dataclass(frozen=True)
class ExperimentResult:
    """Rows (unformatted values) of one RunConfig plus its metadata record."""

    header: tuple[str, ...]
    rows: list[tuple]
    metadata: dict


def _tau_grid(cfg: RunConfig) -> np.ndarray:
    """Durations tau_i = i * tau_max / tau_points, i = 1..tau_points: the
    half-open window (0, tau_max] on a uniform grid."""
    i = np.arange(1, cfg.tau_points + 1, dtype=float)
    return i * (cfg.tau_max / cfg.tau_points)


def _intracavity_series(cfg: RunConfig, n_th: float) -> EntanglementSeries:
    params = cfg.system_params(n_th)
    dd = build_drift_diffusion(params, cfg.scheme_enum)
    icfg = IntegrationConfig(
        t_max=cfg.t_max, dt=cfg.dt, sample_stride=cfg.sample_stride,
        max_rate=params.max_rate,
    )
    samples = integrate_covariance(dd, thermal_vacuum_initial(n_th), icfg)
    return entanglement_series(samples)


def _series_for(cfg: RunConfig, n_th: float) -> EntanglementSeries:
    if cfg.regime == "intracavity":
        return _intracavity_series(cfg, n_th)
    return entanglement_vs_duration(cfg.bad_cavity_params(n_th), _tau_grid(cfg))


def sweep_label(cfg: RunConfig) -> str:
    """scheme_or_config column: the scheme name for intracavity sweeps, the
    coupling pairing (equal/unequal, values) for output-mode sweeps."""
    if cfg.regime == "intracavity":
        return cfg.scheme
    kind = "equal" if cfg.G1 == cfg.G2 else "unequal"
    return f"{kind}_coupling_{cfg.G1:g}_{cfg.G2:g}"


def _config_metadata(cfg: RunConfig) -> dict:
    meta = {k: v for k, v in asdict(cfg).items() if v is not None}
    meta["n_th"] = list(cfg.n_th)
    if cfg.regime == "intracavity":
        icfg = IntegrationConfig(
            t_max=cfg.t_max, dt=cfg.dt, sample_stride=cfg.sample_stride,
            max_rate=cfg.system_params(cfg.n_th[0]).max_rate,
        )
        meta["n_steps"] = icfg.n_steps
        meta["samples_per_series"] = icfg.n_steps // cfg.sample_stride + 1
    else:
        p = cfg.bad_cavity_params(cfg.n_th[0])
        meta["big_gamma"] = p.big_gamma
        meta["bad_cavity_valid"] = p.bad_cavity_valid
        meta["strongly_adiabatic"] = p.strongly_adiabatic
        meta["tau_grid"] = [float(t) for t in _tau_grid(cfg)]
    if cfg.mode == "sweep":
        meta["scheme_or_config"] = sweep_label(cfg)
    return meta


def run_experiment(cfg: RunConfig) -> ExperimentResult:
    """Compute all CSV rows for one configuration. Pure compute: no files.

    Series mode emits one row per recorded sample per n_th; sweep mode emits
    one (max E_N, argmax time-or-duration) row per n_th. Sweep points run on
    a bounded thread pool; rows are gathered in grid order either way.
    """
    if cfg.mode == "series":
        rows = []
        for n_th in cfg.n_th:
            series = _series_for(cfg, n_th)
            for t, e_n in zip(series.times, series.values):
                rows.append(
                    (float(t), float(t) / PAPER_TIME_UNIT, float(e_n),
                     n_th, cfg.scheme, cfg.regime)
                )
        return ExperimentResult(SERIES_HEADER, rows, _config_metadata(cfg))

    label = sweep_label(cfg)
    workers = min(len(cfg.n_th), os.cpu_count() or 1, _MAX_WORKERS)

    def sweep_point(n_th: float) -> tuple[float, float]:
        return max_negativity(_series_for(cfg, n_th))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(sweep_point, cfg.n_th))
    else:
        points = [sweep_point(n_th) for n_th in cfg.n_th]
    rows = [
        (n_th, e_max, t_at, label)
        for n_th, (t_at, e_max) in zip(cfg.n_th, points)
    ]
    return ExperimentResult(SWEEP_HEADER, rows, _config_metadata(cfg))


def _format(value) -> str:
    if isinstance(value, str):
        return value
    return "%.15g" % (value,)


def write_csv(path: Path, header: tuple[str, ...], rows: list[tuple]) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format(v) for v in row])


def write_metadata(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _meta_path(csv_path: Path) -> Path:
    return csv_path.with_name(csv_path.stem + ".meta.json")


def write_outputs(configs: list[RunConfig], out_dir: Path) -> list[Path]:
    """Run every config and write one CSV (+ metadata) per distinct output
    name, concatenating rows of configs that share one. On any failure all
    files created by this call are removed before the error propagates."""
    grouped: dict[str, list[RunConfig]] = {}
    for cfg in configs:
        grouped.setdefault(cfg.output, []).append(cfg)

    out_dir.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []
    try:
        for output_name, group in grouped.items():
            results = [run_experiment(cfg) for cfg in group]
            header = results[0].header
            if any(r.header != header for r in results):
                raise ConfigError(
                    f"configs writing {output_name!r} mix series and sweep modes"
                )
            rows = [row for r in results for row in r.rows]
            csv_path = out_dir / output_name
            created.append(csv_path)
            write_csv(csv_path, header, rows)
            meta_path = _meta_path(csv_path)
            created.append(meta_path)
            write_metadata(meta_path, {
                "artifact_version": __version__,
                "backend": BACKEND,
                "csv": output_name,
                "csv_schema": list(header),
                "time_units": {
                    "t_inv_gamma": "1/gamma",
                    "t_paper_units": "2*pi/(1e3*gamma)",
                },
                "tolerances": {
                    name: getattr(tolerances, name)
                    for name in dir(tolerances)
                    if name.isupper()
                },
                "configs": [r.metadata for r in results],
            })
        return created
    except BaseException:
        for path in created:
            path.unlink(missing_ok=True)
        raise


def cmd_simulate(config_file: str) -> int:
    text = Path(config_file).read_text(encoding="utf-8")
    cfg = parse_config(text)
    for path in write_outputs([cfg], Path.cwd()):
        print(path)
    return 0


def cmd_figure(preset_name: str, out: str) -> int:
    preset = get_preset(preset_name)
    for path in write_outputs(list(preset.configs), Path(out)):
        print(path)
    return 0


def cmd_presets() -> int:
    for preset in list_presets():
        print(f"{preset.name}: {preset.description}")
        for cfg in preset.configs:
            pairs = []
            for field, value in asdict(cfg).items():
                if value is None:
                    continue
                if field == "n_th":
                    value = ",".join(_format(v) for v in value)
                pairs.append(f"{field}={value}")
            print("  " + " ".join(pairs))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvoptomech",
        description="Continuous-variable optomechanical entanglement simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_sim = sub.add_parser("simulate", help="run one config file; CSVs land in the current directory")
    p_sim.add_argument("config_file")
    p_fig = sub.add_parser("figure", help="regenerate a figure preset's data")
    p_fig.add_argument("preset_name")
    p_fig.add_argument("--out", default=".", help="output directory (default: current)")
    sub.add_parser("presets", help="list the frozen figure presets")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config_file)
        if args.command == "figure":
            return cmd_figure(args.preset_name, args.out)
        return cmd_presets()
    except (PhysicalityError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
