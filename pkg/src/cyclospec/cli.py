"""Command line front end.

Two entry styles: ``--preset NAME`` runs a bundled scenario; ``--config
PATH`` runs a key-value configuration file.  Every run writes a CSV, a
metadata sidecar sufficient to regenerate the run, and a PNG figure of the
same data.  Exit codes: 0 success, 2 configuration or validation problem,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

import numpy as np

from . import __version__
from .chirality import assay_mixture, mixture_spectrum
from .config import ConfigError, Mode, RunConfig, parse_config_text, parse_window, validate_run_config
from .dynamics import evolve_exact
from .model import AmplitudeVector, NumericsError, SystemParams, Topology, validate_regime
from .presets import PRESETS, Dataset, run_preset
from .reporting import (figure_path, fmt, render_dataset, sidecar_path,
                        write_csv, write_dataset_csv, write_sidecar)
from .spectrum import (dk_consistency, spectrum_common, spectrum_distinct,
                       spectrum_normalization, phase_sweep)


def _params_entries(params: SystemParams) -> dict[str, str]:
    out = {}
    for f in fields(SystemParams):
        value = getattr(params, f.name)
        out[f.name] = value.value if isinstance(value, Topology) else fmt(value)
    return out


def _config_entries(config: RunConfig, out: Path) -> dict[str, str]:
    entries: dict[str, str] = {}
    if config.preset:
        entries["preset"] = config.preset
    if config.mode:
        entries["mode"] = config.mode.value
    entries.update(_params_entries(config.params))
    entries["initial"] = config.initial
    if config.mode is Mode.MIXTURE:
        entries["n_left"] = fmt(config.n_left)
        entries["n_right"] = fmt(config.n_right)
    if config.mode in (Mode.PHASE_SWEEP, Mode.VALIDATE):
        entries["delta_k"] = fmt(config.delta_k)
    if config.window is not None:
        entries["window"] = f"{fmt(config.window[0])}:{fmt(config.window[1])}"
    if config.n_points is not None:
        entries["n_points"] = str(config.n_points)
    if config.t_end is not None:
        entries["t_end"] = fmt(config.t_end)
    entries["out"] = str(out)
    return entries


def _run_mode(config: RunConfig) -> tuple[Dataset | None, dict[str, str], list | None]:
    """Execute the configured mode.

    Returns (dataset, info, validation_rows); exactly one of dataset and
    validation_rows is set.
    """
    params = config.params
    initial = AmplitudeVector.basis(config.initial)
    info: dict[str, str] = {}

    if config.mode is Mode.POPULATIONS:
        t_end = config.t_end if config.t_end else 5.0
        n = config.n_points if config.n_points else 1000
        times = np.linspace(0.0, t_end, n)
        traj = evolve_exact(params, initial, times)
        series = [(f"pop_{name}", col) for name, col in zip("abc", traj.populations.T)]
        info["method"] = traj.method
        return Dataset("populations", "time", times, series, params), info, None

    if config.mode is Mode.SPECTRUM:
        builder = (spectrum_common if params.topology is Topology.COMMON_LOWER
                   else spectrum_distinct)
        grid = builder(params, initial, config.window, config.n_points)
        info["method"] = "resolvent"
        info["normalization"] = fmt(spectrum_normalization(grid))
        series = [(f"S_{params.topology.value}", grid.values)]
        return Dataset("spectrum", "delta_k", grid.detunings, series, params), info, None

    if config.mode is Mode.PHASE_SWEEP:
        n = config.n_points if config.n_points else 721
        phis = np.linspace(0.0, 2 * np.pi, n)
        sweep = phase_sweep(params, initial, config.delta_k, phis)
        info["method"] = "resolvent"
        series = [(f"S_at_delta_k={fmt(config.delta_k)}", sweep[:, 1])]
        return Dataset("sweep", "phi", phis, series, params), info, None

    if config.mode is Mode.MIXTURE:
        grid = mixture_spectrum(config.n_left, config.n_right, params.phi,
                                params, initial, config.window, config.n_points)
        report = assay_mixture(config.n_left, config.n_right, params.phi, params, initial)
        info["method"] = "resolvent"
        info["s_at_cd"] = fmt(report.s_at_cd)
        info["s_at_ad"] = fmt(report.s_at_ad)
        info["eta"] = fmt(report.eta)
        info["epsilon_est"] = fmt(report.epsilon_est)
        info["epsilon_true"] = fmt(report.epsilon_true)
        series = [("S_mixture", grid.values)]
        return Dataset("spectrum", "delta_k", grid.detunings, series, params), info, None

    if config.mode is Mode.VALIDATE:
        regime = validate_regime(params)
        builder = (spectrum_common if params.topology is Topology.COMMON_LOWER
                   else spectrum_distinct)
        grid = builder(params, initial, config.window, config.n_points)
        norm = spectrum_normalization(grid)
        norm_target = initial.norm() ** 2
        dk = dk_consistency(params, initial, config.delta_k)
        rows = [
            ("regime_ratio", regime.ratio, regime.threshold, regime.ok),
            ("normalization", norm, 0.02, abs(norm - norm_target) <= 0.02),
            ("dk_consistency", dk, 1e-6, dk < 1e-6),
        ]
        info["method"] = "resolvent"
        info["normalization"] = fmt(norm)
        return None, info, rows

    raise ConfigError(["mode: required unless a preset is named"])


def _check_overwrite(out: Path, force: bool) -> None:
    existing = [p for p in (out, sidecar_path(out), figure_path(out)) if p.exists()]
    if existing and not force:
        names = ", ".join(str(p) for p in existing)
        raise ConfigError([f"out: refusing to overwrite {names} (use --force)"])


def run(config: RunConfig, force: bool = False, quiet: bool = False) -> Path:
    """Execute one run and write CSV, sidecar and figure.  Returns the CSV path."""
    validate_run_config(config)
    out = Path(config.out) if config.out else Path(
        f"{config.preset or config.mode.value}.csv")
    _check_overwrite(out, force)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)

    if config.preset:
        dataset = run_preset(config.preset, n_points=config.n_points,
                             window=config.window)
        info = dict(dataset.notes)
        config = replace(config, params=dataset.params)
        rows = None
    else:
        dataset, info, rows = _run_mode(config)

    if rows is not None:
        header = ["check", "value", "threshold", "passed"]
        columns = [[r[0] for r in rows],
                   [fmt(r[1]) for r in rows],
                   [fmt(r[2]) for r in rows],
                   ["yes" if r[3] else "no" for r in rows]]
        write_csv(out, header, columns)
    else:
        write_dataset_csv(out, dataset)
        render_dataset(dataset, figure_path(out))
    write_sidecar(sidecar_path(out), __version__, info, _config_entries(config, out))

    if not quiet:
        print(f"wrote {out}")
        print(f"wrote {sidecar_path(out)}")
        if rows is None:
            print(f"wrote {figure_path(out)}")
        for key, value in info.items():
            print(f"  {key} = {value}")
        if rows is not None:
            for name, value, threshold, ok in rows:
                print(f"  {name}: {fmt(value)} (threshold {fmt(threshold)}) "
                      f"{'ok' if ok else 'FLAG'}")
    return out


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclospec",
        description="Emission spectra and population dynamics of driven "
                    "cyclic three-level emitters; chirality-resolved "
                    "line-strength analysis.")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=sorted(PRESETS),
                        help="run a bundled scenario")
    source.add_argument("--config", type=Path, help="run a key-value config file")
    parser.add_argument("--out", type=Path, help="output CSV path "
                        "(sidecar and figure are derived from it)")
    parser.add_argument("--force", action="store_true",
                        help="overwrite existing outputs")
    parser.add_argument("--points", type=int, help="override the grid point count")
    parser.add_argument("--window", help="override the detuning window, LO:HI")
    parser.add_argument("--quiet", action="store_true", help="suppress chatter")
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.config is not None:
            if not args.config.exists():
                raise ConfigError([f"config: no such file {args.config}"])
            config = parse_config_text(args.config.read_text(encoding="utf-8"))
        else:
            config = RunConfig(preset=args.preset)
        overrides = {}
        if args.out is not None:
            overrides["out"] = str(args.out)
        if args.points is not None:
            if args.points <= 0:
                raise ConfigError(["points: must be a positive integer"])
            overrides["n_points"] = args.points
        if args.window is not None:
            overrides["window"] = parse_window(args.window)
        if overrides:
            config = replace(config, **overrides)
        run(config, force=args.force, quiet=args.quiet)
        return 0
    except ConfigError as err:
        for problem in err.problems:
            print(f"error: {problem}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (NumericsError, np.linalg.LinAlgError, FloatingPointError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
