"""Command-line pipeline: simulate, bp, reconstruct, evaluate.

Each run directory is self-describing: a manifest with every resolved
parameter, the masked echo pair, the sampling mask, back-projection
images and interferograms, the solver trace, and per-method metrics
files.  Exit codes: 0 success, 2 configuration or input-file problem,
3 numerical failure during reconstruction.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import gridio
from .bp_imaging import ComplexImage, bp_image, form_interferogram
from .config import ConfigError, ExperimentConfig, default_config, load_config, write_manifest
from .echo_sim import EchoMatrix, SamplingMask, apply_mask, make_sampling_mask, simulate_echo
from .forward_model import ObservationOperator, fourier_to_image
from .geometry import AntennaId
from .metrics import evaluate_interferogram, write_metrics_csv
from .scene import ideal_interferogram
from .solver import SolverDivergenceError, solve

_ECHO_FILES = {AntennaId.MASTER: "echo_master.isrg", AntennaId.SLAVE: "echo_slave.isrg"}
_METHOD_FILES = {"bp": "interferogram_bp.isrg", "proposed": "interferogram_proposed.isrg"}


def _load_echo(directory: Path, antenna: AntennaId) -> EchoMatrix:
    path = directory / _ECHO_FILES[antenna]
    if not path.exists():
        raise ConfigError(f"missing echo file {path}; run 'simulate' first")
    data, _header = gridio.read_grid(path)
    return EchoMatrix(data=data, antenna=antenna)


def _load_mask(directory: Path, cfg: ExperimentConfig) -> SamplingMask:
    path = directory / "mask.isrg"
    if not path.exists():
        raise ConfigError(f"missing mask file {path}; run 'simulate' first")
    data, _header = gridio.read_grid(path)
    kept = np.asarray(data).reshape(-1) >= 0.5
    return SamplingMask(
        kept_pulses=kept, fraction=cfg.sampling.fraction, seed=cfg.sampling.seed
    )


def cmd_simulate(cfg: ExperimentConfig, out: Path, threads: int | None) -> None:
    out.mkdir(parents=True, exist_ok=True)
    scene = cfg.build_scene()
    mask = make_sampling_mask(
        cfg.geometry.pulse_count, cfg.sampling.fraction, cfg.sampling.seed
    )
    # Distinct noise seeds per antenna keep receiver noise independent.
    seeds = {AntennaId.MASTER: cfg.simulation.noise_seed,
             AntennaId.SLAVE: cfg.simulation.noise_seed + 1}
    for antenna, filename in _ECHO_FILES.items():
        echo = simulate_echo(
            scene,
            cfg.geometry,
            antenna,
            noise_sigma=cfg.simulation.noise_sigma,
            seed=seeds[antenna],
            beam_halfwidth=cfg.simulation.beam_halfwidth,
            n_threads=threads,
        )
        masked = apply_mask(echo, mask)
        gridio.write_grid(out / filename, masked.data, cfg.geometry.range_sample_spacing)
    gridio.write_grid(
        out / "mask.isrg",
        mask.kept_pulses.astype(np.float64)[np.newaxis, :],
        cfg.geometry.velocity / cfg.geometry.prf,
    )
    gridio.save_scene(scene, out / "scene")
    write_manifest(out / "manifest.json", cfg)
    print(f"simulate: wrote echoes for {cfg.geometry.pulse_count} pulses "
          f"({mask.kept_count} kept) to {out}")


def cmd_bp(cfg: ExperimentConfig, out: Path, threads: int | None) -> None:
    scene = cfg.build_scene()
    grid = scene.grid
    images = {}
    for antenna, filename in _ECHO_FILES.items():
        echo = _load_echo(out, antenna)
        images[antenna] = bp_image(
            echo, cfg.geometry, antenna, cfg.imaging.upsample_factor, grid,
            n_threads=threads,
        )
        name = "image_master.isrg" if antenna is AntennaId.MASTER else "image_slave.isrg"
        gridio.write_grid(out / name, images[antenna].data, grid.pixel_spacing)
    interferogram = form_interferogram(images[AntennaId.MASTER], images[AntennaId.SLAVE])
    gridio.write_grid(out / _METHOD_FILES["bp"], interferogram.data, grid.pixel_spacing)
    gridio.export_phase_png(interferogram, out / "interferogram_bp.png")
    truth = ideal_interferogram(scene, cfg.geometry)
    m = evaluate_interferogram(interferogram, truth)
    write_metrics_csv(out / "metrics_bp.csv", [("bp", cfg.sampling.fraction, m)])
    print(f"bp: rmse={m.rmse_rad:.4f} rad coherence={m.mean_coherence:.3f} "
          f"residues={m.residue_count}")


def cmd_reconstruct(cfg: ExperimentConfig, out: Path, threads: int | None) -> None:
    scene = cfg.build_scene()
    grid = scene.grid
    mask = _load_mask(out, cfg)
    master = _load_echo(out, AntennaId.MASTER)
    slave = _load_echo(out, AntennaId.SLAVE)
    slave_image = bp_image(
        slave, cfg.geometry, AntennaId.SLAVE, cfg.imaging.upsample_factor, grid,
        n_threads=threads,
    )
    op = ObservationOperator(
        cfg.geometry, slave_image, mask, cfg.imaging.upsample_factor
    )
    try:
        theta, report = solve(op, master, cfg.solver)
    except SolverDivergenceError as exc:
        exc.report.to_csv(out / "solve_report.csv")
        raise
    report.to_csv(out / "solve_report.csv")
    interferogram = fourier_to_image(theta, grid)
    gridio.write_grid(
        out / _METHOD_FILES["proposed"], interferogram.data, grid.pixel_spacing
    )
    gridio.export_phase_png(interferogram, out / "interferogram_proposed.png")
    truth = ideal_interferogram(scene, cfg.geometry)
    m = evaluate_interferogram(interferogram, truth)
    write_metrics_csv(
        out / "metrics_proposed.csv", [("proposed", cfg.sampling.fraction, m)]
    )
    status = "converged" if report.converged else "max iterations"
    print(f"reconstruct: {len(report.iterations)} iterations ({status}), "
          f"rmse={m.rmse_rad:.4f} rad coherence={m.mean_coherence:.3f} "
          f"residues={m.residue_count}")


def cmd_evaluate(
    cfg: ExperimentConfig, out: Path, threads: int | None, run_dirs: list[str]
) -> None:
    directories = [Path(d) for d in run_dirs] or [out]
    rows = []
    for directory in directories:
        manifest_path = directory / "manifest.json"
        if not manifest_path.exists():
            raise ConfigError(f"missing manifest {manifest_path}")
        manifest = json.loads(manifest_path.read_text(encoding="ascii"))
        for key in ("altitude", "carrier_frequency", "pulse_count"):
            if manifest["geometry"][key] != getattr(cfg.geometry, key):
                raise ConfigError(
                    f"{directory}: manifest geometry ({key}) does not match the "
                    "evaluation config"
                )
        fraction = manifest["sampling"]["fraction"]
        scene = cfg.build_scene()
        truth = ideal_interferogram(scene, cfg.geometry)
        for method, filename in _METHOD_FILES.items():
            path = directory / filename
            if not path.exists():
                continue
            data, header = gridio.read_grid(path)
            estimate = ComplexImage(data=data, grid=scene.grid)
            rows.append((method, float(fraction), evaluate_interferogram(estimate, truth)))
    if not rows:
        raise ConfigError(
            "no interferograms found; run 'bp' and/or 'reconstruct' first"
        )
    out.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(out / "evaluation.csv", rows)
    print(f"{'method':<10} {'sampling':>8} {'rmse_rad':>10} {'coherence':>10} {'residues':>9}")
    for method, fraction, m in rows:
        print(f"{method:<10} {fraction:>8.2f} {m.rmse_rad:>10.4f} "
              f"{m.mean_coherence:>10.3f} {m.residue_count:>9d}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None,
                        help="experiment config file (defaults built in)")
    common.add_argument("--out", metavar="DIR", default=None,
                        help="run directory (default: [output] directory from config)")
    common.add_argument("--threads", metavar="N", type=int, default=None,
                        help="worker threads for pulse/pixel loops (default: all cores)")
    common.add_argument("--seed", metavar="N", type=int, default=None,
                        help="override the sampling mask seed")
    parser = argparse.ArgumentParser(
        prog="bpinsar",
        description="Two-antenna radar interferometry: echo simulation, "
                    "back-projection imaging and sparse reconstruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common],
                   help="synthesize masked echoes for both antennas")
    sub.add_parser("bp", parents=[common],
                   help="form the back-projection interferogram")
    sub.add_parser("reconstruct", parents=[common],
                   help="sparse-regularized interferogram reconstruction")
    evaluate = sub.add_parser("evaluate", parents=[common],
                              help="score interferograms against the scene truth")
    evaluate.add_argument("run_dirs", nargs="*", metavar="DIR",
                          help="run directories to score (default: --out)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config()
        if args.seed is not None:
            from dataclasses import replace

            cfg = replace(cfg, sampling=replace(cfg.sampling, seed=args.seed))
        out = Path(args.out) if args.out else Path(cfg.output_directory)
        if args.command == "simulate":
            cmd_simulate(cfg, out, args.threads)
        elif args.command == "bp":
            cmd_bp(cfg, out, args.threads)
        elif args.command == "reconstruct":
            cmd_reconstruct(cfg, out, args.threads)
        elif args.command == "evaluate":
            cmd_evaluate(cfg, out, args.threads, args.run_dirs)
    except (ConfigError, gridio.GridFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverDivergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
