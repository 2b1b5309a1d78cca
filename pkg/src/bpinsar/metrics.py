"""Interferometric phase quality measures.

All comparisons are carried out on wrapped phase differences, so a
constant phase offset or any magnitude scaling of the estimate leaves
every metric unchanged except where noted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .bp_imaging import ComplexImage
from .scene import IdealInterferogram, wrap_phase


@dataclass(frozen=True)
class PhaseMetrics:
    rmse_rad: float
    mean_coherence: float
    residue_count: int


def _phase_of(estimate: ComplexImage | np.ndarray) -> np.ndarray:
    data = np.asarray(getattr(estimate, "data", estimate))
    if np.iscomplexobj(data):
        return np.angle(data)
    return np.asarray(data, dtype=np.float64)


def _truth_phase(truth: IdealInterferogram | np.ndarray) -> np.ndarray:
    return np.asarray(getattr(truth, "phase", truth), dtype=np.float64)


def phase_rmse(
    estimate: ComplexImage | np.ndarray,
    truth: IdealInterferogram | np.ndarray,
    region: np.ndarray | None = None,
) -> float:
    """Root-mean-square wrapped phase error against the reference.

    region, when given, is a boolean array selecting the evaluated
    pixels; it must select at least one.
    """
    est = _phase_of(estimate)
    ref = _truth_phase(truth)
    if est.shape != ref.shape:
        raise ValueError(f"shape mismatch: estimate {est.shape}, truth {ref.shape}")
    diff = wrap_phase(est - ref)
    if region is not None:
        region = np.asarray(region, dtype=bool)
        if region.shape != est.shape:
            raise ValueError(
                f"region shape {region.shape} does not match {est.shape}"
            )
        diff = diff[region]
        if diff.size == 0:
            raise ValueError("region selects no pixels")
    return float(np.sqrt(np.mean(diff**2)))


def mean_coherence(
    estimate: ComplexImage | np.ndarray,
    truth: IdealInterferogram | np.ndarray,
    window: int = 5,
) -> float:
    """Average local coherence of the residual phase.

    The residual phasor exp(j (est - ref)) is averaged over a window x
    window neighborhood; the image mean of its magnitude is returned.
    1.0 means the residual phase is locally constant (a global offset
    still scores 1.0); white residual phase scores near 1 / window.
    """
    if window < 3 or window % 2 == 0:
        raise ValueError(f"window must be an odd count >= 3, got {window!r}")
    est = _phase_of(estimate)
    ref = _truth_phase(truth)
    if est.shape != ref.shape:
        raise ValueError(f"shape mismatch: estimate {est.shape}, truth {ref.shape}")
    if window > min(est.shape):
        raise ValueError(
            f"window {window} exceeds grid extent {min(est.shape)}"
        )
    residual = est - ref
    real = ndimage.uniform_filter(np.cos(residual), size=window, mode="reflect")
    imag = ndimage.uniform_filter(np.sin(residual), size=window, mode="reflect")
    return float(np.mean(np.hypot(real, imag)))


def count_residues(phase: np.ndarray) -> int:
    """Number of 2x2 loops whose wrapped cyclic phase sum is nonzero.

    Each elementary loop sum is a multiple of 2 pi; nonzero values mark
    phase residues (unwrapping obstructions).
    """
    phase = np.asarray(phase, dtype=np.float64)
    if phase.ndim != 2 or min(phase.shape) < 2:
        raise ValueError(f"phase must be 2-D with both sides >= 2, got {phase.shape}")
    d_right = wrap_phase(phase[:, 1:] - phase[:, :-1])
    d_down = wrap_phase(phase[1:, :] - phase[:-1, :])
    loops = (
        d_right[:-1, :] + d_down[:, 1:] - d_right[1:, :] - d_down[:, :-1]
    )
    cycles = np.round(loops / (2.0 * np.pi)).astype(np.int64)
    return int(np.count_nonzero(cycles))


def evaluate_interferogram(
    estimate: ComplexImage | np.ndarray,
    truth: IdealInterferogram | np.ndarray,
    window: int = 5,
    region: np.ndarray | None = None,
) -> PhaseMetrics:
    """Bundle the three phase metrics for one estimate."""
    return PhaseMetrics(
        rmse_rad=phase_rmse(estimate, truth, region),
        mean_coherence=mean_coherence(estimate, truth, window),
        residue_count=count_residues(_phase_of(estimate)),
    )


def write_metrics_csv(path, rows: list[tuple[str, float, PhaseMetrics]]) -> None:
    """Write (method, sampling_fraction, metrics) rows deterministically.

    Timing is deliberately excluded so repeated runs of one
    configuration produce byte-identical files; wall-clock figures
    live in the solver report.
    """
    lines = ["method,sampling_fraction,rmse_rad,mean_coherence,residue_count"]
    for method, fraction, m in rows:
        lines.append(
            f"{method},{fraction!r},{m.rmse_rad!r},{m.mean_coherence!r},{m.residue_count}"
        )
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
