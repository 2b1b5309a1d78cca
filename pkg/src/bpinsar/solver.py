"""Forward-backward proximal iteration for the L1-regularized fit.

Minimizes 0.5 * ||y - A theta_f||^2 + lam * ||theta_f||_1 over complex
Fourier coefficients theta_f, alternating a gradient step on the data
term with the complex soft-threshold proximal map of the penalty.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .echo_sim import EchoMatrix
from .forward_model import ObservationOperator


class SolverDivergenceError(RuntimeError):
    """Iterates left the finite range; carries the partial report."""

    def __init__(self, message: str, report: "SolveReport") -> None:
        super().__init__(message)
        self.report = report


@dataclass
class SolverConfig:
    """Iteration controls.

    lam is the L1 weight; None selects lam_scale * max |A^H y| at run
    time.  step_mu is the gradient step; None selects 0.99 / L^2 with
    L the power-iteration estimate of the operator norm.  init is
    "zero" or "bp" (start from the adjoint image of the data).
    """

    lam: float | None = None
    lam_scale: float = 0.01
    step_mu: float | None = None
    max_iterations: int = 5
    tolerance: float = 1e-4
    norm_power_iterations: int = 30
    init: str = "zero"

    def __post_init__(self) -> None:
        if self.lam is not None and self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam!r}")
        if self.lam_scale < 0:
            raise ValueError(f"lam_scale must be >= 0, got {self.lam_scale!r}")
        if self.step_mu is not None and not self.step_mu > 0:
            raise ValueError(f"step_mu must be > 0, got {self.step_mu!r}")
        if self.max_iterations < 1:
            raise ValueError(
                f"max_iterations must be >= 1, got {self.max_iterations!r}"
            )
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {self.tolerance!r}")
        if self.norm_power_iterations < 1:
            raise ValueError(
                "norm_power_iterations must be >= 1, got "
                f"{self.norm_power_iterations!r}"
            )
        if self.init not in ("zero", "bp"):
            raise ValueError(f'init must be "zero" or "bp", got {self.init!r}')


@dataclass
class SolveReport:
    """Per-iteration objective trace plus resolved solver parameters."""

    lam: float = 0.0
    step_mu: float = 0.0
    operator_norm_estimate: float | None = None
    initial_data_term: float = 0.0
    iterations: list[int] = field(default_factory=list)
    data_terms: list[float] = field(default_factory=list)
    penalties: list[float] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)
    converged: bool = False
    final_sparsity: float = 0.0

    def total_objectives(self) -> list[float]:
        return [d + p for d, p in zip(self.data_terms, self.penalties)]

    def to_csv(self, path) -> None:
        lines = ["iteration,data_term,penalty,residual_norm,seconds"]
        for i, d, p, r, s in zip(
            self.iterations,
            self.data_terms,
            self.penalties,
            self.residual_norms,
            self.seconds,
        ):
            lines.append(f"{i},{d!r},{p!r},{r!r},{s!r}")
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def soft_threshold(z: np.ndarray, threshold: float) -> np.ndarray:
    """Complex soft threshold: shrink magnitudes by threshold, keep phase."""
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold!r}")
    z = np.asarray(z, dtype=np.complex128)
    magnitude = np.abs(z)
    scale = np.zeros_like(magnitude)
    above = magnitude > threshold
    scale[above] = (magnitude[above] - threshold) / magnitude[above]
    return z * scale


def objective(
    op: ObservationOperator,
    y: EchoMatrix | np.ndarray,
    theta_f: np.ndarray,
    lam: float,
) -> tuple[float, float]:
    """Data term 0.5 ||y - A theta||^2 and penalty lam * ||theta||_1."""
    y_data = np.asarray(getattr(y, "data", y), dtype=np.complex128)
    residual = y_data - op.apply_forward(theta_f).data
    data_term = 0.5 * float(np.sum(np.abs(residual) ** 2))
    penalty = lam * float(np.sum(np.abs(theta_f)))
    return data_term, penalty


def solve(
    op: ObservationOperator,
    y_m: EchoMatrix | np.ndarray,
    config: SolverConfig | None = None,
) -> tuple[np.ndarray, SolveReport]:
    """Reconstruct interferogram Fourier coefficients from the master echo.

    Parameters
    ----------
    op : ObservationOperator
    y_m : EchoMatrix or ndarray
        Master echo, already masked consistently with op.mask.
    config : SolverConfig, optional

    Returns
    -------
    theta_f : ndarray
        Coefficient array on the operator grid; the interferogram is
        its unitary inverse 2-D DFT.
    report : SolveReport
    """
    if config is None:
        config = SolverConfig()
    y_data = np.asarray(getattr(y_m, "data", y_m), dtype=np.complex128)
    expected = (op.geom.pulse_count, op.geom.range_sample_count)
    if y_data.shape != expected:
        raise ValueError(f"echo shape {y_data.shape} does not match {expected}")

    report = SolveReport()
    if config.step_mu is None:
        norm_estimate = op.operator_norm(config.norm_power_iterations)
        if norm_estimate == 0.0:
            raise ValueError("operator norm estimate is zero; cannot pick a step")
        mu = 0.99 / norm_estimate**2
        report.operator_norm_estimate = norm_estimate
    else:
        mu = config.step_mu
    report.step_mu = mu

    adjoint_of_data = op.apply_adjoint(y_data)
    lam = (
        config.lam
        if config.lam is not None
        else config.lam_scale * float(np.max(np.abs(adjoint_of_data)))
    )
    report.lam = lam

    if config.init == "zero":
        theta = np.zeros_like(adjoint_of_data)
        residual = y_data.copy()
        gradient = adjoint_of_data  # A^H (y - A 0)
    else:
        theta = adjoint_of_data.copy()
        residual = y_data - op.apply_forward(theta).data
        gradient = None
    report.initial_data_term = 0.5 * float(np.sum(np.abs(residual) ** 2))

    for k in range(1, config.max_iterations + 1):
        tic = time.perf_counter()
        if gradient is None:
            gradient = op.apply_adjoint(residual)
        z = theta + mu * gradient
        theta_new = soft_threshold(z, mu * lam)
        if not np.all(np.isfinite(theta_new.view(np.float64))):
            raise SolverDivergenceError(
                f"iterate became non-finite at iteration {k}", report
            )
        residual = y_data - op.apply_forward(theta_new).data
        data_term = 0.5 * float(np.sum(np.abs(residual) ** 2))
        penalty = lam * float(np.sum(np.abs(theta_new)))
        report.iterations.append(k)
        report.data_terms.append(data_term)
        report.penalties.append(penalty)
        report.residual_norms.append(float(np.linalg.norm(residual)))
        report.seconds.append(time.perf_counter() - tic)
        if not np.isfinite(data_term + penalty):
            raise SolverDivergenceError(
                f"objective became non-finite at iteration {k}", report
            )
        step_size = float(np.linalg.norm(theta_new - theta))
        base = float(np.linalg.norm(theta))
        theta = theta_new
        gradient = None
        if base > 0.0 and step_size / base < config.tolerance:
            report.converged = True
            break
        if base == 0.0 and step_size == 0.0:
            report.converged = True
            break

    report.final_sparsity = float(np.mean(theta == 0))
    return theta, report
