"""Phase quality metrics: RMSE, coherence, residue counting."""

import math

import numpy as np
import pytest

from bpinsar import (
    ComplexImage,
    ImageGrid,
    IdealInterferogram,
    count_residues,
    evaluate_interferogram,
    mean_coherence,
    phase_rmse,
    wrap_phase,
)
from bpinsar.metrics import PhaseMetrics, write_metrics_csv


def as_image(phase: np.ndarray) -> ComplexImage:
    grid = ImageGrid(phase.shape[0], phase.shape[1], 1.0)
    return ComplexImage(data=np.exp(1j * phase), grid=grid)


def test_rmse_zero_for_identical_phase():
    phase = np.linspace(-2.0, 2.0, 64).reshape(8, 8)
    image = as_image(phase)
    truth = IdealInterferogram(phase=np.angle(image.data))
    assert phase_rmse(image, truth) == 0.0


def test_rmse_equals_constant_offset():
    truth = np.zeros((16, 16))
    estimate = as_image(truth + math.pi / 6.0)
    got = phase_rmse(estimate, IdealInterferogram(phase=truth))
    assert got == pytest.approx(math.pi / 6.0, rel=1e-12)


def test_rmse_uses_wrapped_differences():
    """Estimates near +pi against truth near -pi differ by a small wrap."""
    truth = np.full((8, 8), -math.pi + 0.1)
    estimate = as_image(np.full((8, 8), math.pi - 0.1))
    got = phase_rmse(estimate, IdealInterferogram(phase=truth))
    assert got == pytest.approx(0.2, abs=1e-9)


def test_rmse_of_uniform_noise_matches_variance_formula():
    """Uniform phase error on (-pi, pi] has RMS pi / sqrt(3)."""
    rng = np.random.default_rng(7)
    noise = rng.uniform(-math.pi, math.pi, size=(64, 64))
    got = phase_rmse(as_image(noise), IdealInterferogram(phase=np.zeros((64, 64))))
    assert got == pytest.approx(math.pi / math.sqrt(3.0), rel=0.02)


def test_rmse_region_restriction():
    truth = np.zeros((8, 8))
    phase = np.zeros((8, 8))
    phase[:4] = 1.0  # top half off by 1 radian
    region = np.zeros((8, 8), dtype=bool)
    region[4:] = True
    full = phase_rmse(as_image(phase), IdealInterferogram(phase=truth))
    bottom = phase_rmse(as_image(phase), IdealInterferogram(phase=truth), region=region)
    assert bottom == 0.0
    assert full == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-12)
    with pytest.raises(ValueError):
        phase_rmse(
            as_image(phase),
            IdealInterferogram(phase=truth),
            region=np.zeros((8, 8), dtype=bool),
        )


def test_rmse_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        phase_rmse(as_image(np.zeros((4, 4))), IdealInterferogram(phase=np.zeros((5, 5))))


# -- coherence -------------------------------------------------------------------


def test_perfect_match_gives_unit_coherence():
    phase = np.linspace(-1.0, 1.0, 144).reshape(12, 12)
    got = mean_coherence(as_image(phase), IdealInterferogram(phase=phase))
    assert got == pytest.approx(1.0, rel=1e-12)


def test_constant_offset_keeps_unit_coherence():
    phase = np.linspace(-1.0, 1.0, 144).reshape(12, 12)
    shifted = as_image(phase + 0.8)
    got = mean_coherence(shifted, IdealInterferogram(phase=phase))
    assert got == pytest.approx(1.0, rel=1e-12)


def test_uniform_noise_coherence_is_low():
    rng = np.random.default_rng(11)
    noise = rng.uniform(-math.pi, math.pi, size=(64, 64))
    got = mean_coherence(
        as_image(noise), IdealInterferogram(phase=np.zeros((64, 64))), window=5
    )
    assert got < 0.3


def test_coherence_window_validation():
    phase = np.zeros((8, 8))
    image = as_image(phase)
    truth = IdealInterferogram(phase=phase)
    with pytest.raises(ValueError):
        mean_coherence(image, truth, window=4)  # even
    with pytest.raises(ValueError):
        mean_coherence(image, truth, window=1)  # too small
    with pytest.raises(ValueError):
        mean_coherence(image, truth, window=9)  # exceeds the grid


# -- residues --------------------------------------------------------------------


def test_smooth_ramp_has_no_residues():
    rows = np.linspace(0.0, 2.0, 16)
    phase = wrap_phase(rows[:, None] + 0.5 * rows[None, :])
    assert count_residues(phase) == 0


def test_single_vortex_counts_one_residue():
    n = 17
    y, x = np.mgrid[0:n, 0:n].astype(float)
    phase = np.arctan2(y - (n - 1) / 2.0 + 0.5, x - (n - 1) / 2.0 + 0.5)
    assert count_residues(phase) == 1


def test_vortex_pair_counts_two_residues():
    n = 24
    y, x = np.mgrid[0:n, 0:n].astype(float)
    one = np.arctan2(y - 5.5, x - 5.5)
    other = -np.arctan2(y - 17.5, x - 17.5)
    phase = wrap_phase(one + other)
    assert count_residues(phase) == 2


def test_noisy_field_has_many_residues():
    rng = np.random.default_rng(13)
    phase = rng.uniform(-math.pi, math.pi, size=(32, 32))
    assert count_residues(phase) > 10


# -- bundles and CSV ---------------------------------------------------------------


def test_evaluate_bundles_all_three_metrics():
    rng = np.random.default_rng(17)
    truth_phase = np.zeros((16, 16))
    noisy = 0.2 * rng.standard_normal((16, 16))
    metrics = evaluate_interferogram(as_image(noisy), IdealInterferogram(phase=truth_phase))
    assert isinstance(metrics, PhaseMetrics)
    assert metrics.rmse_rad == pytest.approx(float(np.sqrt(np.mean(noisy**2))), rel=1e-9)
    assert 0.9 < metrics.mean_coherence <= 1.0
    assert metrics.residue_count == 0


def test_metrics_csv_layout_and_determinism(tmp_path):
    rows = [
        ("bp", 1.0, PhaseMetrics(rmse_rad=0.5, mean_coherence=0.9, residue_count=3)),
        ("proposed", 0.5, PhaseMetrics(rmse_rad=0.25, mean_coherence=0.95, residue_count=0)),
    ]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_metrics_csv(a, rows)
    write_metrics_csv(b, rows)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().strip().split("\n")
    assert lines[0] == "method,sampling_fraction,rmse_rad,mean_coherence,residue_count"
    assert len(lines) == 3
    assert lines[1].startswith("bp,")
    fields = lines[2].split(",")
    assert fields[0] == "proposed"
    assert float(fields[1]) == 0.5
    assert int(fields[4]) == 0
