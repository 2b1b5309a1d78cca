"""Raw echo synthesis and azimuth under-sampling.

Each scene pixel is a point scatterer at its true three-dimensional
position.  A pulse's baseband return is the superposition of
band-limited range responses

    x_i * sinc(B * (tau - tau_i(n))) * exp(-j 4 pi R_i(n) / lambda)

sampled at tau = 2 R0 / c + m / sample_rate, with tau_i(n) the two-way
delay of scatterer i at pulse n and x_i its complex reflectivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import map_chunks
from .geometry import SPEED_OF_LIGHT, AcquisitionGeometry, AntennaId, antenna_track
from .scene import SceneModel

_PULSE_CHUNK = 16


@dataclass(frozen=True)
class EchoMatrix:
    """Raw echoes, pulses along rows and fast-time samples along columns."""

    data: np.ndarray
    antenna: AntennaId

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.ndim != 2:
            raise ValueError("echo data must be 2-D (pulses x samples)")
        if data.dtype != np.complex128:
            data = data.astype(np.complex128)
        object.__setattr__(self, "data", data)
        if not isinstance(self.antenna, AntennaId):
            raise ValueError(f"antenna must be an AntennaId, got {self.antenna!r}")
        if not np.all(np.isfinite(data.view(np.float64))):
            raise ValueError("echo contains non-finite values")

    @property
    def pulse_count(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class SamplingMask:
    """Boolean keep/drop decision per pulse (zero-fill convention)."""

    kept_pulses: np.ndarray
    fraction: float
    seed: int

    def __post_init__(self) -> None:
        kept = np.asarray(self.kept_pulses, dtype=bool)
        kept.setflags(write=False)
        object.__setattr__(self, "kept_pulses", kept)
        if kept.ndim != 1 or kept.size < 1:
            raise ValueError("kept_pulses must be a non-empty 1-D boolean array")
        if not 0.0 < self.fraction <= 1.0:
            raise ValueError(f"fraction must lie in (0, 1], got {self.fraction!r}")
        n_true = int(np.count_nonzero(kept))
        if n_true < 1:
            raise ValueError("mask must keep at least one pulse")
        if abs(n_true - self.fraction * kept.size) > 1.0:
            raise ValueError(
                f"mask keeps {n_true} of {kept.size} pulses, inconsistent with "
                f"fraction {self.fraction!r}"
            )

    @property
    def pulse_count(self) -> int:
        return self.kept_pulses.size

    @property
    def kept_count(self) -> int:
        return int(np.count_nonzero(self.kept_pulses))


def make_sampling_mask(pulse_count: int, fraction: float, seed: int) -> SamplingMask:
    """Keep floor(fraction * pulse_count) pulses chosen uniformly at random."""
    if pulse_count < 1:
        raise ValueError(f"pulse_count must be >= 1, got {pulse_count!r}")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction!r}")
    n_keep = max(1, int(np.floor(fraction * pulse_count)))
    kept = np.zeros(pulse_count, dtype=bool)
    if n_keep >= pulse_count:
        kept[:] = True
    else:
        rng = np.random.default_rng(seed)
        kept[rng.choice(pulse_count, size=n_keep, replace=False)] = True
    return SamplingMask(kept_pulses=kept, fraction=fraction, seed=seed)


def full_mask(pulse_count: int) -> SamplingMask:
    return make_sampling_mask(pulse_count, 1.0, 0)


def apply_mask(echo: EchoMatrix, mask: SamplingMask) -> EchoMatrix:
    """Zero the dropped pulses; idempotent and self-adjoint."""
    if echo.pulse_count != mask.pulse_count:
        raise ValueError(
            f"echo has {echo.pulse_count} pulses, mask has {mask.pulse_count}"
        )
    data = echo.data.copy()
    data[~mask.kept_pulses] = 0.0
    return EchoMatrix(data=data, antenna=echo.antenna)


def simulate_echo(
    scene: SceneModel,
    geom: AcquisitionGeometry,
    antenna: AntennaId,
    noise_sigma: float = 0.0,
    seed: int | None = None,
    beam_halfwidth: float | None = None,
    n_threads: int | None = None,
) -> EchoMatrix:
    """Synthesize the raw echo of a scene for one antenna.

    Parameters
    ----------
    noise_sigma : float
        Standard deviation of circular complex Gaussian receiver noise
        per sample (E|n|^2 = noise_sigma^2); 0 disables noise.
    seed : int, optional
        Noise generator seed; required reproducibility hook when
        noise_sigma > 0.
    beam_halfwidth : float, optional
        Along-track half-width of the azimuth beam footprint in
        meters; scatterers outside it at a given pulse contribute
        nothing to that pulse.  None means every scatterer is visible
        from every pulse.
    """
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma!r}")
    for name in ("reflectivity", "speckle_phase", "height"):
        if not np.all(np.isfinite(getattr(scene, name))):
            raise ValueError(f"scene {name} contains non-finite values")

    positions = scene.grid.pixel_positions(scene.height)
    amplitudes = scene.complex_amplitude().reshape(-1)
    live = amplitudes != 0
    positions = positions[live]
    amplitudes = amplitudes[live]

    pulses = geom.pulse_count
    samples = geom.range_sample_count
    track = antenna_track(geom, antenna)
    tau = 2.0 * geom.reference_range / SPEED_OF_LIGHT + np.arange(samples) / geom.sample_rate
    out = np.zeros((pulses, samples), dtype=np.complex128)

    if amplitudes.size:
        wavelength = geom.wavelength

        def work(start: int, stop: int) -> None:
            for n in range(start, stop):
                diff = positions - track[n]
                ranges = np.sqrt(np.sum(diff * diff, axis=-1))
                coeff = amplitudes * np.exp(
                    -1j * (4.0 * np.pi / wavelength) * ranges
                )
                if beam_halfwidth is not None:
                    visible = np.abs(positions[:, 0] - track[n, 0]) <= beam_halfwidth
                    coeff = np.where(visible, coeff, 0.0 + 0.0j)
                envelope = np.sinc(
                    geom.bandwidth
                    * (tau[np.newaxis, :] - (2.0 * ranges / SPEED_OF_LIGHT)[:, np.newaxis])
                )
                out[n] = coeff.real @ envelope + 1j * (coeff.imag @ envelope)

        map_chunks(work, pulses, _PULSE_CHUNK, n_threads)

    if noise_sigma > 0.0:
        rng = np.random.default_rng(seed)
        noise = rng.standard_normal((pulses, samples)) + 1j * rng.standard_normal(
            (pulses, samples)
        )
        out += noise_sigma / np.sqrt(2.0) * noise

    return EchoMatrix(data=out, antenna=antenna)
