"""Back-projection image formation for the two-antenna geometry.

The imaging chain has three stages, each a linear map with an exact
adjoint implemented alongside it:

1. range_compress      -- per-pulse forward DFT and an ideal band
                          window matched to the band-limited echo,
2. interpolate_range   -- frequency-domain zero insertion yielding an
                          integer-factor finer fast-time grid,
3. backproject         -- per-pixel accumulation of the interpolated
                          samples with two-way phase compensation
                          computed on the zero-height reference grid.

Keeping the stages separate lets the observation operator reuse them
(and their adjoints) without re-deriving any scale factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._parallel import map_chunks
from .geometry import (
    SPEED_OF_LIGHT,
    AcquisitionGeometry,
    AntennaId,
    antenna_track,
)

if TYPE_CHECKING:  # pragma: no cover
    from .echo_sim import EchoMatrix

# Pixels handled per task when parallelizing image loops; fixed so that
# chunk boundaries (and hence float summation order) never depend on
# the thread count.
_PIXEL_CHUNK = 512
_PULSE_CHUNK = 16


class OutOfSwathError(ValueError):
    """Slant range maps outside the recorded fast-time window."""


@dataclass(frozen=True)
class ImageGrid:
    """Imaging raster in world coordinates.

    Pixel (i, j) sits at origin + (i * pixel_spacing, j * pixel_spacing, 0);
    rows advance along-track, columns along ground range.
    """

    rows: int
    cols: int
    pixel_spacing: float
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        if not self.pixel_spacing > 0:
            raise ValueError(f"pixel_spacing must be > 0, got {self.pixel_spacing!r}")

    @property
    def pixel_count(self) -> int:
        return self.rows * self.cols

    def pixel_positions(self, heights: np.ndarray | None = None) -> np.ndarray:
        """World coordinates of all pixels, shape (rows * cols, 3), C order.

        heights, when given, displaces each pixel vertically off the
        z = origin[2] reference plane.
        """
        x = self.origin[0] + np.arange(self.rows) * self.pixel_spacing
        y = self.origin[1] + np.arange(self.cols) * self.pixel_spacing
        pts = np.zeros((self.rows, self.cols, 3))
        pts[:, :, 0] = x[:, None]
        pts[:, :, 1] = y[None, :]
        pts[:, :, 2] = self.origin[2]
        if heights is not None:
            heights = np.asarray(heights, dtype=np.float64)
            if heights.shape != (self.rows, self.cols):
                raise ValueError(
                    f"heights shape {heights.shape} does not match grid "
                    f"{self.rows}x{self.cols}"
                )
            pts[:, :, 2] += heights
        return pts.reshape(-1, 3)


@dataclass(frozen=True)
class ComplexImage:
    """Single-look complex image on an ImageGrid."""

    data: np.ndarray
    grid: ImageGrid

    def __post_init__(self) -> None:
        data = np.asarray(self.data)
        if data.dtype != np.complex128:
            data = data.astype(np.complex128)
        object.__setattr__(self, "data", data)
        if data.shape != (self.grid.rows, self.grid.cols):
            raise ValueError(
                f"image shape {data.shape} does not match grid "
                f"{self.grid.rows}x{self.grid.cols}"
            )
        if not np.all(np.isfinite(data.view(np.float64))):
            raise ValueError("image contains non-finite values")


@dataclass(frozen=True)
class RangeCompressed:
    """Range-compressed pulses on the upsampled fast-time grid."""

    data: np.ndarray
    upsample_factor: int

    def __post_init__(self) -> None:
        if not _is_power_of_two(self.upsample_factor):
            raise ValueError(
                f"upsample_factor must be a power of two >= 1, got "
                f"{self.upsample_factor!r}"
            )
        data = np.asarray(self.data)
        if data.ndim != 2:
            raise ValueError("range-compressed data must be 2-D (pulses x samples)")
        if data.dtype != np.complex128:
            data = data.astype(np.complex128)
        object.__setattr__(self, "data", data)


def _is_power_of_two(n: int) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


def _echo_array(echo: "EchoMatrix | np.ndarray") -> np.ndarray:
    data = getattr(echo, "data", echo)
    data = np.asarray(data)
    if data.ndim != 2:
        raise ValueError("echo must be 2-D (pulses x fast-time samples)")
    return data.astype(np.complex128, copy=False)


# ---------------------------------------------------------------------------
# stage 1: range matched filter
# ---------------------------------------------------------------------------


def band_window(geom: AcquisitionGeometry, sample_count: int) -> np.ndarray:
    """Unit-gain window over |f| <= bandwidth / 2 on the DFT bin grid.

    This is the frequency response of the matched filter for the
    band-limited echo model: the echo spectrum is flat in band, so
    matched filtering reduces to an ideal band selection.
    """
    freqs = np.fft.fftfreq(sample_count, d=1.0 / geom.sample_rate)
    return (np.abs(freqs) <= geom.bandwidth / 2.0).astype(np.float64)


def range_compress(echo: "EchoMatrix | np.ndarray", geom: AcquisitionGeometry) -> np.ndarray:
    """Forward DFT along fast time and ideal band filtering.

    Returns the filtered spectrum (pulses x samples); the inverse
    transform is deferred to interpolate_range so the zero insertion
    happens in one pass.
    """
    data = _echo_array(echo)
    if data.shape[1] != geom.range_sample_count:
        raise ValueError(
            f"echo has {data.shape[1]} fast-time samples, geometry expects "
            f"{geom.range_sample_count}"
        )
    return np.fft.fft(data, axis=1) * band_window(geom, data.shape[1])


def range_compress_adjoint(spectrum: np.ndarray, geom: AcquisitionGeometry) -> np.ndarray:
    """Exact adjoint of range_compress (conjugate window, inverse DFT)."""
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    if spectrum.ndim != 2 or spectrum.shape[1] != geom.range_sample_count:
        raise ValueError(
            f"spectrum shape {spectrum.shape} does not match geometry "
            f"({geom.range_sample_count} samples)"
        )
    m = spectrum.shape[1]
    return m * np.fft.ifft(spectrum * band_window(geom, m), axis=1)


# ---------------------------------------------------------------------------
# stage 2: frequency-domain interpolation
# ---------------------------------------------------------------------------


def interpolate_range(spectrum: np.ndarray, upsample_factor: int) -> RangeCompressed:
    """Refine the fast-time grid by zero insertion between spectrum halves.

    The length-m spectrum is split at the Nyquist midpoint,
    (upsample_factor - 1) * m zeros are inserted between the halves,
    and the inverse DFT of the padded spectrum is scaled by
    upsample_factor so samples at original positions keep their
    values.
    """
    if not _is_power_of_two(upsample_factor):
        raise ValueError(
            f"upsample_factor must be a power of two >= 1, got {upsample_factor!r}"
        )
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    if spectrum.ndim != 2:
        raise ValueError("spectrum must be 2-D (pulses x samples)")
    pulses, m = spectrum.shape
    half = m // 2
    padded = np.zeros((pulses, upsample_factor * m), dtype=np.complex128)
    padded[:, :half] = spectrum[:, :half]
    padded[:, upsample_factor * m - (m - half):] = spectrum[:, half:]
    data = upsample_factor * np.fft.ifft(padded, axis=1)
    return RangeCompressed(data=data, upsample_factor=upsample_factor)


def interpolate_range_adjoint(
    rc: RangeCompressed | np.ndarray, upsample_factor: int, sample_count: int
) -> np.ndarray:
    """Exact adjoint of interpolate_range back onto sample_count bins."""
    data = np.asarray(getattr(rc, "data", rc), dtype=np.complex128)
    if data.ndim != 2 or data.shape[1] != upsample_factor * sample_count:
        raise ValueError(
            f"range-compressed shape {data.shape} does not match "
            f"{upsample_factor} x {sample_count}"
        )
    half = sample_count // 2
    padded = np.fft.fft(data, axis=1)
    spectrum = np.empty((data.shape[0], sample_count), dtype=np.complex128)
    spectrum[:, :half] = padded[:, :half]
    spectrum[:, half:] = padded[:, data.shape[1] - (sample_count - half):]
    return spectrum / sample_count


# ---------------------------------------------------------------------------
# stage 3: azimuth compensation and accumulation
# ---------------------------------------------------------------------------


def range_bin_index(
    geom: AcquisitionGeometry, upsample_factor: int, slant_range: float
) -> int:
    """Fast-time bin of a slant range on the upsampled grid.

    floor(2 * upsample_factor * sample_rate * (R - R0) / c), where R0
    is the reference range of the first sample.
    """
    if slant_range < geom.reference_range:
        raise ValueError(
            f"slant range {slant_range!r} below reference range "
            f"{geom.reference_range!r}"
        )
    idx = int(
        math.floor(
            2.0
            * upsample_factor
            * geom.sample_rate
            * (slant_range - geom.reference_range)
            / SPEED_OF_LIGHT
        )
    )
    limit = upsample_factor * geom.range_sample_count
    if idx >= limit:
        raise OutOfSwathError(
            f"slant range {slant_range!r} maps to bin {idx} beyond the "
            f"{limit}-bin fast-time window"
        )
    return idx


def _lookup_chunk(
    geom: AcquisitionGeometry,
    track: np.ndarray,
    positions: np.ndarray,
    upsample_factor: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bin indices, compensation phasors and validity for a pixel block.

    Returns (idx, phase, valid), each of shape (pulse_count, n_pixels).
    Out-of-swath pairs are flagged invalid and their index clipped so
    gathers stay in bounds.
    """
    diff = positions[np.newaxis, :, :] - track[:, np.newaxis, :]
    ranges = np.sqrt(np.sum(diff * diff, axis=-1))
    scaled = (
        2.0
        * upsample_factor
        * geom.sample_rate
        * (ranges - geom.reference_range)
        / SPEED_OF_LIGHT
    )
    idx = np.floor(scaled).astype(np.int64)
    limit = upsample_factor * geom.range_sample_count
    valid = (idx >= 0) & (idx < limit)
    idx = np.clip(idx, 0, limit - 1)
    phase = np.exp(1j * (4.0 * np.pi / geom.wavelength) * ranges)
    return idx, phase, valid


def backproject(
    rc: RangeCompressed,
    geom: AcquisitionGeometry,
    antenna: AntennaId,
    grid: ImageGrid,
    n_threads: int | None = None,
    diagnostics: dict | None = None,
) -> ComplexImage:
    """Accumulate compensated samples onto the zero-height grid.

    Each pixel i sums rc[n, bin(R_i(n))] * exp(+j 4 pi R_i(n) / lambda)
    over pulses n, where R_i(n) is the range from the antenna to the
    pixel's zero-height position, and divides by the pulse count.
    Computing the compensation at reference height zero removes the
    flat-earth phase and registers both antennas onto one grid.
    Pulse/pixel pairs falling outside the fast-time window contribute
    zero and are tallied in diagnostics["out_of_swath"] when a dict is
    supplied.
    """
    limit = rc.upsample_factor * geom.range_sample_count
    if rc.data.shape != (geom.pulse_count, limit):
        raise ValueError(
            f"range-compressed shape {rc.data.shape} does not match geometry "
            f"({geom.pulse_count} pulses x {limit} bins)"
        )
    track = antenna_track(geom, antenna)
    positions = grid.pixel_positions()
    pulses = geom.pulse_count
    rc_data = rc.data
    out = np.zeros(grid.pixel_count, dtype=np.complex128)
    skipped = np.zeros(
        (grid.pixel_count + _PIXEL_CHUNK - 1) // _PIXEL_CHUNK, dtype=np.int64
    )
    rows = np.arange(pulses)[:, None]

    def work(start: int, stop: int) -> None:
        idx, phase, valid = _lookup_chunk(
            geom, track, positions[start:stop], rc.upsample_factor
        )
        samples = rc_data[rows, idx]
        samples = np.where(valid, samples, 0.0 + 0.0j)
        out[start:stop] = np.sum(samples * phase, axis=0) / pulses
        skipped[start // _PIXEL_CHUNK] = np.count_nonzero(~valid)

    map_chunks(work, grid.pixel_count, _PIXEL_CHUNK, n_threads)
    if diagnostics is not None:
        diagnostics["out_of_swath"] = int(skipped.sum())
    return ComplexImage(data=out.reshape(grid.rows, grid.cols), grid=grid)


def backproject_adjoint(
    image: ComplexImage | np.ndarray,
    geom: AcquisitionGeometry,
    antenna: AntennaId,
    grid: ImageGrid,
    upsample_factor: int,
    n_threads: int | None = None,
) -> np.ndarray:
    """Exact adjoint of backproject: scatter pixels into fast-time bins.

    Returns the (pulse_count x upsample_factor * range_sample_count)
    array u with u[n, b] = sum over pixels i hitting bin b of
    image[i] * exp(-j 4 pi R_i(n) / lambda) / pulse_count.
    """
    values = np.asarray(getattr(image, "data", image), dtype=np.complex128)
    if values.shape != (grid.rows, grid.cols):
        raise ValueError(
            f"image shape {values.shape} does not match grid "
            f"{grid.rows}x{grid.cols}"
        )
    flat = values.reshape(-1)
    track = antenna_track(geom, antenna)
    positions = grid.pixel_positions()
    limit = upsample_factor * geom.range_sample_count
    pulses = geom.pulse_count
    out = np.zeros((pulses, limit), dtype=np.complex128)

    def work(start: int, stop: int) -> None:
        idx, phase, valid = _lookup_chunk(
            geom, track[start:stop], positions, upsample_factor
        )
        weighted = flat[np.newaxis, :] * np.conj(phase) / pulses
        weighted = np.where(valid, weighted, 0.0 + 0.0j)
        for n in range(stop - start):
            out[start + n].real = np.bincount(
                idx[n], weights=weighted[n].real, minlength=limit
            )
            out[start + n].imag = np.bincount(
                idx[n], weights=weighted[n].imag, minlength=limit
            )

    map_chunks(work, pulses, _PULSE_CHUNK, n_threads)
    return out


# ---------------------------------------------------------------------------
# fused chain and interferogram formation
# ---------------------------------------------------------------------------


def bp_image(
    echo: "EchoMatrix | np.ndarray",
    geom: AcquisitionGeometry,
    antenna: AntennaId,
    upsample_factor: int,
    grid: ImageGrid,
    n_threads: int | None = None,
    diagnostics: dict | None = None,
) -> ComplexImage:
    """Full chain: range_compress, interpolate_range, backproject."""
    tagged = getattr(echo, "antenna", None)
    if tagged is not None and tagged is not antenna:
        raise ValueError(f"echo is tagged {tagged}, requested image for {antenna}")
    spectrum = range_compress(echo, geom)
    rc = interpolate_range(spectrum, upsample_factor)
    return backproject(rc, geom, antenna, grid, n_threads, diagnostics)


def form_interferogram(master: ComplexImage, slave: ComplexImage) -> ComplexImage:
    """Pixel-wise master times conjugate slave."""
    if master.grid != slave.grid:
        raise ValueError(
            f"master and slave grids differ: {master.grid} vs {slave.grid}"
        )
    return ComplexImage(data=master.data * np.conj(slave.data), grid=master.grid)
