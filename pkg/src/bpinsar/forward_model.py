"""Matrix-free observation operator linking Fourier coefficients of the
interferogram to the masked raw master echo.

Writing the back-projection chain as B (echo -> image), the acquisition
model used for reconstruction is

    y_m = G B^H ( X_s . F^H theta_f )

where theta_f holds unitary 2-D Fourier coefficients of the
interferogram, F^H is the unitary inverse 2-D DFT, X_s is the frozen
slave back-projection image, B^H the exact adjoint of the imaging
chain and G the pulse sampling mask.  Every factor is implemented with
its exact adjoint, so apply_forward / apply_adjoint satisfy the
dot-product identity to machine precision; no matrix is ever formed.
"""

from __future__ import annotations

import numpy as np

from . import bp_imaging as bp
from .echo_sim import EchoMatrix, SamplingMask
from .geometry import AcquisitionGeometry, AntennaId, antenna_track
from .bp_imaging import ComplexImage, ImageGrid


def fourier_to_image(theta_f: np.ndarray, grid: ImageGrid) -> ComplexImage:
    """Unitary inverse 2-D DFT of coefficient array onto the grid."""
    theta_f = np.asarray(theta_f, dtype=np.complex128)
    if theta_f.shape != (grid.rows, grid.cols):
        raise ValueError(
            f"coefficient shape {theta_f.shape} does not match grid "
            f"{grid.rows}x{grid.cols}"
        )
    return ComplexImage(data=np.fft.ifft2(theta_f, norm="ortho"), grid=grid)


def image_to_fourier(image: ComplexImage) -> np.ndarray:
    """Unitary forward 2-D DFT, the exact inverse of fourier_to_image."""
    return np.fft.fft2(image.data, norm="ortho")


class ObservationOperator:
    """Cached forward/adjoint pair for one acquisition and slave image.

    Parameters
    ----------
    geom : AcquisitionGeometry
    slave_image : ComplexImage
        Back-projection image of the slave echo on the reconstruction
        grid; frozen inside the operator (must not be identically
        zero).
    mask : SamplingMask
        Pulse under-sampling pattern, applied inside both directions.
    upsample_factor : int
        Fast-time interpolation factor of the embedded chain (power of
        two).

    Notes
    -----
    Per-pixel bin indices and compensation phasors for the master
    antenna are precomputed once; pulse/pixel pairs that fall outside
    the fast-time window are dropped from both directions and counted
    in out_of_swath_count.
    """

    def __init__(
        self,
        geom: AcquisitionGeometry,
        slave_image: ComplexImage,
        mask: SamplingMask,
        upsample_factor: int = 8,
    ) -> None:
        if not bp._is_power_of_two(upsample_factor):
            raise ValueError(
                f"upsample_factor must be a power of two >= 1, got "
                f"{upsample_factor!r}"
            )
        if mask.pulse_count != geom.pulse_count:
            raise ValueError(
                f"mask covers {mask.pulse_count} pulses, geometry has "
                f"{geom.pulse_count}"
            )
        if not np.any(slave_image.data):
            raise ValueError("slave image is identically zero")
        self.geom = geom
        self.slave_image = slave_image
        self.mask = mask
        self.upsample_factor = upsample_factor
        self.grid = slave_image.grid

        track = antenna_track(geom, AntennaId.MASTER)
        idx, phase, valid = bp._lookup_chunk(
            geom, track, self.grid.pixel_positions(), upsample_factor
        )
        self._idx = idx
        self._phase = phase
        self._valid = valid
        self._pulse_rows = np.arange(geom.pulse_count)[:, None]
        self.out_of_swath_count = int(np.count_nonzero(~valid))
        self._bin_count = upsample_factor * geom.range_sample_count

    # -- embedded back-projection chain on the master geometry ----------

    def _bp_forward(self, echo_data: np.ndarray) -> np.ndarray:
        """Masked echo -> image values on the grid (rows x cols)."""
        spectrum = bp.range_compress(echo_data, self.geom)
        rc = bp.interpolate_range(spectrum, self.upsample_factor)
        samples = rc.data[self._pulse_rows, self._idx]
        samples = np.where(self._valid, samples, 0.0 + 0.0j)
        values = np.sum(samples * self._phase, axis=0) / self.geom.pulse_count
        return values.reshape(self.grid.rows, self.grid.cols)

    def _bp_adjoint(self, values: np.ndarray) -> np.ndarray:
        """Image values -> echo (pulses x samples), adjoint of _bp_forward."""
        weighted = (
            values.reshape(-1)[np.newaxis, :]
            * np.conj(self._phase)
            / self.geom.pulse_count
        )
        weighted = np.where(self._valid, weighted, 0.0 + 0.0j)
        scattered = np.empty(
            (self.geom.pulse_count, self._bin_count), dtype=np.complex128
        )
        for n in range(self.geom.pulse_count):
            scattered[n].real = np.bincount(
                self._idx[n], weights=weighted[n].real, minlength=self._bin_count
            )
            scattered[n].imag = np.bincount(
                self._idx[n], weights=weighted[n].imag, minlength=self._bin_count
            )
        spectrum = bp.interpolate_range_adjoint(
            scattered, self.upsample_factor, self.geom.range_sample_count
        )
        return bp.range_compress_adjoint(spectrum, self.geom)

    # -- public operator surface ----------------------------------------

    def synthesize_scene(self, theta_f: np.ndarray) -> ComplexImage:
        """Coefficients -> slave-modulated scene image X_s . F^H theta_f."""
        image = fourier_to_image(theta_f, self.grid)
        return ComplexImage(data=self.slave_image.data * image.data, grid=self.grid)

    def generate_echo(self, scene_image: ComplexImage) -> EchoMatrix:
        """Scene image -> masked master echo via the adjoint chain."""
        if scene_image.grid != self.grid:
            raise ValueError("scene image grid does not match operator grid")
        echo = self._bp_adjoint(scene_image.data)
        echo[~self.mask.kept_pulses] = 0.0
        return EchoMatrix(data=echo, antenna=AntennaId.MASTER)

    def apply_forward(self, theta_f: np.ndarray) -> EchoMatrix:
        return self.generate_echo(self.synthesize_scene(theta_f))

    def apply_adjoint(self, echo: EchoMatrix | np.ndarray) -> np.ndarray:
        """Masked echo -> coefficient-space gradient direction."""
        data = np.asarray(getattr(echo, "data", echo), dtype=np.complex128)
        if data.shape != (self.geom.pulse_count, self.geom.range_sample_count):
            raise ValueError(
                f"echo shape {data.shape} does not match geometry "
                f"({self.geom.pulse_count} x {self.geom.range_sample_count})"
            )
        masked = data.copy()
        masked[~self.mask.kept_pulses] = 0.0
        image = self._bp_forward(masked)
        return np.fft.fft2(np.conj(self.slave_image.data) * image, norm="ortho")

    def operator_norm(
        self, iterations: int = 30, return_history: bool = False
    ) -> float | tuple[float, list[float]]:
        """Largest singular value estimated by power iteration.

        Iterates v <- A^H A v from a fixed-seed random start; the
        estimate sqrt(||A^H A v||) with unit v is non-decreasing in
        exact arithmetic, so the final iterate is returned.
        """
        if iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {iterations!r}")
        rng = np.random.default_rng(0)
        shape = (self.grid.rows, self.grid.cols)
        v = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        v /= np.linalg.norm(v)
        history: list[float] = []
        estimate = 0.0
        for _ in range(iterations):
            w = self.apply_adjoint(self.apply_forward(v))
            norm = np.linalg.norm(w)
            if norm == 0.0:
                estimate = 0.0
                history.append(estimate)
                break
            estimate = float(np.sqrt(norm))
            history.append(estimate)
            v = w / norm
        if return_history:
            return estimate, history
        return estimate
