"""Synthetic scenes and their reference interferometric phase.

A scene is a complex reflectivity map on the imaging grid plus a
height field.  Heights displace the scatterers vertically; the phase
signature they leave in a two-antenna interferogram is computed here
in closed form for use as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bp_imaging import ImageGrid
from .geometry import AcquisitionGeometry, AntennaId, mid_aperture_position


def wrap_phase(x: float | np.ndarray) -> float | np.ndarray:
    """Wrap angle(s) into (-pi, pi]."""
    w = np.mod(np.asarray(x, dtype=np.float64), 2.0 * np.pi)
    w = np.where(w > np.pi, w - 2.0 * np.pi, w)
    if w.ndim == 0:
        return float(w)
    return w


def _lock(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SceneModel:
    """Ground truth: per-pixel reflectivity, speckle phase and height.

    reflectivity and height are meters/unitless real fields of equal
    shape; speckle_phase is the per-pixel random phase of the complex
    reflectivity.  origin is the world position of pixel (0, 0); row
    index advances along-track (x), column index along ground range
    (y).
    """

    reflectivity: np.ndarray
    speckle_phase: np.ndarray
    height: np.ndarray
    pixel_spacing: float
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "reflectivity", _lock(self.reflectivity))
        object.__setattr__(self, "speckle_phase", _lock(self.speckle_phase))
        object.__setattr__(self, "height", _lock(self.height))
        if self.reflectivity.ndim != 2:
            raise ValueError("scene fields must be 2-D arrays")
        if not (self.reflectivity.shape == self.speckle_phase.shape == self.height.shape):
            raise ValueError(
                "reflectivity, speckle_phase and height shapes differ: "
                f"{self.reflectivity.shape}, {self.speckle_phase.shape}, {self.height.shape}"
            )
        if not np.all(np.isfinite(self.reflectivity)) or np.any(self.reflectivity < 0):
            raise ValueError("reflectivity must be finite and non-negative")
        if not np.all(np.isfinite(self.speckle_phase)):
            raise ValueError("speckle_phase must be finite")
        if not np.all(np.isfinite(self.height)):
            raise ValueError("height must be finite")
        if not self.pixel_spacing > 0:
            raise ValueError(f"pixel_spacing must be > 0, got {self.pixel_spacing!r}")

    @property
    def rows(self) -> int:
        return self.reflectivity.shape[0]

    @property
    def cols(self) -> int:
        return self.reflectivity.shape[1]

    @property
    def grid(self) -> ImageGrid:
        return ImageGrid(self.rows, self.cols, self.pixel_spacing, self.origin)

    def complex_amplitude(self) -> np.ndarray:
        return self.reflectivity * np.exp(1j * self.speckle_phase)


@dataclass(frozen=True)
class IdealInterferogram:
    """Closed-form interferometric phase, wrapped to (-pi, pi]."""

    phase: np.ndarray = field()

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", _lock(self.phase))


def make_cone_scene(
    rows: int,
    cols: int,
    pixel_spacing: float,
    max_height: float,
    seed: int,
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0),
    radius_fraction: float = 0.5,
) -> SceneModel:
    """Unit-reflectivity scene with a centered cone of the given height.

    The cone footprint is the circle of radius
    radius_fraction * min(rows, cols) * pixel_spacing centered on the
    grid; height falls linearly from max_height at the apex to zero at
    the footprint edge.  Speckle phase is i.i.d. uniform on (-pi, pi],
    drawn from the given seed.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid must have at least one pixel")
    rng = np.random.default_rng(seed)
    r = (np.arange(rows) - (rows - 1) / 2.0) * pixel_spacing
    c = (np.arange(cols) - (cols - 1) / 2.0) * pixel_spacing
    dist = np.sqrt(r[:, None] ** 2 + c[None, :] ** 2)
    radius = radius_fraction * min(rows, cols) * pixel_spacing
    height = max_height * np.clip(1.0 - dist / radius, 0.0, None)
    speckle = rng.uniform(-np.pi, np.pi, size=(rows, cols))
    return SceneModel(
        reflectivity=np.ones((rows, cols)),
        speckle_phase=speckle,
        height=height,
        pixel_spacing=pixel_spacing,
        origin=origin,
    )


def make_flat_scene(
    rows: int,
    cols: int,
    pixel_spacing: float,
    seed: int,
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> SceneModel:
    """Unit-reflectivity zero-height scene with random speckle phase."""
    rng = np.random.default_rng(seed)
    return SceneModel(
        reflectivity=np.ones((rows, cols)),
        speckle_phase=rng.uniform(-np.pi, np.pi, size=(rows, cols)),
        height=np.zeros((rows, cols)),
        pixel_spacing=pixel_spacing,
        origin=origin,
    )


def make_point_scene(
    rows: int,
    cols: int,
    pixel_spacing: float,
    row: int,
    col: int,
    height: float = 0.0,
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0),
) -> SceneModel:
    """Single unit scatterer at one grid node, empty elsewhere."""
    if not (0 <= row < rows and 0 <= col < cols):
        raise ValueError(f"point ({row}, {col}) outside {rows}x{cols} grid")
    reflectivity = np.zeros((rows, cols))
    reflectivity[row, col] = 1.0
    heights = np.zeros((rows, cols))
    heights[row, col] = height
    return SceneModel(
        reflectivity=reflectivity,
        speckle_phase=np.zeros((rows, cols)),
        height=heights,
        pixel_spacing=pixel_spacing,
        origin=origin,
    )


def ideal_interferogram(
    scene: SceneModel, geom: AcquisitionGeometry
) -> IdealInterferogram:
    """Reference master-slave phase left after zero-height compensation.

    Both images are focused onto the zero-height grid, so the
    compensation removes the flat-earth phase exactly and each pixel
    retains exp(j * 4pi/lambda * (R_ref - R_true)) per antenna, with
    ranges taken at the aperture midpoint.  The master-times-
    conjugate-slave product therefore carries

        phase = 4pi/lambda * ((R_m0 - R_m*) - (R_s0 - R_s*))

    where * marks the range to the true (elevated) pixel position and
    0 the range to its zero-height reference.  A flat scene maps to
    identically zero phase.
    """
    pos_m = mid_aperture_position(geom, AntennaId.MASTER)
    pos_s = mid_aperture_position(geom, AntennaId.SLAVE)
    ref = scene.grid.pixel_positions()
    true = scene.grid.pixel_positions(scene.height)

    def ranges(pos: np.ndarray, pts: np.ndarray) -> np.ndarray:
        d = pts - pos[np.newaxis, :]
        return np.sqrt(np.sum(d * d, axis=-1))

    k = 4.0 * np.pi / geom.wavelength
    raw = k * (
        (ranges(pos_m, ref) - ranges(pos_m, true))
        - (ranges(pos_s, ref) - ranges(pos_s, true))
    )
    phase = wrap_phase(raw.reshape(scene.rows, scene.cols))
    return IdealInterferogram(phase=phase)
