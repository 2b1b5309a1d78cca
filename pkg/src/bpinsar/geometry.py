"""Two-antenna stripmap acquisition geometry.

World frame: x along-track (platform motion), y cross-track ground
range, z up.  The master antenna flies a straight level track over
y = 0; the slave antenna is rigidly offset from it in the y-z plane.
All positions and ranges are in meters, angles in radians.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299792458.0  # m/s, exact


class AntennaId(enum.Enum):
    MASTER = "master"
    SLAVE = "slave"


@dataclass(frozen=True)
class AcquisitionGeometry:
    """Platform track, antenna pair and radar timing parameters.

    Parameters
    ----------
    altitude : float
        Platform height above the z = 0 plane, meters.
    velocity : float
        Along-track speed, m/s.
    baseline_length : float
        Master-to-slave offset magnitude, meters.
    baseline_tilt : float
        Baseline angle out of the horizontal, radians.  0 puts the
        slave horizontally beside the master.
    incidence_angle : float
        Nominal incidence at scene center, radians, in (0, pi/2).
    carrier_frequency : float
        Center frequency, Hz.
    bandwidth : float
        Transmitted signal bandwidth, Hz.
    sample_rate : float
        Range (fast-time) complex sample rate, Hz.  Must be at least
        the bandwidth.
    prf : float
        Pulse repetition frequency, Hz.
    pulse_count : int
        Number of pulses in the aperture.
    range_sample_count : int
        Fast-time samples recorded per pulse.
    reference_range : float
        Slant range of the first fast-time sample, meters.
    """

    altitude: float
    velocity: float
    baseline_length: float
    baseline_tilt: float
    incidence_angle: float
    carrier_frequency: float
    bandwidth: float
    sample_rate: float
    prf: float
    pulse_count: int
    range_sample_count: int
    reference_range: float

    def __post_init__(self) -> None:
        positive = {
            "altitude": self.altitude,
            "velocity": self.velocity,
            "baseline_length": self.baseline_length,
            "carrier_frequency": self.carrier_frequency,
            "bandwidth": self.bandwidth,
            "sample_rate": self.sample_rate,
            "prf": self.prf,
            "reference_range": self.reference_range,
        }
        for name, value in positive.items():
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not math.isfinite(self.baseline_tilt):
            raise ValueError(f"baseline_tilt must be finite, got {self.baseline_tilt!r}")
        if not (0.0 < self.incidence_angle < math.pi / 2):
            raise ValueError(
                f"incidence_angle must lie in (0, pi/2), got {self.incidence_angle!r}"
            )
        if self.pulse_count < 1:
            raise ValueError(f"pulse_count must be >= 1, got {self.pulse_count!r}")
        if self.range_sample_count < 1:
            raise ValueError(
                f"range_sample_count must be >= 1, got {self.range_sample_count!r}"
            )
        if self.sample_rate < self.bandwidth:
            raise ValueError(
                "sample_rate must be >= bandwidth "
                f"({self.sample_rate!r} < {self.bandwidth!r})"
            )

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def pulse_interval(self) -> float:
        return 1.0 / self.prf

    @property
    def range_sample_spacing(self) -> float:
        """One-way range step between fast-time samples, meters."""
        return SPEED_OF_LIGHT / (2.0 * self.sample_rate)

    @property
    def swath_depth(self) -> float:
        """Slant-range extent covered by the fast-time window, meters."""
        return self.range_sample_count * self.range_sample_spacing

    def baseline_offset(self) -> np.ndarray:
        """Master-to-slave displacement vector, shape (3,)."""
        return np.array(
            [
                0.0,
                self.baseline_length * math.cos(self.baseline_tilt),
                self.baseline_length * math.sin(self.baseline_tilt),
            ]
        )


def _position_at(geom: AcquisitionGeometry, antenna: AntennaId, index: float) -> np.ndarray:
    pos = np.array([geom.velocity * index / geom.prf, 0.0, geom.altitude])
    if antenna is AntennaId.SLAVE:
        pos = pos + geom.baseline_offset()
    return pos


def antenna_position(
    geom: AcquisitionGeometry, antenna: AntennaId, pulse_index: int
) -> np.ndarray:
    """Antenna phase-center position at one pulse, shape (3,).

    The master antenna at pulse n sits at (velocity * n / prf, 0,
    altitude); the slave adds the fixed baseline offset.
    """
    if not 0 <= pulse_index < geom.pulse_count:
        raise ValueError(
            f"pulse_index {pulse_index} outside [0, {geom.pulse_count})"
        )
    return _position_at(geom, antenna, float(pulse_index))


def antenna_track(geom: AcquisitionGeometry, antenna: AntennaId) -> np.ndarray:
    """Positions for every pulse, shape (pulse_count, 3)."""
    idx = np.arange(geom.pulse_count, dtype=np.float64)
    track = np.zeros((geom.pulse_count, 3))
    track[:, 0] = geom.velocity * idx / geom.prf
    track[:, 2] = geom.altitude
    if antenna is AntennaId.SLAVE:
        track += geom.baseline_offset()
    return track


def mid_aperture_position(geom: AcquisitionGeometry, antenna: AntennaId) -> np.ndarray:
    """Antenna position at the aperture midpoint (pulse_count - 1) / 2.

    Falls between pulses for an even pulse count; used as the single
    reference look for per-pixel path-difference evaluations.
    """
    return _position_at(geom, antenna, (geom.pulse_count - 1) / 2.0)


def slant_range(
    geom: AcquisitionGeometry,
    antenna: AntennaId,
    pulse_index: int,
    target: np.ndarray,
) -> float | np.ndarray:
    """Euclidean distance from the antenna at one pulse to target(s).

    Parameters
    ----------
    target : ndarray, shape (..., 3)
        World coordinates.  Broadcasting over leading axes is
        supported; a single (3,) target yields a scalar.
    """
    pos = antenna_position(geom, antenna, pulse_index)
    target = np.asarray(target, dtype=np.float64)
    if target.shape[-1] != 3:
        raise ValueError(f"target must have trailing dimension 3, got {target.shape}")
    d = np.linalg.norm(target - pos, axis=-1)
    return float(d) if d.ndim == 0 else d


def slant_range_track(
    geom: AcquisitionGeometry, antenna: AntennaId, targets: np.ndarray
) -> np.ndarray:
    """Ranges from every pulse position to every target.

    Parameters
    ----------
    targets : ndarray, shape (n, 3)

    Returns
    -------
    ndarray, shape (pulse_count, n)
    """
    track = antenna_track(geom, antenna)
    targets = np.asarray(targets, dtype=np.float64)
    if targets.ndim != 2 or targets.shape[1] != 3:
        raise ValueError(f"targets must have shape (n, 3), got {targets.shape}")
    diff = targets[np.newaxis, :, :] - track[:, np.newaxis, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))
