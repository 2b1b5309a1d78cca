"""Antenna track and slant-range geometry."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bpinsar import (
    SPEED_OF_LIGHT,
    AcquisitionGeometry,
    AntennaId,
    antenna_position,
    antenna_track,
    mid_aperture_position,
    slant_range,
    slant_range_track,
)


def make_geom(**overrides) -> AcquisitionGeometry:
    params = dict(
        altitude=3000.0,
        velocity=50.0,
        baseline_length=1.0,
        baseline_tilt=0.0,
        incidence_angle=math.radians(35.0),
        carrier_frequency=35.0e9,
        bandwidth=400.0e6,
        sample_rate=500.0e6,
        prf=100.0,
        pulse_count=64,
        range_sample_count=64,
        reference_range=3600.0,
    )
    params.update(overrides)
    return AcquisitionGeometry(**params)


def test_master_track_starts_at_altitude():
    pos = antenna_position(make_geom(), AntennaId.MASTER, 0)
    np.testing.assert_array_equal(pos, [0.0, 0.0, 3000.0])


def test_slave_offset_by_horizontal_baseline():
    pos = antenna_position(make_geom(), AntennaId.SLAVE, 0)
    np.testing.assert_array_equal(pos, [0.0, 1.0, 3000.0])


def test_track_advances_by_velocity_over_prf():
    geom = make_geom(velocity=50.0, prf=100.0)
    for k in (1, 7, 63):
        pos = antenna_position(geom, AntennaId.MASTER, k)
        assert pos[0] == 50.0 * k / 100.0
        assert pos[1] == 0.0 and pos[2] == 3000.0


def test_track_array_matches_positions():
    geom = make_geom()
    track = antenna_track(geom, AntennaId.SLAVE)
    assert track.shape == (geom.pulse_count, 3)
    for k in (0, 5, geom.pulse_count - 1):
        np.testing.assert_array_equal(track[k], antenna_position(geom, AntennaId.SLAVE, k))


@given(tilt=st.floats(-math.pi / 2, math.pi / 2))
def test_tilted_baseline_keeps_length_and_stays_cross_track(tilt):
    geom = make_geom(baseline_tilt=tilt, baseline_length=2.5)
    offset = geom.baseline_offset()
    assert offset[0] == 0.0
    assert math.isclose(float(np.linalg.norm(offset)), 2.5, rel_tol=1e-12)
    assert math.isclose(offset[1], 2.5 * math.cos(tilt), rel_tol=0, abs_tol=1e-12)
    assert math.isclose(offset[2], 2.5 * math.sin(tilt), rel_tol=0, abs_tol=1e-12)


def test_mid_aperture_position_interpolates_half_pulse():
    geom = make_geom(pulse_count=4, velocity=50.0, prf=100.0)
    pos = mid_aperture_position(geom, AntennaId.MASTER)
    assert pos[0] == pytest.approx(1.5 * 0.5)
    geom_odd = make_geom(pulse_count=5)
    pos_odd = mid_aperture_position(geom_odd, AntennaId.MASTER)
    np.testing.assert_array_equal(pos_odd, antenna_position(geom_odd, AntennaId.MASTER, 2))


def test_nadir_slant_range_equals_altitude():
    geom = make_geom()
    r = slant_range(geom, AntennaId.MASTER, 0, np.array([0.0, 0.0, 0.0]))
    assert r == pytest.approx(3000.0, rel=1e-15)


def test_zero_range_at_antenna_position():
    geom = make_geom()
    target = antenna_position(geom, AntennaId.SLAVE, 3)
    assert slant_range(geom, AntennaId.SLAVE, 3, target) == 0.0


def test_slant_range_matches_bruteforce_norm():
    geom = make_geom()
    rng = np.random.default_rng(42)
    targets = rng.uniform(-100.0, 3500.0, size=(20, 3))
    for k in (0, 17, 63):
        antenna = antenna_position(geom, AntennaId.MASTER, k)
        got = slant_range(geom, AntennaId.MASTER, k, targets)
        for t, r in zip(targets, got):
            expected = math.sqrt(
                (t[0] - antenna[0]) ** 2
                + (t[1] - antenna[1]) ** 2
                + (t[2] - antenna[2]) ** 2
            )
            assert math.isclose(r, expected, rel_tol=1e-12)


def test_slant_range_track_matches_per_pulse_calls():
    geom = make_geom(pulse_count=8)
    targets = np.array([[10.0, 300.0, 0.0], [50.0, 2100.0, 12.0]])
    ranges = slant_range_track(geom, AntennaId.SLAVE, targets)
    assert ranges.shape == (8, 2)
    for k in range(8):
        np.testing.assert_allclose(
            ranges[k], slant_range(geom, AntennaId.SLAVE, k, targets), rtol=1e-15
        )


def test_wavelength_and_sample_spacing_from_constants():
    geom = make_geom(carrier_frequency=35.0e9, sample_rate=500.0e6)
    assert geom.wavelength == SPEED_OF_LIGHT / 35.0e9
    assert geom.range_sample_spacing == SPEED_OF_LIGHT / (2.0 * 500.0e6)
    assert geom.swath_depth == 64 * geom.range_sample_spacing
    assert geom.pulse_interval == 1.0 / 100.0


@pytest.mark.parametrize(
    "overrides",
    [
        {"altitude": -1.0},
        {"velocity": 0.0},
        {"baseline_length": 0.0},
        {"incidence_angle": 0.0},
        {"incidence_angle": math.pi / 2},
        {"carrier_frequency": 0.0},
        {"bandwidth": -1.0},
        {"sample_rate": 300.0e6},  # below bandwidth
        {"prf": 0.0},
        {"pulse_count": 0},
        {"range_sample_count": 0},
        {"reference_range": -5.0},
    ],
)
def test_invalid_geometry_rejected(overrides):
    with pytest.raises(ValueError):
        make_geom(**overrides)


def test_pulse_index_out_of_range_rejected():
    geom = make_geom(pulse_count=4)
    with pytest.raises(ValueError):
        antenna_position(geom, AntennaId.MASTER, 4)
    with pytest.raises(ValueError):
        antenna_position(geom, AntennaId.MASTER, -1)


@settings(max_examples=25, deadline=None)
@given(
    y=st.floats(10.0, 4000.0),
    z=st.floats(-50.0, 50.0),
    k=st.integers(0, 63),
)
def test_slant_range_symmetric_across_track(y, z, k):
    """Targets mirrored in cross-track distance have equal range."""
    geom = make_geom()
    antenna = antenna_position(geom, AntennaId.MASTER, k)
    near = np.array([antenna[0], antenna[1] + y, z])
    far = np.array([antenna[0], antenna[1] - y, z])
    r1 = slant_range(geom, AntennaId.MASTER, k, near)
    r2 = slant_range(geom, AntennaId.MASTER, k, far)
    assert math.isclose(r1, r2, rel_tol=1e-12)
