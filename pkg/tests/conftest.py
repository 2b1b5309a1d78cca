"""Shared fixtures: small acquisition setups sized for fast tests."""

import numpy as np
import pytest

from bpinsar import AntennaId, simulate_echo
from bpinsar.config import parse_config

# 32x32 scene, 64 pulses: the whole chain runs in well under a second.
SMALL_TEXT = """
[geometry]
pulse_count = 64
range_sample_count = 64
[scene]
rows = 32
cols = 32
[imaging]
upsample_factor = 8
"""

# 16x16 scene, 32 pulses: small enough for pure-Python reference loops
# and dense-matrix oracles.
TINY_TEXT = """
[geometry]
pulse_count = 32
range_sample_count = 48
[scene]
rows = 16
cols = 16
[imaging]
upsample_factor = 4
"""


@pytest.fixture(scope="session")
def small_cfg():
    return parse_config(SMALL_TEXT, source="<small>")


@pytest.fixture(scope="session")
def small_geom(small_cfg):
    return small_cfg.geometry


@pytest.fixture(scope="session")
def tiny_cfg():
    return parse_config(TINY_TEXT, source="<tiny>")


@pytest.fixture(scope="session")
def tiny_geom(tiny_cfg):
    return tiny_cfg.geometry


@pytest.fixture(scope="session")
def small_flat_echoes(small_cfg):
    """Master/slave echo pair of a flat speckled scene (simulated once)."""
    from bpinsar import make_flat_scene

    scene = make_flat_scene(
        small_cfg.scene.rows,
        small_cfg.scene.cols,
        small_cfg.scene.pixel_spacing,
        seed=3,
        origin=small_cfg.scene_origin,
    )
    master = simulate_echo(scene, small_cfg.geometry, AntennaId.MASTER)
    slave = simulate_echo(scene, small_cfg.geometry, AntennaId.SLAVE)
    return scene, master, slave


def grid_center_node(cfg):
    """Row/col of the node nearest the scene center."""
    return cfg.scene.rows // 2, cfg.scene.cols // 2


def rng_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
