"""Experiment configuration parsing, defaults and the manifest."""

import json
import math

import pytest

from bpinsar import ConfigError, default_config, default_config_text, load_config, parse_config
from bpinsar.config import manifest_dict, write_manifest


def test_default_matches_reference_acquisition():
    cfg = default_config()
    geom = cfg.geometry
    assert geom.altitude == 3000.0
    assert geom.velocity == 50.0
    assert geom.baseline_length == 1.0
    assert geom.baseline_tilt == 0.0
    assert geom.incidence_angle == pytest.approx(math.radians(35.0))
    assert geom.carrier_frequency == 35.0e9
    assert geom.bandwidth == 400.0e6
    assert geom.sample_rate == 500.0e6
    assert cfg.scene.rows == 64 and cfg.scene.cols == 64
    assert cfg.sampling.fraction == 1.0
    assert cfg.solver.max_iterations == 5
    assert cfg.solver.lam_scale == 0.01
    assert cfg.imaging.upsample_factor == 8


def test_default_config_text_parses_to_defaults():
    from_text = parse_config(default_config_text(), source="<default-text>")
    built_in = default_config()
    assert from_text == built_in


def test_auto_reference_range_centers_the_swath():
    cfg = parse_config("")
    geom = cfg.geometry
    center = geom.altitude / math.cos(geom.incidence_angle)
    assert geom.reference_range == pytest.approx(center - geom.swath_depth / 2.0)


def test_explicit_reference_range_wins():
    cfg = parse_config("[geometry]\nreference_range = 3500.0\n")
    assert cfg.geometry.reference_range == 3500.0


def test_scene_origin_centered_on_aperture_and_ground_range():
    cfg = parse_config("")
    geom = cfg.geometry
    ox, oy, oz = cfg.scene_origin
    aperture_mid = geom.velocity * (geom.pulse_count - 1) / (2.0 * geom.prf)
    ground_center = geom.altitude * math.tan(geom.incidence_angle)
    half_rows = (cfg.scene.rows - 1) / 2.0 * cfg.scene.pixel_spacing
    half_cols = (cfg.scene.cols - 1) / 2.0 * cfg.scene.pixel_spacing
    assert ox == pytest.approx(aperture_mid - half_rows)
    assert oy == pytest.approx(ground_center - half_cols)
    assert oz == 0.0


def test_angles_are_given_in_degrees():
    cfg = parse_config("[geometry]\nincidence_angle_deg = 45.0\nbaseline_tilt_deg = 30.0\n")
    assert cfg.geometry.incidence_angle == pytest.approx(math.pi / 4.0)
    assert cfg.geometry.baseline_tilt == pytest.approx(math.pi / 6.0)


def test_override_scene_and_solver_sections():
    cfg = parse_config(
        """
[scene]
rows = 16
cols = 24
max_height = 0.75
[solver]
max_iterations = 9
lam = 0.125
init = bp
[output]
directory = runs/custom
"""
    )
    assert cfg.scene.rows == 16 and cfg.scene.cols == 24
    assert cfg.scene.max_height == 0.75
    assert cfg.solver.max_iterations == 9
    assert cfg.solver.lam == 0.125
    assert cfg.solver.init == "bp"
    assert cfg.output_directory == "runs/custom"


def test_comments_and_blank_lines_ignored():
    cfg = parse_config("\n# leading comment\n\n[scene]\n# inner comment\nrows = 8\n\n")
    assert cfg.scene.rows == 8


def test_unknown_section_reports_line():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[nope]\nx = 1\n", source="bad.ini")
    assert "bad.ini:1" in str(excinfo.value)


def test_unknown_key_reports_line():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[scene]\nrowz = 8\n", source="bad.ini")
    assert "bad.ini:2" in str(excinfo.value)
    assert "rowz" in str(excinfo.value)


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[scene]\nrows = 8\nrows = 9\n")
    assert "duplicate" in str(excinfo.value).lower()


def test_bad_value_type_reports_line():
    with pytest.raises(ConfigError) as excinfo:
        parse_config("[scene]\nrows = eight\n", source="bad.ini")
    assert "bad.ini:2" in str(excinfo.value)


def test_key_outside_section_rejected():
    with pytest.raises(ConfigError):
        parse_config("rows = 8\n")


def test_inconsistent_geometry_surfaces_as_config_error():
    with pytest.raises(ConfigError):
        parse_config("[geometry]\nsample_rate = 1.0e8\n")  # below the bandwidth


def test_special_values_auto_and_none():
    cfg = parse_config(
        "[solver]\nlam = auto\nstep_mu = auto\n[simulation]\nbeam_halfwidth = none\n"
    )
    assert cfg.solver.lam is None
    assert cfg.solver.step_mu is None
    assert cfg.simulation.beam_halfwidth is None


def test_load_config_reads_files(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text("[scene]\nrows = 10\n")
    cfg = load_config(path)
    assert cfg.scene.rows == 10
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")


def test_manifest_contains_resolved_values(tmp_path):
    cfg = parse_config("")
    manifest = manifest_dict(cfg)
    assert manifest["geometry"]["reference_range"] == cfg.geometry.reference_range
    assert manifest["geometry"]["wavelength"] == cfg.geometry.wavelength
    assert manifest["scene"]["origin"] == list(cfg.scene_origin)
    assert manifest["solver"]["max_iterations"] == 5

    path = tmp_path / "manifest.json"
    write_manifest(path, cfg)
    parsed = json.loads(path.read_text())
    assert parsed == json.loads(json.dumps(manifest))
    write_manifest(tmp_path / "again.json", cfg)
    assert path.read_bytes() == (tmp_path / "again.json").read_bytes()
