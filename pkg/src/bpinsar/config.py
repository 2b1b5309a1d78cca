"""Experiment configuration: sectioned text files, defaults, manifest.

The file format is flat ``key = value`` lines grouped under
``[section]`` headers; ``#`` or ``;`` start full-line comments.  Every
key has a default, unknown sections or keys are rejected, and parse
errors carry the offending line number.  Values the loader computes
(reference range, scene origin) are resolved immediately so the
manifest can list the exact numbers a run used.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

from .geometry import SPEED_OF_LIGHT, AcquisitionGeometry
from .scene import SceneModel, make_cone_scene
from .solver import SolverConfig


class ConfigError(Exception):
    """Malformed or inconsistent experiment configuration."""


@dataclass(frozen=True)
class SceneConfig:
    rows: int = 64
    cols: int = 64
    pixel_spacing: float = 0.5
    max_height: float = 1.5
    radius_fraction: float = 0.5
    seed: int = 11


@dataclass(frozen=True)
class SamplingConfig:
    fraction: float = 1.0
    seed: int = 7


@dataclass(frozen=True)
class SimulationConfig:
    noise_sigma: float = 0.0
    noise_seed: int = 0
    beam_halfwidth: float | None = None


@dataclass(frozen=True)
class ImagingConfig:
    upsample_factor: int = 8


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: AcquisitionGeometry
    scene: SceneConfig
    sampling: SamplingConfig
    simulation: SimulationConfig
    imaging: ImagingConfig
    solver: SolverConfig
    output_directory: str
    scene_origin: tuple[float, float, float]

    def build_scene(self) -> SceneModel:
        return make_cone_scene(
            rows=self.scene.rows,
            cols=self.scene.cols,
            pixel_spacing=self.scene.pixel_spacing,
            max_height=self.scene.max_height,
            seed=self.scene.seed,
            origin=self.scene_origin,
            radius_fraction=self.scene.radius_fraction,
        )


# ---------------------------------------------------------------------------
# defaults
# ---------------------------------------------------------------------------

# Desk-scale analogue of the reference acquisition: same platform,
# carrier and baseline, with the swath shrunk to a 64 x 64 patch so the
# whole pipeline runs in seconds.
_GEOMETRY_DEFAULTS = {
    "altitude": 3000.0,
    "velocity": 50.0,
    "baseline_length": 1.0,
    "baseline_tilt_deg": 0.0,
    "incidence_angle_deg": 35.0,
    "carrier_frequency": 35.0e9,
    "bandwidth": 400.0e6,
    "sample_rate": 500.0e6,
    "prf": 250.0,
    "pulse_count": 128,
    "range_sample_count": 256,
    "reference_range": "auto",
}

_SCHEMA: dict[str, dict[str, tuple]] = {
    "geometry": {
        "altitude": (float, _GEOMETRY_DEFAULTS["altitude"]),
        "velocity": (float, _GEOMETRY_DEFAULTS["velocity"]),
        "baseline_length": (float, _GEOMETRY_DEFAULTS["baseline_length"]),
        "baseline_tilt_deg": (float, _GEOMETRY_DEFAULTS["baseline_tilt_deg"]),
        "incidence_angle_deg": (float, _GEOMETRY_DEFAULTS["incidence_angle_deg"]),
        "carrier_frequency": (float, _GEOMETRY_DEFAULTS["carrier_frequency"]),
        "bandwidth": (float, _GEOMETRY_DEFAULTS["bandwidth"]),
        "sample_rate": (float, _GEOMETRY_DEFAULTS["sample_rate"]),
        "prf": (float, _GEOMETRY_DEFAULTS["prf"]),
        "pulse_count": (int, _GEOMETRY_DEFAULTS["pulse_count"]),
        "range_sample_count": (int, _GEOMETRY_DEFAULTS["range_sample_count"]),
        "reference_range": ("float_or_auto", None),
    },
    "scene": {
        "rows": (int, SceneConfig.rows),
        "cols": (int, SceneConfig.cols),
        "pixel_spacing": (float, SceneConfig.pixel_spacing),
        "max_height": (float, SceneConfig.max_height),
        "radius_fraction": (float, SceneConfig.radius_fraction),
        "seed": (int, SceneConfig.seed),
    },
    "sampling": {
        "fraction": (float, SamplingConfig.fraction),
        "seed": (int, SamplingConfig.seed),
    },
    "simulation": {
        "noise_sigma": (float, SimulationConfig.noise_sigma),
        "noise_seed": (int, SimulationConfig.noise_seed),
        "beam_halfwidth": ("float_or_none", None),
    },
    "imaging": {
        "upsample_factor": (int, ImagingConfig.upsample_factor),
    },
    "solver": {
        "lam": ("float_or_auto", None),
        "lam_scale": (float, 0.01),
        "step_mu": ("float_or_auto", None),
        "max_iterations": (int, 5),
        "tolerance": (float, 1e-4),
        "norm_power_iterations": (int, 30),
        "init": ("choice:zero,bp", "zero"),
    },
    "output": {
        "directory": (str, "runs/cone"),
    },
}


def _convert(kind, raw: str, where: str):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw
        if kind == "float_or_auto":
            return None if raw.lower() == "auto" else float(raw)
        if kind == "float_or_none":
            return None if raw.lower() == "none" else float(raw)
        if isinstance(kind, str) and kind.startswith("choice:"):
            choices = kind.split(":", 1)[1].split(",")
            if raw not in choices:
                raise ValueError(f"must be one of {choices}")
            return raw
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value {raw!r} ({exc})") from None
    raise AssertionError(f"unhandled schema kind {kind!r}")


def _parse_sections(text: str, source: str) -> dict[str, dict[str, object]]:
    values: dict[str, dict[str, object]] = {s: {} for s in _SCHEMA}
    section: str | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        where = f"{source}:{lineno}"
        if not line or line.startswith(("#", ";")):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(
                    f"{where}: unknown section [{section}]; expected one of "
                    f"{sorted(_SCHEMA)}"
                )
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw_line!r}")
        if section is None:
            raise ConfigError(f"{where}: key before any [section] header")
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(
                f"{where}: unknown key {key!r} in [{section}]; expected one of "
                f"{sorted(_SCHEMA[section])}"
            )
        if key in values[section]:
            raise ConfigError(f"{where}: duplicate key {key!r} in [{section}]")
        kind, _default = _SCHEMA[section][key]
        values[section][key] = _convert(kind, raw, where)
    return values


def _resolved(values: dict[str, dict[str, object]]) -> ExperimentConfig:
    def get(section: str, key: str):
        if key in values[section]:
            return values[section][key]
        return _SCHEMA[section][key][1]

    g = {k: get("geometry", k) for k in _SCHEMA["geometry"]}
    incidence = math.radians(g["incidence_angle_deg"])
    scene = SceneConfig(
        rows=get("scene", "rows"),
        cols=get("scene", "cols"),
        pixel_spacing=get("scene", "pixel_spacing"),
        max_height=get("scene", "max_height"),
        radius_fraction=get("scene", "radius_fraction"),
        seed=get("scene", "seed"),
    )
    if scene.rows < 1 or scene.cols < 1:
        raise ConfigError(f"scene must be at least 1x1, got {scene.rows}x{scene.cols}")
    if not scene.pixel_spacing > 0:
        raise ConfigError(f"pixel_spacing must be > 0, got {scene.pixel_spacing!r}")
    if scene.max_height < 0:
        raise ConfigError(f"max_height must be >= 0, got {scene.max_height!r}")
    if not scene.radius_fraction > 0:
        raise ConfigError(
            f"radius_fraction must be > 0, got {scene.radius_fraction!r}"
        )

    if not 0 < incidence < math.pi / 2:
        raise ConfigError(
            f"incidence_angle_deg must lie in (0, 90), got "
            f"{g['incidence_angle_deg']!r}"
        )
    center_range = g["altitude"] / math.cos(incidence)
    reference_range = g["reference_range"]
    if reference_range is None:
        swath = g["range_sample_count"] * SPEED_OF_LIGHT / (2.0 * g["sample_rate"])
        reference_range = center_range - swath / 2.0

    try:
        geometry = AcquisitionGeometry(
            altitude=g["altitude"],
            velocity=g["velocity"],
            baseline_length=g["baseline_length"],
            baseline_tilt=math.radians(g["baseline_tilt_deg"]),
            incidence_angle=incidence,
            carrier_frequency=g["carrier_frequency"],
            bandwidth=g["bandwidth"],
            sample_rate=g["sample_rate"],
            prf=g["prf"],
            pulse_count=g["pulse_count"],
            range_sample_count=g["range_sample_count"],
            reference_range=reference_range,
        )
        solver = SolverConfig(
            lam=get("solver", "lam"),
            lam_scale=get("solver", "lam_scale"),
            step_mu=get("solver", "step_mu"),
            max_iterations=get("solver", "max_iterations"),
            tolerance=get("solver", "tolerance"),
            norm_power_iterations=get("solver", "norm_power_iterations"),
            init=get("solver", "init"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    # Center the grid on the beam footprint: mid-aperture along track,
    # the nominal incidence point across track.
    center_x = geometry.velocity * (geometry.pulse_count - 1) / (2.0 * geometry.prf)
    center_y = geometry.altitude * math.tan(incidence)
    origin = (
        center_x - (scene.rows - 1) / 2.0 * scene.pixel_spacing,
        center_y - (scene.cols - 1) / 2.0 * scene.pixel_spacing,
        0.0,
    )

    sampling = SamplingConfig(
        fraction=get("sampling", "fraction"), seed=get("sampling", "seed")
    )
    if not 0.0 < sampling.fraction <= 1.0:
        raise ConfigError(f"sampling fraction must lie in (0, 1], got {sampling.fraction!r}")
    simulation = SimulationConfig(
        noise_sigma=get("simulation", "noise_sigma"),
        noise_seed=get("simulation", "noise_seed"),
        beam_halfwidth=get("simulation", "beam_halfwidth"),
    )
    if simulation.noise_sigma < 0:
        raise ConfigError(f"noise_sigma must be >= 0, got {simulation.noise_sigma!r}")
    imaging = ImagingConfig(upsample_factor=get("imaging", "upsample_factor"))
    if not (imaging.upsample_factor >= 1 and
            imaging.upsample_factor & (imaging.upsample_factor - 1) == 0):
        raise ConfigError(
            f"upsample_factor must be a power of two >= 1, got "
            f"{imaging.upsample_factor!r}"
        )

    return ExperimentConfig(
        geometry=geometry,
        scene=scene,
        sampling=sampling,
        simulation=simulation,
        imaging=imaging,
        solver=solver,
        output_directory=str(get("output", "directory")),
        scene_origin=origin,
    )


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    return _resolved(_parse_sections(text, source))


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))


def default_config() -> ExperimentConfig:
    return parse_config("", source="<defaults>")


def default_config_text() -> str:
    """A fully-commented config file listing every key at its default."""
    cfg = default_config()
    geo = cfg.geometry
    return f"""# Two-antenna acquisition over a cone scene, desk scale.
# All keys are optional; the values below are the built-in defaults.

[geometry]
altitude = {geo.altitude}
velocity = {geo.velocity}
baseline_length = {geo.baseline_length}
baseline_tilt_deg = {math.degrees(geo.baseline_tilt)}
incidence_angle_deg = {math.degrees(geo.incidence_angle)}
carrier_frequency = {geo.carrier_frequency}
bandwidth = {geo.bandwidth}
sample_rate = {geo.sample_rate}
prf = {geo.prf}
pulse_count = {geo.pulse_count}
range_sample_count = {geo.range_sample_count}
# auto: center the fast-time window on the nominal incidence point
reference_range = auto

[scene]
rows = {cfg.scene.rows}
cols = {cfg.scene.cols}
pixel_spacing = {cfg.scene.pixel_spacing}
max_height = {cfg.scene.max_height}
radius_fraction = {cfg.scene.radius_fraction}
seed = {cfg.scene.seed}

[sampling]
fraction = {cfg.sampling.fraction}
seed = {cfg.sampling.seed}

[simulation]
noise_sigma = {cfg.simulation.noise_sigma}
noise_seed = {cfg.simulation.noise_seed}
beam_halfwidth = none

[imaging]
upsample_factor = {cfg.imaging.upsample_factor}

[solver]
lam = auto
lam_scale = {cfg.solver.lam_scale}
step_mu = auto
max_iterations = {cfg.solver.max_iterations}
tolerance = {cfg.solver.tolerance}
norm_power_iterations = {cfg.solver.norm_power_iterations}
init = {cfg.solver.init}

[output]
directory = {cfg.output_directory}
"""


def manifest_dict(cfg: ExperimentConfig) -> dict:
    """Every resolved parameter of a run, including computed defaults."""
    geo = cfg.geometry
    return {
        "geometry": {
            **{k: getattr(geo, k) for k in (
                "altitude", "velocity", "baseline_length", "baseline_tilt",
                "incidence_angle", "carrier_frequency", "bandwidth",
                "sample_rate", "prf", "pulse_count", "range_sample_count",
                "reference_range",
            )},
            "wavelength": geo.wavelength,
        },
        "scene": {**asdict(cfg.scene), "origin": list(cfg.scene_origin)},
        "sampling": asdict(cfg.sampling),
        "simulation": asdict(cfg.simulation),
        "imaging": asdict(cfg.imaging),
        "solver": {
            "lam": cfg.solver.lam,
            "lam_scale": cfg.solver.lam_scale,
            "step_mu": cfg.solver.step_mu,
            "max_iterations": cfg.solver.max_iterations,
            "tolerance": cfg.solver.tolerance,
            "norm_power_iterations": cfg.solver.norm_power_iterations,
            "init": cfg.solver.init,
        },
        "output": {"directory": cfg.output_directory},
    }


def write_manifest(path, cfg: ExperimentConfig) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(manifest_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
