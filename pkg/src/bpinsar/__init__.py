"""Sparse-regularized InSAR interferogram reconstruction with an
embedded back-projection forward model."""

from .geometry import (
    SPEED_OF_LIGHT,
    AcquisitionGeometry,
    AntennaId,
    antenna_position,
    antenna_track,
    mid_aperture_position,
    slant_range,
    slant_range_track,
)
from .scene import (
    IdealInterferogram,
    SceneModel,
    ideal_interferogram,
    make_cone_scene,
    make_flat_scene,
    make_point_scene,
    wrap_phase,
)
from .echo_sim import (
    EchoMatrix,
    SamplingMask,
    apply_mask,
    full_mask,
    make_sampling_mask,
    simulate_echo,
)
from .bp_imaging import (
    ComplexImage,
    ImageGrid,
    OutOfSwathError,
    RangeCompressed,
    backproject,
    bp_image,
    form_interferogram,
    interpolate_range,
    range_bin_index,
    range_compress,
)
from .forward_model import ObservationOperator, fourier_to_image, image_to_fourier
from .solver import (
    SolveReport,
    SolverConfig,
    SolverDivergenceError,
    objective,
    soft_threshold,
    solve,
)
from .metrics import (
    PhaseMetrics,
    count_residues,
    evaluate_interferogram,
    mean_coherence,
    phase_rmse,
)
from .gridio import (
    GridFileHeader,
    GridFormatError,
    export_phase_png,
    load_scene,
    read_grid,
    save_scene,
    write_grid,
)
from .config import (
    ConfigError,
    ExperimentConfig,
    default_config,
    default_config_text,
    load_config,
    parse_config,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "AcquisitionGeometry",
    "AntennaId",
    "antenna_position",
    "antenna_track",
    "mid_aperture_position",
    "slant_range",
    "slant_range_track",
    "IdealInterferogram",
    "SceneModel",
    "ideal_interferogram",
    "make_cone_scene",
    "make_flat_scene",
    "make_point_scene",
    "wrap_phase",
    "EchoMatrix",
    "SamplingMask",
    "apply_mask",
    "full_mask",
    "make_sampling_mask",
    "simulate_echo",
    "ComplexImage",
    "ImageGrid",
    "OutOfSwathError",
    "RangeCompressed",
    "backproject",
    "bp_image",
    "form_interferogram",
    "interpolate_range",
    "range_bin_index",
    "range_compress",
    "ObservationOperator",
    "fourier_to_image",
    "image_to_fourier",
    "SolveReport",
    "SolverConfig",
    "SolverDivergenceError",
    "objective",
    "soft_threshold",
    "solve",
    "PhaseMetrics",
    "count_residues",
    "evaluate_interferogram",
    "mean_coherence",
    "phase_rmse",
    "GridFileHeader",
    "GridFormatError",
    "export_phase_png",
    "load_scene",
    "read_grid",
    "save_scene",
    "write_grid",
    "ConfigError",
    "ExperimentConfig",
    "default_config",
    "default_config_text",
    "load_config",
    "parse_config",
]
