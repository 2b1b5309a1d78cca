"""Binary grid files and phase PNG rendering.

File layout (little-endian, 23-byte header, then a row-major payload):

    offset  size  field
    0       4     magic "ISRG"
    4       2     format version, u16, currently 1
    6       1     dtype code, u8: 0 = complex float64 (re, im
                  interleaved), 1 = real float64
    7       4     rows, u32
    11      4     cols, u32
    15      8     pixel spacing in meters, f64

Payloads are written exactly as stored in memory (C order, little
endian), so a write/read cycle is bit-exact.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .scene import SceneModel

MAGIC = b"ISRG"
VERSION = 1
DTYPE_COMPLEX = 0
DTYPE_REAL = 1

_HEADER = struct.Struct("<4sHBIId")
assert _HEADER.size == 23

_NUMPY_DTYPES = {DTYPE_COMPLEX: np.dtype("<c16"), DTYPE_REAL: np.dtype("<f8")}


class GridFormatError(Exception):
    """Raised when a grid file violates the format above."""


@dataclass(frozen=True)
class GridFileHeader:
    version: int
    dtype_code: int
    rows: int
    cols: int
    pixel_spacing: float


def write_grid(path, array: np.ndarray, pixel_spacing: float) -> None:
    """Write a 2-D real or complex float64 grid."""
    array = np.asarray(array)
    if array.ndim != 2:
        raise ValueError(f"grid must be 2-D, got shape {array.shape}")
    if not pixel_spacing > 0:
        raise ValueError(f"pixel_spacing must be > 0, got {pixel_spacing!r}")
    if np.iscomplexobj(array):
        code = DTYPE_COMPLEX
    else:
        code = DTYPE_REAL
    array = np.ascontiguousarray(array, dtype=_NUMPY_DTYPES[code])
    if not np.all(np.isfinite(array.view(np.float64))):
        raise ValueError("refusing to write non-finite grid values")
    header = _HEADER.pack(
        MAGIC, VERSION, code, array.shape[0], array.shape[1], float(pixel_spacing)
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(array.tobytes(order="C"))


def read_grid(path) -> tuple[np.ndarray, GridFileHeader]:
    """Read a grid file back; inverse of write_grid, bit for bit."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise GridFormatError(
            f"file is {len(blob)} bytes, shorter than the {_HEADER.size}-byte header"
        )
    magic, version, code, rows, cols, spacing = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise GridFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise GridFormatError(f"unsupported version {version}, expected {VERSION}")
    if code not in _NUMPY_DTYPES:
        raise GridFormatError(f"unknown dtype code {code}")
    dtype = _NUMPY_DTYPES[code]
    expected = rows * cols * dtype.itemsize
    payload = blob[_HEADER.size:]
    if len(payload) != expected:
        raise GridFormatError(
            f"payload is {len(payload)} bytes, expected {expected} "
            f"for {rows}x{cols} {dtype}"
        )
    array = np.frombuffer(payload, dtype=dtype).reshape(rows, cols).copy()
    header = GridFileHeader(
        version=version,
        dtype_code=code,
        rows=rows,
        cols=cols,
        pixel_spacing=spacing,
    )
    return array, header


# ---------------------------------------------------------------------------
# phase rendering
# ---------------------------------------------------------------------------


def _cyclic_rgb(phase: np.ndarray) -> np.ndarray:
    """Map wrapped phase to RGB through a fixed full-saturation hue wheel.

    -pi and +pi land on the same color, so wrapped fields render
    without seams.
    """
    hue = np.mod((phase + np.pi) / (2.0 * np.pi), 1.0) * 6.0
    sector = np.floor(hue).astype(np.int64) % 6
    frac = hue - np.floor(hue)
    up = frac
    down = 1.0 - frac
    one = np.ones_like(frac)
    zero = np.zeros_like(frac)
    r = np.choose(sector, [one, down, zero, zero, up, one])
    g = np.choose(sector, [up, one, one, down, zero, zero])
    b = np.choose(sector, [zero, zero, up, one, one, down])
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)


def export_phase_png(image, path) -> None:
    """Render the phase of a complex image (or a raw phase array) to PNG."""
    data = np.asarray(getattr(image, "data", image))
    if data.ndim != 2:
        raise ValueError(f"image must be 2-D, got shape {data.shape}")
    phase = np.angle(data) if np.iscomplexobj(data) else np.asarray(data, np.float64)
    if not np.all(np.isfinite(phase)):
        raise ValueError("refusing to render non-finite phase")
    Image.fromarray(_cyclic_rgb(phase), mode="RGB").save(path, format="PNG")


# ---------------------------------------------------------------------------
# scene export
# ---------------------------------------------------------------------------

_SCENE_FIELDS = ("reflectivity", "speckle_phase", "height")


def save_scene(scene: SceneModel, directory) -> None:
    """Write a scene as three real grids plus a JSON sidecar."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in _SCENE_FIELDS:
        write_grid(directory / f"{name}.isrg", getattr(scene, name), scene.pixel_spacing)
    meta = {"origin": list(scene.origin), "pixel_spacing": scene.pixel_spacing}
    (directory / "scene.json").write_text(
        json.dumps(meta, sort_keys=True) + "\n", encoding="ascii"
    )


def load_scene(directory) -> SceneModel:
    directory = Path(directory)
    meta = json.loads((directory / "scene.json").read_text(encoding="ascii"))
    fields = {}
    for name in _SCENE_FIELDS:
        array, header = read_grid(directory / f"{name}.isrg")
        if header.dtype_code != DTYPE_REAL:
            raise GridFormatError(f"scene field {name} must be a real grid")
        fields[name] = array
    return SceneModel(
        pixel_spacing=float(meta["pixel_spacing"]),
        origin=tuple(float(v) for v in meta["origin"]),
        **fields,
    )
