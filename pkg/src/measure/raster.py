"""GF01 binary rasters and P6 pixmaps for grid fields."""

from pathlib import Path
from typing import Union

import numpy as np

from .grid import GridField, GridSpec, Tag


MAGIC = b"GF01"
_HEADER = np.dtype([("bbox", "<f8", (4,)), ("nx", "<u4"), ("ny", "<u4")])
_GRAY = {Tag.IN: 0, Tag.OUT: 255, Tag.UNDECIDED: 128}


def _pack(tags: np.ndarray) -> bytes:
    flat = tags.ravel()
    pad = (-len(flat)) % 4
    flat = np.concatenate([flat, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 4)
    packed = flat[:, 0] | (flat[:, 1] << 2) | (flat[:, 2] << 4) | (flat[:, 3] << 6)
    return packed.astype(np.uint8).tobytes()


def _unpack(data: bytes, count: int) -> np.ndarray:
    packed = np.frombuffer(data, dtype=np.uint8)
    flat = np.stack([(packed >> s) & 0b11 for s in (0, 2, 4, 6)], axis=1).ravel()
    return flat[:count].astype(np.uint8)


def write_gf01(field_: GridField, path: Union[str, Path]) -> Path:
    """
    Write a field as GF01: magic, bbox (4 x <f8), nx, ny (<u4), then tags.

    Tags are 2 bits each, four per byte starting at the low bits, rows from ymin up.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = np.zeros((), dtype=_HEADER)
    header["bbox"] = field_.spec.bbox
    header["nx"] = field_.spec.nx
    header["ny"] = field_.spec.ny
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(header.tobytes())
        f.write(_pack(field_.tags))
    return path


def read_gf01(path: Union[str, Path]) -> GridField:
    raw = Path(path).read_bytes()
    if raw[:4] != MAGIC:
        raise ValueError(f"{path} is not a GF01 raster")
    header = np.frombuffer(raw[4:4 + _HEADER.itemsize], dtype=_HEADER)[0]
    xmin, ymin, xmax, ymax = (float(v) for v in header["bbox"])
    nx, ny = int(header["nx"]), int(header["ny"])
    spec = GridSpec(xmin, ymin, xmax, ymax, nx, ny)
    tags = _unpack(raw[4 + _HEADER.itemsize:], nx * ny).reshape(ny, nx)
    return GridField(spec, tags)


def write_ppm(field_: GridField, path: Union[str, Path]) -> Path:
    """P6 pixmap with the ymax row on top; in black, out white, undecided gray."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lut = np.zeros(256, dtype=np.uint8)
    for tag, level in _GRAY.items():
        lut[int(tag)] = level
    gray = lut[field_.tags[::-1]]
    rgb = np.repeat(gray[:, :, None], 3, axis=2)
    ny, nx = field_.spec.shape
    with open(path, "wb") as f:
        f.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
        f.write(rgb.tobytes())
    return path
