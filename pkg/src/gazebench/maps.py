"""Reading and writing saliency/density map files.

Grayscale PNG (8 or 16 bit) goes through Pillow. PGM, plain (P2) or raw
(P5), is parsed here so its declared maxval is honoured exactly. Values are
divided by the format maximum, giving maps in [0, 1].
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from .core import SaliencyMap
from .errors import InputFileError, SchemaError

_DURATION_SUFFIX = re.compile(r"^(?P<stem>.+)_d(?P<dur>\d+(?:\.\d+)?)$")


def _read_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise InputFileError("not a PGM file")
    tokens, pos = [], 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InputFileError("truncated PGM header")
        tokens.append(int(data[start:pos]))
    width, height, maxval = tokens
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise InputFileError(f"bad PGM header {tokens}")
    if magic == b"P2":
        body = data[pos:].split()
        if len(body) < width * height:
            raise InputFileError("PGM body shorter than header declares")
        values = np.array([int(v) for v in body[:width * height]], dtype=float)
    else:
        pos += 1  # single whitespace after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        count = width * height
        if len(data) - pos < count * dtype.itemsize:
            raise InputFileError("PGM body shorter than header declares")
        values = np.frombuffer(data, dtype=dtype, count=count, offset=pos).astype(float)
    return values.reshape(height, width) / maxval


def _read_png(path: Path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode in ("I;16", "I;16B", "I;16L", "I"):
            arr = np.asarray(im, dtype=float)
            return arr / 65535.0
        if im.mode != "L":
            im = im.convert("L")
        return np.asarray(im, dtype=float) / 255.0


def read_map_values(path) -> np.ndarray:
    path = Path(path)
    try:
        if path.suffix.lower() in (".pgm", ".pnm"):
            return _read_pgm(path.read_bytes())
        return _read_png(path)
    except InputFileError:
        raise
    except (OSError, ValueError) as exc:
        raise InputFileError(f"cannot read map {path}: {exc}") from exc


def load_map(path, duration_s: Optional[float] = None) -> SaliencyMap:
    return SaliencyMap(read_map_values(path), duration_s)


def write_map_png(values: np.ndarray, path, bits: int = 8) -> None:
    """Store a [0, 1] grid as grayscale PNG at 8 or 16 bits."""
    values = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if bits == 8:
        Image.fromarray(np.round(values * 255).astype(np.uint8), mode="L").save(path)
    elif bits == 16:
        Image.fromarray(np.round(values * 65535).astype(np.uint16)).save(path)
    else:
        raise ValueError("bits must be 8 or 16")


def write_map_pgm(values: np.ndarray, path, maxval: int = 255, plain: bool = False) -> None:
    values = np.round(np.clip(np.asarray(values, dtype=float), 0.0, 1.0) * maxval).astype(int)
    height, width = values.shape
    header = f"{'P2' if plain else 'P5'}\n{width} {height}\n{maxval}\n".encode()
    if plain:
        body = "\n".join(" ".join(str(v) for v in row) for row in values).encode() + b"\n"
    else:
        body = values.astype(">u2" if maxval > 255 else "u1").tobytes()
    Path(path).write_bytes(header + body)


def load_multi_duration(paths_and_bins) -> list[SaliencyMap]:
    """Load (path, duration_s) pairs ordered by duration."""
    maps = [load_map(p, float(d)) for p, d in paths_and_bins]
    maps.sort(key=lambda m: m.duration_bin_s)
    bins = [m.duration_bin_s for m in maps]
    if any(b <= a for a, b in zip(bins, bins[1:])):
        raise SchemaError(f"duration bins must be distinct, got {bins}")
    return maps


def discover_duration_maps(directory, stimulus_id: str) -> list[tuple[Path, float]]:
    """Find ``<stimulus>_d<seconds>.png`` (or .pgm) files for one stimulus."""
    found = []
    for p in Path(directory).iterdir():
        if p.suffix.lower() not in (".png", ".pgm"):
            continue
        m = _DURATION_SUFFIX.match(p.stem)
        if m and m.group("stem") == stimulus_id:
            found.append((p, float(m.group("dur"))))
    if not found:
        raise InputFileError(f"no duration maps for {stimulus_id!r} in {directory}")
    return sorted(found, key=lambda item: item[1])


def duration_from_filename(path) -> Optional[float]:
    m = _DURATION_SUFFIX.match(Path(path).stem)
    return float(m.group("dur")) if m else None


def read_map_manifest(path) -> tuple[str, list[tuple[Path, float]]]:
    """Parse ``{stimulus_id, maps: [{path, duration_s}]}``; paths resolve relative to the file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    try:
        entries = [(path.parent / m["path"], float(m["duration_s"])) for m in doc["maps"]]
        return str(doc["stimulus_id"]), entries
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed map manifest {path}: {exc}") from exc
