"""Scanpath overlays: numbered-by-colour dots joined in temporal order.

The first fixation is drawn yellow and later ones shade linearly towards
dark red. Drawing goes through a flat list of primitives so the PNG and SVG
outputs carry exactly the same geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from PIL import Image, ImageDraw

from .core import Scanpath
from .errors import InputFileError, PreconditionError, RangeError

YELLOW = (255, 255, 0)
DARK_RED = (139, 0, 0)


@dataclass(frozen=True)
class RenderStyle:
    dot_radius_px: float = 6.0
    line_width_px: int = 2
    start_color: tuple[int, int, int] = YELLOW
    end_color: tuple[int, int, int] = DARK_RED
    width: Optional[int] = None
    height: Optional[int] = None
    background: tuple[int, int, int] = (255, 255, 255)

    def __post_init__(self):
        if not (self.dot_radius_px > 0 and self.line_width_px > 0):
            raise RangeError("dot radius and line width must be positive")


@dataclass(frozen=True)
class Dot:
    cx: float
    cy: float
    r: float
    color: tuple[int, int, int]
    t: float


@dataclass(frozen=True)
class Segment:
    x0: float
    y0: float
    x1: float
    y1: float
    width: int
    color: tuple[int, int, int]


def gradient(t: float, style: RenderStyle) -> tuple[int, int, int]:
    a, b = np.array(style.start_color, float), np.array(style.end_color, float)
    return tuple(int(v) for v in np.round(a + t * (b - a)))


def drawing_commands(path: Scanpath, dims: tuple[int, int], style: RenderStyle = RenderStyle()):
    """Segments (drawn first) then dots, in fixation order."""
    width, height = dims
    if width <= 0 or height <= 0:
        raise RangeError(f"canvas must have positive size, got {dims!r}")
    n = len(path)
    if n == 0:
        raise PreconditionError("nothing to draw")
    centers = [
        (min(max(f.x * width, 0.0), width - 1.0), min(max(f.y * height, 0.0), height - 1.0))
        for f in path
    ]
    params = [k / (n - 1) if n > 1 else 0.0 for k in range(n)]
    colors = [gradient(t, style) for t in params]
    segments = [
        Segment(*centers[k], *centers[k + 1], style.line_width_px, colors[k])
        for k in range(n - 1)
    ]
    dots = [Dot(cx, cy, style.dot_radius_px, c, t) for (cx, cy), c, t in zip(centers, colors, params)]
    return segments + dots


def _canvas(stimulus, style: RenderStyle) -> Image.Image:
    if stimulus is None:
        if not style.width or not style.height:
            raise RangeError("blank canvas needs style width and height")
        return Image.new("RGB", (style.width, style.height), style.background)
    if isinstance(stimulus, (str, Path)):
        try:
            with Image.open(stimulus) as im:
                return im.convert("RGB")
        except OSError as exc:
            raise InputFileError(f"cannot read stimulus {stimulus}: {exc}") from exc
    if isinstance(stimulus, np.ndarray):
        arr = stimulus
        if arr.dtype != np.uint8:
            arr = np.clip(np.round(arr * 255 if arr.max() <= 1 else arr), 0, 255).astype(np.uint8)
        return Image.fromarray(arr).convert("RGB")
    return stimulus.convert("RGB")


def render_scanpath(path: Scanpath, stimulus: Union[None, str, Path, np.ndarray, Image.Image] = None,
                    style: RenderStyle = RenderStyle()) -> Image.Image:
    """Draw ``path`` over the stimulus (or a blank canvas of the style's size)."""
    canvas = _canvas(stimulus, style)
    if canvas.width == 0 or canvas.height == 0:
        raise RangeError("zero-size canvas")
    draw = ImageDraw.Draw(canvas)
    for cmd in drawing_commands(path, canvas.size, style):
        if isinstance(cmd, Segment):
            draw.line([(cmd.x0, cmd.y0), (cmd.x1, cmd.y1)], fill=cmd.color, width=cmd.width)
        else:
            draw.ellipse([cmd.cx - cmd.r, cmd.cy - cmd.r, cmd.cx + cmd.r, cmd.cy + cmd.r], fill=cmd.color)
    return canvas


def render_svg(path: Scanpath, dims: tuple[int, int], style: RenderStyle = RenderStyle()) -> str:
    width, height = dims
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="rgb{tuple(style.background)}"/>',
    ]
    for cmd in drawing_commands(path, dims, style):
        if isinstance(cmd, Segment):
            lines.append(
                f'<line x1="{cmd.x0:.3f}" y1="{cmd.y0:.3f}" x2="{cmd.x1:.3f}" y2="{cmd.y1:.3f}" '
                f'stroke="rgb{cmd.color}" stroke-width="{cmd.width}"/>')
        else:
            lines.append(
                f'<circle cx="{cmd.cx:.3f}" cy="{cmd.cy:.3f}" r="{cmd.r:g}" fill="rgb{cmd.color}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def save_rendering(path: Scanpath, out, stimulus=None, style: RenderStyle = RenderStyle()) -> None:
    """Write PNG, or SVG when ``out`` ends in .svg."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if out.suffix.lower() == ".svg":
        if stimulus is not None:
            dims = _canvas(stimulus, style).size
        else:
            dims = (style.width or 0, style.height or 0)
        out.write_text(render_svg(path, dims, style), encoding="utf-8")
    else:
        render_scanpath(path, stimulus, style).save(out, format="PNG")
