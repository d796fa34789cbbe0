"""
Drawing a scanpath
==================

Overlay fixations on a stimulus, coloured from yellow (first) to dark red
(last).
"""

from pathlib import Path

import numpy as np

from gazebench import Scanpath
from gazebench.render import RenderStyle, drawing_commands, save_rendering

out = Path(__file__).with_name("_out")
out.mkdir(exist_ok=True)

path = Scanpath.from_points([(0.1, 0.2), (0.4, 0.25), (0.7, 0.3), (0.65, 0.7), (0.3, 0.8)], 250)

# The geometry is a flat list of primitives: segments first, then dots.
for cmd in drawing_commands(path, (400, 300)):
    print(cmd)

# A grey gradient stands in for a stimulus image.
stimulus = np.tile(np.linspace(40, 220, 400, dtype=np.uint8), (300, 1))
save_rendering(path, out / "overlay.png", stimulus, RenderStyle(dot_radius_px=9, line_width_px=3))

# Vector output on a blank canvas.
save_rendering(path, out / "overlay.svg", style=RenderStyle(width=400, height=300))
print("wrote", sorted(p.name for p in out.iterdir()))
