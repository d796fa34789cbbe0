"""
From raw gaze samples to fixations
==================================

Parse a tracker log and group samples into fixations with a dispersion
threshold.
"""

import io

from gazebench.ingest import GazeLogSchema, IDTParams, detect_fixations, parse_gaze_log

# 60 Hz samples: a steady look at one spot, a saccade, a blink (validity 0),
# then a second steady look. Pixel coordinates on a 1280x1024 screen.
rows = ["time,gx,gy,ok,subject,image"]
t = 0
for k in range(12):
    rows.append(f"{t},{256 + k % 2},{205},1,P01,img1")
    t += 17
for x in (500, 750):
    rows.append(f"{t},{x},{500},1,P01,img1")
    t += 17
for k in range(14):
    ok = 0 if k in (5, 6) else 1
    rows.append(f"{t},{1024},{820 + k % 3},{ok},P01,img1")
    t += 17
log = io.StringIO("\n".join(rows) + "\n")

# Column names differ from the defaults, and pixels are divided by the
# screen size to get normalized coordinates.
schema = GazeLogSchema(timestamp="time", x="gx", y="gy", validity="ok",
                       participant="subject", stimulus="image", screen_size=(1280, 1024))
parsed = parse_gaze_log(log, schema)
samples = parsed.trials[("P01", "img1")]
print(len(samples), "samples,", sum(s.usable for s in samples), "usable")

# A window counts as a fixation when (x range + y range) stays under the
# dispersion limit for at least min_duration_ms.
path = detect_fixations(samples, IDTParams(dispersion=0.02, min_duration_ms=100), "img1", "P01")
for f in path:
    print(f"x={f.x:.3f} y={f.y:.3f} onset={f.onset_ms:.0f} ms duration={f.duration_ms:.0f} ms")

# The blink leaves a 51 ms hole, shorter than max_gap_ms, so the second
# look stays one fixation. A 40 ms limit splits it, and the 68 ms piece
# before the blink is too short to count.
strict = detect_fixations(samples, IDTParams(max_gap_ms=40))
print([(round(f.onset_ms), round(f.duration_ms)) for f in strict])
