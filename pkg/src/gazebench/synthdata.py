"""Seeded miniature dataset for desk-scale runs of the full pipeline.

Writes, under one directory:

    gaze/gaze_log.csv         60 Hz samples for every (participant, stimulus)
    maps/<stim>_d<s>.png      multi-duration saliency maps (0.5, 3, 5 s)
    maps/<stim>.json          map manifest per stimulus
    scanpaths/human/*.json    fixations detected from the gaze log
    manifest.json             trials plus sampler-backed synthetic sources

Stimuli mimic node-link graphs whose nodes sit near the top or bottom of the
image; gaze hops between nodes with small fixation jitter.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import CONDITION_ORDER, write_scanpath
from .ingest import IDTParams, detect_fixations, parse_gaze_log
from .maps import write_map_png

DURATION_BINS = (0.5, 3.0, 5.0)
SAMPLE_MS = 1000.0 / 60.0

GENERATORS = {
    # name: (sampler mode, pairing)
    "umss": ("prob", "per-participant"),
    "deepgaze": ("ior", "per-stimulus"),
    "center": ("center", "per-stimulus"),
}


def _node_layout(rng: np.random.Generator, n_nodes: int) -> np.ndarray:
    nodes = []
    while len(nodes) < n_nodes:
        band = rng.choice([(0.1, 0.3), (0.7, 0.9)])
        cand = np.array([rng.uniform(0.1, 0.9), rng.uniform(*band)])
        if all(np.linalg.norm(cand - p) >= 0.2 for p in nodes):
            nodes.append(cand)
    return np.array(nodes)


def _maps_for(rng: np.random.Generator, nodes: np.ndarray, size: tuple[int, int]) -> list[np.ndarray]:
    width, height = size
    gx, gy = np.meshgrid((np.arange(width) + 0.5) / width, (np.arange(height) + 0.5) / height)
    weights = rng.uniform(0.5, 1.0, len(nodes))
    out = []
    for spread in (0.04, 0.06, 0.08):
        v = np.full(gx.shape, 0.02)
        for (nx, ny), w in zip(nodes, weights):
            v += w * np.exp(-((gx - nx) ** 2 + (gy - ny) ** 2) / (2 * spread ** 2))
        out.append(v / v.max())
        weights = np.sqrt(weights)
    return out


def _trial_samples(rng: np.random.Generator, nodes: np.ndarray, n_fixations: int):
    """Gaze rows (t, x, y, valid) for one trial with exactly n_fixations fixations."""
    targets = [int(rng.integers(len(nodes)))]
    while len(targets) < n_fixations:
        nxt = int(rng.integers(len(nodes)))
        if nxt != targets[-1]:
            targets.append(nxt)
    rows, k = [], 0
    prev = None
    for target in targets:
        centre = np.clip(nodes[target] + rng.normal(0, 0.015, 2), 0.02, 0.98)
        if prev is not None:
            for frac in (1 / 3, 2 / 3):
                p = prev + frac * (centre - prev)
                rows.append((round(k * SAMPLE_MS), p[0], p[1], 1))
                k += 1
        n = math.ceil(rng.uniform(150, 400) / SAMPLE_MS)
        blink_at = int(rng.integers(3, n - 4)) if n > 10 and rng.random() < 0.3 else -1
        for i in range(n):
            jitter = rng.uniform(-0.003, 0.003, 2)
            valid = 0 if blink_at <= i < blink_at + 2 else 1
            rows.append((round(k * SAMPLE_MS), centre[0] + jitter[0], centre[1] + jitter[1], valid))
            k += 1
        prev = centre
    return rows


def synth_fixtures(out_dir, seed: int = 0, participants: int = 3, stimuli_per_cell: int = 2,
                   n_human: int = 12, n_synthetic: int = 7, map_size: tuple[int, int] = (64, 48)) -> Path:
    """Write the miniature dataset and return the path of its manifest."""
    out = Path(out_dir)
    rng = np.random.default_rng(seed)
    stimuli = []
    for difficulty, nodes in CONDITION_ORDER:
        for k in range(stimuli_per_cell):
            stimuli.append((f"{difficulty.value}{int(nodes)}_{k}", difficulty.value, int(nodes)))

    log_rows = []
    layouts = {}
    for stim, _, n_nodes in stimuli:
        layout = _node_layout(rng, n_nodes)
        layouts[stim] = layout
        map_entries = []
        for dur, values in zip(DURATION_BINS, _maps_for(rng, layout, map_size)):
            name = f"{stim}_d{dur:g}.png"
            write_map_png(values, out / "maps" / name)
            map_entries.append({"path": name, "duration_s": dur})
        (out / "maps" / f"{stim}.json").write_text(
            json.dumps({"stimulus_id": stim, "maps": map_entries}, indent=2) + "\n", encoding="utf-8")
        for p in range(participants):
            pid = f"P{p + 1:02d}"
            for t, x, y, valid in _trial_samples(rng, layout, n_human):
                log_rows.append((t, f"{x:.6f}", f"{y:.6f}", valid, pid, stim))

    log_path = out / "gaze" / "gaze_log.csv"
    log_path.parent.mkdir(parents=True, exist_ok=True)
    with open(log_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", "x", "y", "validity", "participant", "stimulus"])
        writer.writerows(log_rows)

    with open(log_path, encoding="utf-8") as fh:
        parsed = parse_gaze_log(fh)
    trials = []
    conditions = {stim: (d, n) for stim, d, n in stimuli}
    for (pid, stim), samples in parsed.trials.items():
        path = detect_fixations(samples, IDTParams(), stim, pid)
        if len(path) != n_human:
            raise RuntimeError(f"fixture trial {pid}/{stim} produced {len(path)} fixations")
        rel = f"scanpaths/human/{pid}_{stim}.json"
        write_scanpath(path, out / rel)
        difficulty, n_nodes = conditions[stim]
        trials.append({"participant_id": pid, "stimulus_id": stim, "difficulty": difficulty,
                       "node_count": n_nodes, "scanpath_path": rel})

    synthetic = []
    for generator, (mode, pairing) in GENERATORS.items():
        count = participants if pairing == "per-participant" else 1
        for stim, _, _ in stimuli:
            maps = [{"path": f"maps/{stim}_d{d:g}.png", "duration_s": d} for d in DURATION_BINS]
            if mode == "ior":
                maps = maps[-1:]
            synthetic.append({
                "stimulus_id": stim,
                "generator": generator,
                "pairing": pairing,
                "scanpath_paths": [f"synthetic/{generator}/{stim}_{i}.json" for i in range(count)],
                "sampler": {"mode": mode, "maps": maps, "config": {"n_fixations": n_synthetic}},
            })

    manifest = out / "manifest.json"
    manifest.write_text(json.dumps({"trials": trials, "synthetic": synthetic}, indent=2) + "\n",
                        encoding="utf-8")
    return manifest
