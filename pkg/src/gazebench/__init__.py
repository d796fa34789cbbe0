"""Synthetic scanpath generation and scanpath comparison metrics."""

__version__ = "0.1.0"

from .core import (
    CellStat,
    Difficulty,
    Fixation,
    MetricReport,
    NodeCount,
    SaliencyMap,
    Scanpath,
    TrialRecord,
    denormalize_point,
    normalize_point,
    read_scanpath,
    read_scanpaths,
    write_scanpath,
)
from .harness import EvalPlan, PairingMode, emit_tables, evaluate
from .ingest import GazeLogSchema, IDTParams, detect_fixations, parse_gaze_log, truncate_scanpath
from .maps import load_map, load_multi_duration
from .metrics import MetricParams, cross_recurrence, determinism, dtw, eyenalysis, laminarity
from .render import RenderStyle, render_scanpath
from .samplers import SamplerConfig, sample_center_baseline, sample_ior, sample_probabilistic
