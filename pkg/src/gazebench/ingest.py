"""Raw gaze logs to fixation scanpaths.

Logs are delimited text with a header row, one eye-tracker sample per line.
Samples are grouped per (participant, stimulus), ordered by time, and fed to
a dispersion-threshold (I-DT) fixation detector.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import Fixation, Scanpath
from .errors import EmptyInputError, EmptyScanpathError, PreconditionError, SchemaError

log = logging.getLogger(__name__)

_VALID_TOKENS = {"1": True, "valid": True, "0": False, "invalid": False}


class Validity(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"


@dataclass(frozen=True)
class GazeSample:
    timestamp_ms: float
    x: float
    y: float
    validity: Validity = Validity.VALID

    @property
    def on_screen(self) -> bool:
        return 0.0 <= self.x <= 1.0 and 0.0 <= self.y <= 1.0

    @property
    def usable(self) -> bool:
        return self.validity is Validity.VALID and self.on_screen


@dataclass(frozen=True)
class GazeLogSchema:
    """Column names of a gaze log.

    ``time_scale`` converts the timestamp column to milliseconds (1000 for
    logs in seconds). ``screen_size`` divides raw x/y when the log stores
    pixels rather than normalized coordinates.
    """

    timestamp: str = "timestamp"
    x: str = "x"
    y: str = "y"
    validity: str = "validity"
    participant: str = "participant"
    stimulus: str = "stimulus"
    time_scale: float = 1.0
    screen_size: Optional[tuple[float, float]] = None

    @property
    def columns(self) -> tuple[str, ...]:
        return (self.timestamp, self.x, self.y, self.validity, self.participant, self.stimulus)


@dataclass
class ParsedLog:
    trials: dict[tuple[str, str], list[GazeSample]] = field(default_factory=dict)
    skipped: int = 0

    @property
    def n_samples(self) -> int:
        return sum(len(v) for v in self.trials.values())


def _detect_delimiter(header: str) -> str:
    return "\t" if header.count("\t") > header.count(",") else ","


def parse_gaze_log(stream, schema: GazeLogSchema = GazeLogSchema()) -> ParsedLog:
    """Parse a delimited gaze log into time-ordered samples per trial.

    ``stream`` is a text file object or a string holding the whole log.
    Rows with unparseable cells, unknown validity tokens or a timestamp
    repeated within their trial are skipped and counted.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    header = stream.readline()
    if not header.strip():
        raise EmptyInputError("gaze log is empty")
    delimiter = _detect_delimiter(header)
    names = [h.strip() for h in next(csv.reader([header], delimiter=delimiter))]
    missing = [c for c in schema.columns if c not in names]
    if missing:
        raise SchemaError(f"gaze log lacks mapped column(s): {', '.join(missing)}")
    idx = {c: names.index(c) for c in schema.columns}
    sx, sy = schema.screen_size or (1.0, 1.0)

    grouped: dict[tuple[str, str], list[GazeSample]] = defaultdict(list)
    skipped = 0
    for row in csv.reader(stream, delimiter=delimiter):
        if not row or all(not cell.strip() for cell in row):
            continue
        try:
            cells = {c: row[i].strip() for c, i in idx.items()}
            t = float(cells[schema.timestamp]) * schema.time_scale
            x = float(cells[schema.x]) / sx
            y = float(cells[schema.y]) / sy
            valid = _VALID_TOKENS[cells[schema.validity].lower()]
        except (IndexError, ValueError, KeyError):
            skipped += 1
            continue
        if not math.isfinite(t):
            skipped += 1
            continue
        if not (math.isfinite(x) and math.isfinite(y)):
            valid = False
        key = (cells[schema.participant], cells[schema.stimulus])
        grouped[key].append(GazeSample(t, x, y, Validity.VALID if valid else Validity.INVALID))

    trials = {}
    for key in sorted(grouped):
        samples = sorted(grouped[key], key=lambda s: s.timestamp_ms)
        kept = [samples[0]]
        for s in samples[1:]:
            if s.timestamp_ms == kept[-1].timestamp_ms:
                skipped += 1
            else:
                kept.append(s)
        trials[key] = kept
    if not trials:
        raise EmptyInputError("gaze log has no parseable rows")
    if skipped:
        log.info("skipped %d malformed gaze rows", skipped)
    return ParsedLog(trials, skipped)


@dataclass(frozen=True)
class IDTParams:
    """I-DT thresholds.

    dispersion: maximum (x range + y range) of a fixation window, normalized.
    min_duration_ms: minimum time span of a fixation window.
    max_gap_ms: gaps between usable samples shorter than this are bridged;
        longer ones close the current window.
    """

    dispersion: float = 0.02
    min_duration_ms: float = 100.0
    max_gap_ms: float = 75.0

    def __post_init__(self):
        if self.dispersion <= 0 or self.min_duration_ms < 0 or self.max_gap_ms <= 0:
            raise PreconditionError(f"invalid I-DT thresholds {self}")


def _segments(t: np.ndarray, max_gap_ms: float) -> list[slice]:
    breaks = np.flatnonzero(np.diff(t) >= max_gap_ms) + 1
    bounds = [0, *breaks.tolist(), len(t)]
    return [slice(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]


def _idt_windows(t: np.ndarray, x: np.ndarray, y: np.ndarray, params: IDTParams):
    """Yield (start, stop) index ranges of fixation windows within one segment."""
    n = len(t)
    i = 0
    while i < n:
        j = int(np.searchsorted(t, t[i] + params.min_duration_ms, side="left"))
        if j >= n:
            return
        xmin, xmax = x[i:j + 1].min(), x[i:j + 1].max()
        ymin, ymax = y[i:j + 1].min(), y[i:j + 1].max()
        if (xmax - xmin) + (ymax - ymin) > params.dispersion:
            i += 1
            continue
        while j + 1 < n:
            nx0, nx1 = min(xmin, x[j + 1]), max(xmax, x[j + 1])
            ny0, ny1 = min(ymin, y[j + 1]), max(ymax, y[j + 1])
            if (nx1 - nx0) + (ny1 - ny0) > params.dispersion:
                break
            xmin, xmax, ymin, ymax = nx0, nx1, ny0, ny1
            j += 1
        yield i, j + 1
        i = j + 1


def detect_fixations(samples: Sequence[GazeSample], params: IDTParams = IDTParams(),
                     stimulus_id: str = "", participant_id: Optional[str] = None) -> Scanpath:
    """Dispersion-threshold fixation detection.

    Invalid and off-screen samples are dropped. Each maximal window whose
    dispersion stays within ``params.dispersion`` and whose span reaches
    ``params.min_duration_ms`` becomes one fixation at the window centroid,
    with onset at its first sample and duration equal to its span.
    """
    if not samples:
        raise PreconditionError("no gaze samples to segment")
    usable = [s for s in samples if s.usable]
    if not usable:
        raise EmptyScanpathError("every gaze sample is invalid or off-screen")
    t = np.array([s.timestamp_ms for s in usable], dtype=float)
    x = np.array([s.x for s in usable], dtype=float)
    y = np.array([s.y for s in usable], dtype=float)
    if np.any(np.diff(t) <= 0):
        raise PreconditionError("gaze timestamps must be strictly increasing")

    fixations = []
    for seg in _segments(t, params.max_gap_ms):
        ts, xs, ys = t[seg], x[seg], y[seg]
        for a, b in _idt_windows(ts, xs, ys, params):
            fixations.append(Fixation(
                x=float(np.mean(xs[a:b])),
                y=float(np.mean(ys[a:b])),
                duration_ms=float(ts[b - 1] - ts[a]),
                onset_ms=float(ts[a]),
            ))
    if not fixations:
        raise EmptyScanpathError("no window satisfies the dispersion and duration thresholds")
    return Scanpath(tuple(fixations), stimulus_id, participant_id=participant_id)


def scanpaths_from_log(parsed: ParsedLog, params: IDTParams = IDTParams()) -> dict[tuple[str, str], Scanpath]:
    """Detect fixations for every trial of a parsed log.

    Trials yielding no fixation are dropped with a warning.
    """
    out = {}
    for (participant, stimulus), samples in parsed.trials.items():
        try:
            out[(participant, stimulus)] = detect_fixations(samples, params, stimulus, participant)
        except EmptyScanpathError as exc:
            log.warning("dropping trial participant=%s stimulus=%s: %s", participant, stimulus, exc)
    return out


def truncate_scanpath(path: Scanpath, n: int) -> Scanpath:
    """First ``n`` fixations of ``path`` (all of them if it is shorter)."""
    if n < 1:
        raise PreconditionError(f"truncation length must be >= 1, got {n}")
    if len(path) <= n:
        return path
    return Scanpath(path.fixations[:n], path.stimulus_id, path.source, path.participant_id)


def samples_from_arrays(t: Iterable[float], x: Iterable[float], y: Iterable[float],
                        valid: Optional[Iterable[bool]] = None) -> list[GazeSample]:
    t, x, y = list(t), list(x), list(y)
    valid = [True] * len(t) if valid is None else list(valid)
    return [
        GazeSample(float(ti), float(xi), float(yi), Validity.VALID if v else Validity.INVALID)
        for ti, xi, yi, v in zip(t, x, y, valid)
    ]
