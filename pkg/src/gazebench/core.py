"""Domain types and coordinate conventions shared by every module.

Positions are stored normalized to the unit square: x by stimulus width and
y by stimulus height, independently, with y growing downward as in raster
images. All distances elsewhere in the package are Euclidean on these
normalized coordinates.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import DegenerateMapError, InputFileError, PreconditionError, RangeError, SchemaError

HUMAN = "human"


class Difficulty(str, enum.Enum):
    EASY = "easy"
    HARD = "hard"


class NodeCount(int, enum.Enum):
    THREE = 3
    SIX = 6


def parse_difficulty(value) -> Difficulty:
    try:
        return Difficulty(str(value).strip().lower())
    except ValueError:
        raise SchemaError(f"unknown question difficulty {value!r}") from None


def parse_node_count(value) -> NodeCount:
    try:
        return NodeCount(int(value))
    except (TypeError, ValueError):
        raise SchemaError(f"node count must be 3 or 6, got {value!r}") from None


def normalize_point(px: tuple[float, float], dims: tuple[float, float]) -> tuple[float, float]:
    """Map a pixel coordinate to the unit square.

    Raises RangeError if the dimensions are not positive or the point lies
    outside ``[0, width] x [0, height]``.
    """
    width, height = dims
    if not (width > 0 and height > 0):
        raise RangeError(f"dimensions must be positive, got {dims!r}")
    x, y = px
    if not (0 <= x <= width and 0 <= y <= height):
        raise RangeError(f"point {px!r} outside image of size {dims!r}")
    return (x / width, y / height)


def denormalize_point(p: tuple[float, float], dims: tuple[float, float]) -> tuple[float, float]:
    width, height = dims
    if not (width > 0 and height > 0):
        raise RangeError(f"dimensions must be positive, got {dims!r}")
    return (p[0] * width, p[1] * height)


@dataclass(frozen=True)
class Fixation:
    x: float
    y: float
    duration_ms: float = 0.0
    onset_ms: float = 0.0

    def __post_init__(self):
        for name in ("x", "y"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise RangeError(f"fixation {name}={v!r} outside [0, 1]")
        if not (self.duration_ms >= 0 and self.onset_ms >= 0):
            raise RangeError("fixation duration and onset must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "x": float(self.x),
            "y": float(self.y),
            "duration_ms": float(self.duration_ms),
            "onset_ms": float(self.onset_ms),
        }


@dataclass(frozen=True)
class Scanpath:
    """Ordered fixations over one stimulus.

    ``source`` is ``"human"`` for recorded data, otherwise the name of the
    generator that produced the path.
    """

    fixations: tuple[Fixation, ...]
    stimulus_id: str = ""
    source: str = HUMAN
    participant_id: Optional[str] = None

    def __post_init__(self):
        fixations = tuple(self.fixations)
        object.__setattr__(self, "fixations", fixations)
        if not fixations:
            raise PreconditionError("a scanpath needs at least one fixation")
        onsets = [f.onset_ms for f in fixations]
        if any(b < a for a, b in zip(onsets, onsets[1:])):
            raise PreconditionError("fixation onsets must be nondecreasing")

    def __len__(self) -> int:
        return len(self.fixations)

    def __iter__(self) -> Iterator[Fixation]:
        return iter(self.fixations)

    def __getitem__(self, index):
        return self.fixations[index]

    @property
    def is_human(self) -> bool:
        return self.source == HUMAN

    def positions(self) -> np.ndarray:
        """(n, 2) array of normalized x, y."""
        return np.array([(f.x, f.y) for f in self.fixations], dtype=float)

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]], duration_ms: float = 0.0,
                    stimulus_id: str = "", source: str = HUMAN,
                    participant_id: Optional[str] = None) -> "Scanpath":
        """Build a path from bare (x, y) pairs with evenly spaced onsets."""
        fixations = tuple(
            Fixation(float(p[0]), float(p[1]), duration_ms, k * duration_ms)
            for k, p in enumerate(points)
        )
        return cls(fixations, stimulus_id, source, participant_id)

    def to_dict(self) -> dict:
        return {
            "stimulus_id": self.stimulus_id,
            "participant_id": self.participant_id,
            "source": self.source,
            "fixations": [f.to_dict() for f in self.fixations],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scanpath":
        try:
            fixations = tuple(
                Fixation(float(f["x"]), float(f["y"]),
                         float(f.get("duration_ms", 0.0)), float(f.get("onset_ms", 0.0)))
                for f in d["fixations"]
            )
            return cls(
                fixations,
                str(d.get("stimulus_id", "")),
                str(d.get("source") or HUMAN),
                None if d.get("participant_id") is None else str(d["participant_id"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (RangeError, PreconditionError)):
                raise
            raise SchemaError(f"malformed scanpath document: {exc}") from exc


def dump_scanpath(path: Scanpath) -> str:
    return json.dumps(path.to_dict(), indent=2) + "\n"


def write_scanpath(path: Scanpath, filename) -> None:
    filename = Path(filename)
    filename.parent.mkdir(parents=True, exist_ok=True)
    filename.write_text(dump_scanpath(path), encoding="utf-8")


def write_scanpaths_jsonl(paths: Iterable[Scanpath], filename) -> None:
    filename = Path(filename)
    filename.parent.mkdir(parents=True, exist_ok=True)
    with open(filename, "w", encoding="utf-8") as fh:
        for p in paths:
            fh.write(json.dumps(p.to_dict()) + "\n")


def read_scanpaths(filename) -> list[Scanpath]:
    """Read a scanpath JSON document or a JSON-lines stream of them."""
    try:
        text = Path(filename).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read {filename}: {exc}") from exc
    try:
        stripped = text.strip()
        if not stripped:
            raise SchemaError(f"{filename} is empty")
        try:
            docs = [json.loads(stripped)]
        except json.JSONDecodeError:
            docs = [json.loads(line) for line in stripped.splitlines() if line.strip()]
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{filename} is not valid JSON: {exc}") from exc
    if len(docs) == 1 and isinstance(docs[0], list):
        docs = docs[0]
    return [Scanpath.from_dict(d) for d in docs]


def read_scanpath(filename) -> Scanpath:
    paths = read_scanpaths(filename)
    if len(paths) != 1:
        raise SchemaError(f"{filename} holds {len(paths)} scanpaths, expected one")
    return paths[0]


@dataclass(frozen=True, eq=False)
class SaliencyMap:
    """Nonnegative grid over a stimulus, rows top to bottom.

    ``duration_bin_s`` is the cumulative viewing time the map describes when
    it belongs to a multi-duration set.
    """

    values: np.ndarray
    duration_bin_s: Optional[float] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.size == 0:
            raise PreconditionError("saliency values must be a nonempty 2-D grid")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise RangeError("saliency values must be finite and nonnegative")
        if not np.any(values > 0):
            raise DegenerateMapError("saliency map has no positive value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def dims(self) -> tuple[int, int]:
        return (self.width, self.height)

    def pixel_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """Normalized x and y of every pixel center, each shaped like values."""
        xs = (np.arange(self.width) + 0.5) / self.width
        ys = (np.arange(self.height) + 0.5) / self.height
        gx, gy = np.meshgrid(xs, ys)
        return gx, gy

    def pixel_center(self, flat_index: int) -> tuple[float, float]:
        row, col = divmod(int(flat_index), self.width)
        return ((col + 0.5) / self.width, (row + 0.5) / self.height)


@dataclass(frozen=True)
class TrialRecord:
    participant_id: str
    stimulus_id: str
    question_difficulty: Difficulty
    node_count: NodeCount
    human_scanpath: Scanpath

    def __post_init__(self):
        object.__setattr__(self, "question_difficulty", parse_difficulty(
            getattr(self.question_difficulty, "value", self.question_difficulty)))
        object.__setattr__(self, "node_count", parse_node_count(self.node_count))

    @property
    def condition(self) -> tuple[Difficulty, NodeCount]:
        return (self.question_difficulty, self.node_count)


@dataclass(frozen=True)
class CellStat:
    """Mean and standard deviation of one metric over one condition cell.

    ``mean`` and ``std`` are None when no pair contributed (n == 0).
    """

    mean: Optional[float]
    std: Optional[float]
    n: int

    @classmethod
    def from_values(cls, values: Sequence[float], ddof: int = 0) -> "CellStat":
        n = len(values)
        if n == 0 or n - ddof <= 0:
            return cls(None, None, n)
        arr = np.asarray(values, dtype=float)
        mean = math.fsum(arr) / n
        var = math.fsum((arr - mean) ** 2) / (n - ddof)
        return cls(mean, math.sqrt(var), n)


METRIC_NAMES = ("dtw", "eyenalysis", "determinism", "laminarity")


@dataclass(frozen=True)
class PairResult:
    """Metric values for one human/synthetic pair.

    Recurrence metrics are None for pairs excluded from them (a path shorter
    than the minimum line length). ``matched`` marks the i-th synthetic to
    i-th participant pairing; cross-product pairs carry False.
    """

    participant_id: str
    stimulus_id: str
    question_difficulty: Difficulty
    node_count: NodeCount
    generator: str
    synthetic_index: int
    matched: bool
    dtw: float
    eyenalysis: float
    determinism: Optional[float]
    laminarity: Optional[float]

    @property
    def condition(self) -> tuple[Difficulty, NodeCount]:
        return (self.question_difficulty, self.node_count)


Condition = tuple[Difficulty, NodeCount]

# Row order of the results tables: six-node graphs first, hard before easy.
CONDITION_ORDER: tuple[Condition, ...] = (
    (Difficulty.HARD, NodeCount.SIX),
    (Difficulty.EASY, NodeCount.SIX),
    (Difficulty.HARD, NodeCount.THREE),
    (Difficulty.EASY, NodeCount.THREE),
)


@dataclass(frozen=True)
class MetricReport:
    """Per-pair rows plus condition-grouped summaries.

    ``grouped`` aggregates every human x synthetic pair of a stimulus;
    ``matched_grouped`` aggregates only the index-matched pairs. The two
    coincide when a single synthetic path is shared by all participants.
    """

    per_pair: tuple[PairResult, ...] = ()
    grouped: dict = field(default_factory=dict)
    matched_grouped: dict = field(default_factory=dict)
    generator: str = ""
