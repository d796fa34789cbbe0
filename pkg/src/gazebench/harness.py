"""Evaluation protocol: pair human and synthetic scanpaths, score, aggregate.

Two pairing modes mirror how the generators are used:

* per-participant: a stimulus gets one synthetic path per participant. The
  i-th synthetic path is matched with the i-th participant (participants
  sorted by id), and every human x synthetic pair of the stimulus is also
  scored for the all-pairs summary.
* per-stimulus: a single synthetic path is compared with every human path.

Aggregation is by (question difficulty, node count) cell.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import logging
import zlib
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import (
    CONDITION_ORDER,
    METRIC_NAMES,
    CellStat,
    MetricReport,
    PairResult,
    Scanpath,
    TrialRecord,
    read_scanpath,
    read_scanpaths,
    write_scanpath,
)
from .errors import InputFileError, PreconditionError, SchemaError
from .ingest import truncate_scanpath
from .maps import load_multi_duration
from .metrics import MetricParams, cross_recurrence, determinism, dtw, eyenalysis, laminarity
from .samplers import SamplerConfig, run_sampler

log = logging.getLogger(__name__)


class PairingMode(str, enum.Enum):
    PER_PARTICIPANT = "per-participant"
    PER_STIMULUS = "per-stimulus"


@dataclass(frozen=True)
class EvalPlan:
    """How to pair and score.

    n_fixations caps synthetic paths (None leaves them as generated);
    filter_organic_to_n keeps only the first fixations of each human path.
    """

    generator_mode: PairingMode = PairingMode.PER_PARTICIPANT
    n_fixations: Optional[int] = None
    filter_organic_to_n: Optional[int] = None
    metric_params: MetricParams = MetricParams()
    ddof: int = 0

    def __post_init__(self):
        object.__setattr__(self, "generator_mode", PairingMode(self.generator_mode))
        if self.n_fixations is not None and self.n_fixations < 1:
            raise PreconditionError("n_fixations must be >= 1")
        if self.filter_organic_to_n is not None and self.filter_organic_to_n < 1:
            raise PreconditionError("filter_organic_to_n must be >= 1")
        if self.ddof not in (0, 1):
            raise PreconditionError("ddof must be 0 (population) or 1 (sample)")


def _score(task):
    human, synthetic, rho, l_min = task
    params = MetricParams(rho, l_min)
    values = {"dtw": dtw(human, synthetic), "eyenalysis": eyenalysis(human, synthetic)}
    if min(len(human), len(synthetic)) >= l_min:
        rec = cross_recurrence(human, synthetic, params)
        values["determinism"] = determinism(rec, l_min)
        values["laminarity"] = laminarity(rec, l_min)
    else:
        values["determinism"] = values["laminarity"] = None
    return values


def _group(rows: Sequence[PairResult], conditions, ddof: int) -> dict:
    by_cell = defaultdict(list)
    for r in rows:
        by_cell[r.condition].append(r)
    grouped = {}
    for cond in conditions:
        cell_rows = by_cell.get(cond, [])
        grouped[cond] = {
            name: CellStat.from_values(
                [getattr(r, name) for r in cell_rows if getattr(r, name) is not None], ddof)
            for name in METRIC_NAMES
        }
    return grouped


def _ordered_conditions(conditions) -> list:
    present = set(conditions)
    return [c for c in CONDITION_ORDER if c in present]


def evaluate(trials: Sequence[TrialRecord], synthetic: Mapping[str, Sequence[Scanpath]],
             plan: EvalPlan = EvalPlan(), generator: str = "", jobs: int = 1) -> MetricReport:
    """Score every human/synthetic pair and aggregate per condition cell."""
    by_stimulus = defaultdict(list)
    for trial in trials:
        by_stimulus[trial.stimulus_id].append(trial)

    tasks, meta = [], []
    params = plan.metric_params
    for stimulus in sorted(by_stimulus):
        stim_trials = sorted(by_stimulus[stimulus], key=lambda t: t.participant_id)
        ids = [t.participant_id for t in stim_trials]
        if len(set(ids)) != len(ids):
            raise PreconditionError(f"duplicate participant in stimulus {stimulus!r}")
        paths = list(synthetic.get(stimulus, ()))
        if not paths:
            raise PreconditionError(f"no synthetic scanpath for stimulus {stimulus!r}")
        if plan.generator_mode is PairingMode.PER_PARTICIPANT:
            if len(paths) < len(stim_trials):
                raise PreconditionError(
                    f"stimulus {stimulus!r}: {len(paths)} synthetic paths for "
                    f"{len(stim_trials)} participants")
        else:
            if len(paths) > 1:
                log.warning("stimulus %s: per-stimulus pairing uses the first of %d paths",
                            stimulus, len(paths))
            paths = paths[:1]
        if plan.n_fixations is not None:
            paths = [truncate_scanpath(p, plan.n_fixations) for p in paths]
        for i, trial in enumerate(stim_trials):
            human = trial.human_scanpath
            if plan.filter_organic_to_n is not None:
                human = truncate_scanpath(human, plan.filter_organic_to_n)
            for s_idx, syn in enumerate(paths):
                matched = (s_idx == 0 if plan.generator_mode is PairingMode.PER_STIMULUS
                           else s_idx == i)
                tasks.append((human.positions(), syn.positions(), params.rho, params.l_min))
                meta.append((trial, s_idx, matched))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(_score, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        scores = [_score(t) for t in tasks]

    rows = tuple(
        PairResult(
            participant_id=trial.participant_id,
            stimulus_id=trial.stimulus_id,
            question_difficulty=trial.question_difficulty,
            node_count=trial.node_count,
            generator=generator,
            synthetic_index=s_idx,
            matched=matched,
            **values,
        )
        for (trial, s_idx, matched), values in zip(meta, scores)
    )
    conditions = _ordered_conditions(t.condition for t in trials)
    return MetricReport(
        per_pair=rows,
        grouped=_group(rows, conditions, plan.ddof),
        matched_grouped=_group([r for r in rows if r.matched], conditions, plan.ddof),
        generator=generator,
    )


TABLE_COLUMNS = ("Question", "Graph", "Pairs", "DTW", "Eyenalysis", "Determinism", "Laminarity")


def format_cell(stat: CellStat) -> str:
    if stat.n == 0 or stat.mean is None:
        return "NA"
    return f"{stat.mean:.4f} ± {stat.std:.4f}"


def table_rows(report: MetricReport, summary: str = "all") -> list[list[str]]:
    if summary not in ("all", "matched"):
        raise ValueError("summary must be 'all' or 'matched'")
    grouped = report.grouped if summary == "all" else report.matched_grouped
    rows = []
    for cond in CONDITION_ORDER:
        if cond not in grouped:
            continue
        stats = grouped[cond]
        difficulty, nodes = cond
        rows.append([difficulty.value, f"{int(nodes)} nodes", str(stats["dtw"].n),
                     *(format_cell(stats[m]) for m in METRIC_NAMES)])
    return rows


def emit_tables(report: MetricReport, fmt: str = "csv", summary: str = "all") -> str:
    """Render grouped statistics as CSV or a Markdown table.

    Rows follow the order hard/6, easy/6, hard/3, easy/3; each metric is
    shown as mean ± std with four decimals.
    """
    rows = table_rows(report, summary)
    fmt = fmt.lower()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt in ("md", "markdown"):
        lines = ["| " + " | ".join(TABLE_COLUMNS) + " |",
                 "|" + "|".join(["---"] * len(TABLE_COLUMNS)) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


PER_PAIR_COLUMNS = ("generator", "stimulus_id", "participant_id", "difficulty", "node_count",
                    "synthetic_index", "matched", *METRIC_NAMES)


def emit_per_pair(reports: Sequence[MetricReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PER_PAIR_COLUMNS)
    for report in reports:
        for r in report.per_pair:
            writer.writerow([
                r.generator, r.stimulus_id, r.participant_id, r.question_difficulty.value,
                int(r.node_count), r.synthetic_index, int(r.matched),
                *("" if getattr(r, m) is None else repr(float(getattr(r, m))) for m in METRIC_NAMES),
            ])
    return buf.getvalue()


# -- manifests -----------------------------------------------------------------

@dataclass
class SyntheticSource:
    """Synthetic scanpaths for one (stimulus, generator).

    Either ``scanpath_paths`` lists existing files, or ``sampler`` describes
    how to generate them (mode, maps, config, count); both may be present,
    in which case the files are where ``sample`` writes its output.
    """

    stimulus_id: str
    generator: str
    scanpath_paths: list[Path] = field(default_factory=list)
    sampler: Optional[dict] = None
    pairing: Optional[PairingMode] = None


@dataclass
class Manifest:
    trials: list[TrialRecord]
    synthetic: list[SyntheticSource]
    root: Path

    @property
    def generators(self) -> list[str]:
        return sorted({s.generator for s in self.synthetic})

    def participants_per_stimulus(self) -> dict[str, int]:
        counts = defaultdict(int)
        for t in self.trials:
            counts[t.stimulus_id] += 1
        return dict(counts)


def load_manifest(path) -> Manifest:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputFileError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"manifest {path} is not valid JSON: {exc}") from exc
    root = path.parent
    try:
        trials = []
        for t in doc.get("trials", []):
            human = read_scanpath(root / t["scanpath_path"])
            trials.append(TrialRecord(str(t["participant_id"]), str(t["stimulus_id"]),
                                      t["difficulty"], t["node_count"], human))
        synthetic = []
        for s in doc.get("synthetic", []):
            if "scanpath_paths" not in s and "sampler" not in s:
                raise SchemaError("synthetic source needs scanpath_paths or sampler")
            synthetic.append(SyntheticSource(
                str(s["stimulus_id"]), str(s["generator"]),
                [root / p for p in s.get("scanpath_paths", [])],
                s.get("sampler"),
                PairingMode(s["pairing"]) if s.get("pairing") else None,
            ))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed manifest {path}: missing or bad field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, (SchemaError, PreconditionError)):
            raise
        raise SchemaError(f"malformed manifest {path}: {exc}") from exc
    return Manifest(trials, synthetic, root)


def derive_seed(seed: int, generator: str, stimulus_id: str, index: int) -> int:
    """Per-path seed from the single run seed; stable across runs and platforms."""
    ss = np.random.SeedSequence(
        int(seed), spawn_key=(zlib.crc32(generator.encode()), zlib.crc32(stimulus_id.encode()), index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate_source(source: SyntheticSource, root: Path, seed: int = 0,
                    count: Optional[int] = None) -> list[Scanpath]:
    """Run the sampler block of a synthetic source."""
    sampler = source.sampler
    if not sampler:
        raise SchemaError(f"source {source.generator}/{source.stimulus_id} has no sampler block")
    try:
        mode = sampler["mode"]
        maps = load_multi_duration([(root / m["path"], m.get("duration_s", 0.0))
                                    for m in sampler.get("maps", [])])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed sampler block: {exc}") from exc
    base = SamplerConfig.from_mapping(sampler.get("config", {}))
    n = count or len(source.scanpath_paths) or int(sampler.get("count", 1))
    return [
        run_sampler(mode, maps, base.with_(seed=derive_seed(seed, source.generator, source.stimulus_id, i)),
                    source.stimulus_id, source.generator)
        for i in range(n)
    ]


def materialize(manifest: Manifest, seed: int = 0, generator: Optional[str] = None) -> list[Path]:
    """Write the scanpath files of every sampler-backed source."""
    written = []
    for source in manifest.synthetic:
        if generator and source.generator != generator:
            continue
        if not source.sampler or not source.scanpath_paths:
            continue
        for p, path in zip(generate_source(source, manifest.root, seed), source.scanpath_paths):
            write_scanpath(p, path)
            written.append(path)
    return written


def synthetic_for(manifest: Manifest, generator: str, seed: int = 0) -> tuple[dict, PairingMode]:
    """Synthetic paths per stimulus for one generator, plus its pairing mode."""
    per_stim = manifest.participants_per_stimulus()
    out: dict[str, list[Scanpath]] = {}
    pairing = None
    for source in manifest.synthetic:
        if source.generator != generator:
            continue
        files = source.scanpath_paths
        if files and all(p.exists() for p in files):
            paths = [q for p in files for q in read_scanpaths(p)]
        elif source.sampler:
            count = None if files else (
                1 if source.pairing is PairingMode.PER_STIMULUS else per_stim.get(source.stimulus_id, 1))
            paths = generate_source(source, manifest.root, seed, count)
        else:
            missing = [str(p) for p in files if not p.exists()]
            raise InputFileError(f"missing synthetic scanpath files: {', '.join(missing)}")
        out.setdefault(source.stimulus_id, []).extend(paths)
        if source.pairing is not None:
            pairing = source.pairing
    if not out:
        raise SchemaError(f"manifest has no synthetic source for generator {generator!r}")
    if pairing is None:
        pairing = (PairingMode.PER_STIMULUS if all(len(v) == 1 for v in out.values())
                   else PairingMode.PER_PARTICIPANT)
    return out, pairing
