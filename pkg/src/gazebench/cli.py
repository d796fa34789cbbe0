"""Command line entry point: ``gazebench <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .core import read_scanpaths, write_scanpath, write_scanpaths_jsonl
from .errors import GazeBenchError, InputFileError, SchemaError
from .harness import (
    EvalPlan,
    PairingMode,
    derive_seed,
    emit_per_pair,
    emit_tables,
    evaluate,
    load_manifest,
    materialize,
    synthetic_for,
)
from .ingest import GazeLogSchema, IDTParams, parse_gaze_log, scanpaths_from_log, truncate_scanpath
from .maps import duration_from_filename, load_map, load_multi_duration, read_map_manifest
from .metrics import DEFAULT_L_MIN, DEFAULT_RHO, MetricParams
from .render import RenderStyle, save_rendering
from .samplers import SAMPLER_MODES, SamplerConfig, run_sampler
from .synthdata import synth_fixtures

log = logging.getLogger("gazebench")

EXIT_CODES = """\
exit codes:
  0  success
  1  unexpected internal error
  2  usage error (unknown flag, missing subcommand)
  3  unreadable or undecodable input file
  4  schema error (missing column, malformed JSON)
  5  value out of range or violated precondition
  6  empty input (no parseable rows, no fixations)
  7  degenerate map (no mass to sample, suppression saturated)
"""

SAMPLER_FLAGS = {
    "n_fixations": int, "mean_fix_dur_ms": float, "gaussian_weight": float, "sigma_loc": float,
    "ior_lambda": float, "ior_beta": float, "ior_sigma": float,
}

CONFIG_ALIASES = {"mean_fix_dur": "mean_fix_dur_ms"}


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; values may be quoted."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFileError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise SchemaError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        key = CONFIG_ALIASES.get(key, key)
        if key not in SAMPLER_FLAGS and key != "seed":
            raise SchemaError(f"{path}:{n}: unknown setting {key!r}")
        out[key] = value.strip("'\"")
    return out


def _jobs(value: str) -> int:
    jobs = int(value)
    if jobs < 1:
        raise argparse.ArgumentTypeError("--jobs must be >= 1")
    return jobs


def _dims(value: str) -> tuple[int, int]:
    try:
        w, h = value.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError("expected WIDTHxHEIGHT, e.g. 1280x1024") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazebench",
        description="Generate synthetic scanpaths from saliency maps and score them against human gaze.",
        epilog=EXIT_CODES + "\nSet GAZEBENCH_LOG=debug|info|warning to change log verbosity.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{ingest,sample,evaluate,render,synth-fixtures}")

    p = sub.add_parser("ingest", help="gaze log -> fixation scanpath JSON")
    p.add_argument("--log", required=True, help="delimited gaze log (comma or tab)")
    dest = p.add_mutually_exclusive_group(required=True)
    dest.add_argument("--out-dir", help="write one <participant>_<stimulus>.json per trial")
    dest.add_argument("--out", help="write all trials to one JSON-lines file")
    for col in ("timestamp", "x", "y", "validity", "participant", "stimulus"):
        p.add_argument(f"--col-{col}", default=col, metavar="NAME", help=f"column holding {col}")
    p.add_argument("--time-unit", choices=("ms", "s"), default="ms")
    p.add_argument("--screen", type=_dims, help="divide x/y by WIDTHxHEIGHT (pixel logs)")
    p.add_argument("--dispersion", type=float, default=IDTParams.dispersion)
    p.add_argument("--min-duration", type=float, default=IDTParams.min_duration_ms, help="ms")
    p.add_argument("--max-gap", type=float, default=IDTParams.max_gap_ms, help="ms")
    p.add_argument("--truncate", type=int, metavar="N", help="keep only the first N fixations")

    p = sub.add_parser("sample", help="saliency maps -> synthetic scanpath JSON")
    p.add_argument("--manifest", help="generate every sampler-backed source of an evaluation manifest")
    p.add_argument("--generator", help="with --manifest: only this generator")
    p.add_argument("--mode", choices=SAMPLER_MODES)
    p.add_argument("--map", action="append", default=[], help="map file; repeat for multi-duration sets")
    p.add_argument("--map-manifest", help="JSON {stimulus_id, maps:[{path, duration_s}]}")
    p.add_argument("--stimulus-id", default="")
    p.add_argument("--count", type=int, default=1, help="number of scanpaths to generate")
    p.add_argument("--out", help="output JSON (JSON lines when --count > 1)")
    p.add_argument("--config", help="key = value sampler settings; flags take precedence")
    p.add_argument("--n-fixations", type=int)
    p.add_argument("--mean-fix-dur", dest="mean_fix_dur_ms", type=float)
    p.add_argument("--gaussian-weight", type=float)
    p.add_argument("--sigma-loc", type=float)
    p.add_argument("--ior-lambda", type=float)
    p.add_argument("--ior-beta", type=float)
    p.add_argument("--ior-sigma", type=float)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("evaluate", help="manifest -> condition-grouped metric tables")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="results table; per_pair.csv goes next to it")
    p.add_argument("--format", choices=("csv", "md"), help="default: from --out suffix")
    p.add_argument("--generator", help="evaluate only this generator")
    p.add_argument("--summary", choices=("all", "matched"), default="all",
                   help="all human x synthetic pairs, or index-matched pairs only")
    p.add_argument("--pairing", choices=("auto", *[m.value for m in PairingMode]), default="auto")
    p.add_argument("--n-fixations", type=int, help="cap synthetic paths at N fixations")
    p.add_argument("--filter-organic-n", type=int, help="keep the first N human fixations")
    p.add_argument("--rho", type=float, default=DEFAULT_RHO, help="recurrence radius (normalized)")
    p.add_argument("--l-min", type=int, default=DEFAULT_L_MIN)
    p.add_argument("--sample-std", action="store_true", help="sample instead of population std")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=_jobs, default=os.cpu_count() or 1)

    p = sub.add_parser("render", help="scanpath JSON -> PNG/SVG overlay")
    p.add_argument("--scanpath", required=True, help="scanpath JSON or JSON-lines file")
    p.add_argument("--stimulus", help="background image; blank white canvas when omitted")
    p.add_argument("--out", required=True, help=".png or .svg; indexed when rendering several paths")
    p.add_argument("--size", type=_dims, default=(800, 600), help="blank canvas WIDTHxHEIGHT")
    p.add_argument("--dot-radius", type=float, default=RenderStyle.dot_radius_px)
    p.add_argument("--line-width", type=int, default=RenderStyle.line_width_px)

    p = sub.add_parser("synth-fixtures", help="write a seeded miniature dataset")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--participants", type=int, default=3)
    p.add_argument("--stimuli-per-cell", type=int, default=2)
    p.add_argument("--n-human", type=int, default=12)
    p.add_argument("--n-synthetic", type=int, default=7)
    return parser


def cmd_ingest(args) -> None:
    schema = GazeLogSchema(
        timestamp=args.col_timestamp, x=args.col_x, y=args.col_y, validity=args.col_validity,
        participant=args.col_participant, stimulus=args.col_stimulus,
        time_scale=1000.0 if args.time_unit == "s" else 1.0, screen_size=args.screen,
    )
    try:
        with open(args.log, encoding="utf-8") as fh:
            parsed = parse_gaze_log(fh, schema)
    except OSError as exc:
        raise InputFileError(f"cannot read {args.log}: {exc}") from exc
    paths = scanpaths_from_log(parsed, IDTParams(args.dispersion, args.min_duration, args.max_gap))
    if args.truncate:
        paths = {k: truncate_scanpath(p, args.truncate) for k, p in paths.items()}
    if args.out_dir:
        for (participant, stimulus), path in paths.items():
            write_scanpath(path, Path(args.out_dir) / f"{participant}_{stimulus}.json")
    else:
        write_scanpaths_jsonl(paths.values(), args.out)
    log.info("ingested %d trials (%d rows skipped)", len(paths), parsed.skipped)


def sampler_config(args) -> tuple[SamplerConfig, int]:
    settings = read_config(args.config) if args.config else {}
    for key in SAMPLER_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return SamplerConfig.from_mapping(settings), int(settings.get("seed", 0) if args.seed is None else args.seed)


def cmd_sample(args) -> None:
    if args.manifest:
        manifest = load_manifest(args.manifest)
        written = materialize(manifest, args.seed or 0, args.generator)
        log.info("wrote %d synthetic scanpaths", len(written))
        return
    if not args.mode or not args.out or not (args.map or args.map_manifest):
        raise argparse.ArgumentError(None, "sample needs --manifest, or --mode, --out and --map/--map-manifest")
    cfg, seed = sampler_config(args)
    stimulus = args.stimulus_id
    if args.map_manifest:
        stimulus_from_manifest, entries = read_map_manifest(args.map_manifest)
        stimulus = stimulus or stimulus_from_manifest
        maps = load_multi_duration(entries)
    elif len(args.map) == 1:
        maps = [load_map(args.map[0], duration_from_filename(args.map[0]))]
    else:
        entries = [(Path(m), duration_from_filename(m)) for m in args.map]
        if any(d is None for _, d in entries):
            raise SchemaError("several maps need <stimulus>_d<seconds> names or --map-manifest")
        maps = load_multi_duration(entries)
    paths = [
        run_sampler(args.mode, maps, cfg.with_(seed=derive_seed(seed, args.mode, stimulus, i)), stimulus)
        for i in range(args.count)
    ]
    if args.count == 1:
        write_scanpath(paths[0], args.out)
    else:
        write_scanpaths_jsonl(paths, args.out)


def _results_path(out: Path, generator: str, several: bool) -> Path:
    return out.with_name(f"{out.stem}_{generator}{out.suffix}") if several else out


def cmd_evaluate(args) -> None:
    manifest = load_manifest(args.manifest)
    generators = [args.generator] if args.generator else manifest.generators
    if not generators:
        raise SchemaError("manifest lists no synthetic sources")
    out = Path(args.out)
    fmt = args.format or ("md" if out.suffix.lower() in (".md", ".markdown") else "csv")
    params = MetricParams(args.rho, args.l_min)
    reports = []
    for generator in generators:
        synthetic, inferred = synthetic_for(manifest, generator, args.seed)
        pairing = inferred if args.pairing == "auto" else PairingMode(args.pairing)
        plan = EvalPlan(pairing, args.n_fixations, args.filter_organic_n, params,
                        1 if args.sample_std else 0)
        report = evaluate(manifest.trials, synthetic, plan, generator, args.jobs)
        reports.append(report)
        target = _results_path(out, generator, len(generators) > 1)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(emit_tables(report, fmt, args.summary), encoding="utf-8")
    (out.parent / "per_pair.csv").write_text(emit_per_pair(reports), encoding="utf-8")


def cmd_render(args) -> None:
    paths = read_scanpaths(args.scanpath)
    style = RenderStyle(args.dot_radius, args.line_width, width=args.size[0], height=args.size[1])
    out = Path(args.out)
    for i, path in enumerate(paths):
        target = out if len(paths) == 1 else out.with_name(f"{out.stem}_{i}{out.suffix}")
        save_rendering(path, target, args.stimulus, style)


def cmd_synth(args) -> None:
    manifest = synth_fixtures(args.out, args.seed, args.participants, args.stimuli_per_cell,
                              args.n_human, args.n_synthetic)
    print(manifest)


COMMANDS = {
    "ingest": cmd_ingest,
    "sample": cmd_sample,
    "evaluate": cmd_evaluate,
    "render": cmd_render,
    "synth-fixtures": cmd_synth,
}


def main(argv=None) -> int:
    level = os.environ.get("GAZEBENCH_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        print("gazebench: error: a subcommand is required", file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](args)
    except argparse.ArgumentError as exc:
        parser.print_usage(sys.stderr)
        print(f"gazebench: error: {exc}", file=sys.stderr)
        return 2
    except GazeBenchError as exc:
        print(f"gazebench: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"gazebench: error: {exc}", file=sys.stderr)
        return InputFileError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
