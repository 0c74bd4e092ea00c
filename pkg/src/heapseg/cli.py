"""Command-line interface.

Subcommands cover the whole workflow: generate, segment, evaluate, stats,
tune, split. Exit codes are a stable scripting contract: 0 success, 1 usage
error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import os
import sys
import traceback
from pathlib import Path

from heapseg.cocoeval import (
    dataset_stats,
    evaluate,
    format_report,
    pr_curve,
    pr_curve_csv,
)
from heapseg.datasetio import (
    canonical_json,
    read_annotations,
    read_predictions,
    split_objects,
    write_predictions,
)
from heapseg.errors import HeapsegError
from heapseg.meshio import ModelDatabase
from heapseg.pipeline import (
    RunConfig,
    generate_dataset,
    load_dataset,
    segment_dataset,
    tune_params,
)
from heapseg.segbase import METHODS, SegParams

logger = logging.getLogger("heapseg")

ENV_CONFIG = "HEAPSEG_CONFIG"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class CliUsageError(Exception):
    """Bad invocation: unknown flags, missing config, invalid combinations."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract reserves 2 for data
    # errors, so route parser failures through exit code 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _JsonFormatter(logging.Formatter):
    def format(self, record):
        doc = {
            "ts": self.formatTime(record, "%Y-%m-%dT%H:%M:%S"),
            "level": record.levelname,
            "name": record.name,
            "msg": record.getMessage(),
        }
        return json.dumps(doc, sort_keys=True)


def _setup_logging(log_json: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if log_json:
        handler.setFormatter(_JsonFormatter())
    else:
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
        )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.INFO)


def _resolve_config_path(explicit: str | None) -> Path:
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(ENV_CONFIG)
    if env:
        return Path(env)
    raise CliUsageError(
        f"no config given: pass --config or set {ENV_CONFIG}"
    )


def _read_json(path: Path):
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise HeapsegError(f"{path}: invalid JSON: {exc}") from None


def _load_params(path: str | None) -> SegParams:
    if path is None:
        return SegParams()
    return SegParams.from_json(_read_json(Path(path)))


def _require(condition: bool, message: str) -> None:
    """Flag-value range check; failures are usage errors, not crashes."""
    if not condition:
        raise CliUsageError(message)


def cmd_generate(args) -> int:
    _require(args.count >= 0, f"--count must be >= 0, got {args.count}")
    _require(args.jobs >= 1, f"--jobs must be >= 1, got {args.jobs}")
    config = RunConfig.from_json(_read_json(_resolve_config_path(args.config)))
    if args.seed is not None:
        # override before serialization so the stored config matches the data
        config = dataclasses.replace(
            config, gen=dataclasses.replace(config.gen, master_seed=args.seed)
        )
    manifest = generate_dataset(config, args.count, args.out, jobs=args.jobs)
    logger.info(
        "wrote %d images (%d instances) to %s",
        manifest.num_images,
        manifest.num_instances,
        args.out,
    )
    return EXIT_OK


def cmd_segment(args) -> int:
    _require(args.jobs >= 1, f"--jobs must be >= 1, got {args.jobs}")
    params = _load_params(args.params)
    preds = segment_dataset(args.dataset, args.method, params, jobs=args.jobs)
    Path(args.out).write_bytes(write_predictions(preds))
    logger.info("wrote %d predictions to %s", len(preds), args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    annotations = read_annotations(Path(args.gt).read_bytes())
    preds = read_predictions(Path(args.pred).read_bytes())
    gts = {
        im.image_id: [rec.mask for rec in im.instances] for im in annotations.images
    }
    report = evaluate(preds, gts)
    if args.out is not None:
        Path(args.out).write_bytes(canonical_json(report.to_json()))
    if args.pr_csv is not None:
        points = pr_curve(preds, gts, iou=0.5)
        Path(args.pr_csv).write_text(pr_curve_csv(points))
    print(format_report(report))
    return EXIT_OK


def _write_histogram_csv(path: Path, header: tuple[str, str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(buf.getvalue())


def cmd_stats(args) -> int:
    _, _, annotations = load_dataset(args.dataset)
    stats = dataset_stats(annotations)
    doc = canonical_json(stats.to_json())
    if args.out is not None:
        Path(args.out).write_bytes(doc)
    if args.csv_dir is not None:
        csv_dir = Path(args.csv_dir)
        csv_dir.mkdir(parents=True, exist_ok=True)
        _write_histogram_csv(
            csv_dir / "count_histogram.csv",
            ("instances", "images"),
            stats.count_histogram,
        )
        edges = stats.area_fraction_edges
        _write_histogram_csv(
            csv_dir / "area_fraction_histogram.csv",
            ("bin_start", "instances"),
            ((repr(edges[i]), count) for i, count in enumerate(stats.area_fraction_counts)),
        )
    print(doc.decode())
    return EXIT_OK


def cmd_tune(args) -> int:
    _require(args.images >= 1, f"--images must be >= 1, got {args.images}")
    grid = _read_json(Path(args.grid))
    best, best_ap = tune_params(args.dataset, args.method, grid, images=args.images)
    doc = canonical_json(best.to_json())
    if args.out is not None:
        Path(args.out).write_bytes(doc)
    logger.info("best AP@0.50 %.4f with %s", best_ap, doc.decode())
    print(doc.decode())
    return EXIT_OK


def cmd_split(args) -> int:
    _require(
        0.0 < args.fraction < 1.0,
        f"--fraction must be in (0, 1), got {args.fraction}",
    )
    db = ModelDatabase.load(args.models)
    train, val = split_objects(db, fraction=args.fraction, seed=args.seed)
    doc = canonical_json({"train": list(train), "val": list(val)})
    if args.out is not None:
        Path(args.out).write_bytes(doc)
    print(doc.decode())
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="heapseg", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--log-json",
        action="store_true",
        help="emit line-delimited JSON logs on stderr",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="generate a synthetic depth dataset")
    p.add_argument("--config", help=f"run config JSON (default: ${ENV_CONFIG})")
    p.add_argument("--count", type=int, required=True, help="number of scenes")
    p.add_argument("--seed", type=int, help="override the config master seed")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("segment", help="run a baseline segmenter over a dataset")
    p.add_argument("dataset", help="generated dataset directory")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--params", help="SegParams JSON (default: built-in defaults)")
    p.add_argument("--out", required=True, help="predictions JSON path")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("evaluate", help="score predictions against annotations")
    p.add_argument("--gt", required=True, help="annotations JSON")
    p.add_argument("--pred", required=True, help="predictions JSON")
    p.add_argument("--out", help="write the report JSON here")
    p.add_argument("--pr-csv", help="write the IoU-0.5 PR curve CSV here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="dataset collection statistics")
    p.add_argument("dataset", help="generated dataset directory")
    p.add_argument("--out", help="write the stats JSON here")
    p.add_argument("--csv-dir", help="write histogram CSVs into this directory")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("tune", help="grid-search segmentation parameters")
    p.add_argument("dataset", help="generated dataset directory")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--grid", required=True, help="grid JSON over SegParams fields")
    p.add_argument("--images", type=int, default=10, help="tuning prefix size")
    p.add_argument("--out", help="write the best SegParams JSON here")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("split", help="split a model directory into train/val rosters")
    p.add_argument("models", help="model directory")
    p.add_argument("--fraction", type=float, default=0.8, help="train fraction")
    p.add_argument("--seed", type=int, default=0, help="shuffle seed")
    p.add_argument("--out", help="write the roster JSON here")
    p.set_defaults(func=cmd_split)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    _setup_logging(args.log_json)
    try:
        return args.func(args)
    except CliUsageError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except (HeapsegError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except Exception:
        logger.error("internal error:\n%s", traceback.format_exc())
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
