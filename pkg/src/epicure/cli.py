"""Command-line interface: ``epicure {distill,check,eval,dot}``.

Exit status is 0 on success, 2 when some records failed (the rest are still
written) and 1 on fatal errors, usage errors included.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
import warnings
from typing import Any, Iterator, Sequence, TextIO

from . import metrics
from .dot import lattice_to_dot
from .io import PredictionFileError, PredictionRecord, load_jsonl
from .lattice import DEFAULT_MAX_ROUNDS, RoundLimitExceeded, build_lattice, warn_if_incompatible_theta
from .pipeline import STATUS_ABSTAINED, STATUS_ANOMALOUS, STATUS_ERROR, check_all, distill_all

log = logging.getLogger("epicure")

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2

DEFAULT_THRESHOLDS = {
    "epicure": [0.51] + [round(0.55 + 0.05 * k, 2) for k in range(9)],
    "baseline": [round(0.05 * k, 2) for k in range(21)],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for partial failures
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_FATAL, f"{self.prog}: error: {message}\n")


def _probability(text: str) -> float:
    value = float(text)
    if not 0.0 < value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in (0, 1]")
    return value


def parse_thresholds(text: str) -> list[float]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("--thresholds needs at least one value")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"invalid threshold list {text!r}") from None
    if any(not 0.0 <= v <= 1.0 for v in values):
        raise UsageError("thresholds must lie in [0, 1]")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epicure", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", "-i", required=True, help="prediction file (JSON Lines)")
        p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
        p.add_argument("--logprob", action="store_true", help="'prob' fields hold natural-log probabilities")
        p.add_argument("--normalize", action="store_true", help="rescale each record's probabilities to sum to 1")
        p.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)
        p.add_argument("--keep-digits", action="store_true", help="do not split letters from digits")
        p.add_argument("--jobs", "-j", type=int, default=1, help="worker processes (0 = all CPUs)")

    p = sub.add_parser("distill", help="suggest naming patterns for each record")
    add_common(p)
    p.add_argument("--theta", type=_probability, default=0.55)

    p = sub.add_parser("check", help="flag ground-truth names that violate the selected patterns")
    add_common(p)
    p.add_argument("--theta", type=_probability, default=0.55)

    p = sub.add_parser("eval", help="false-alarm-rate sweep written as CSV")
    add_common(p)
    p.add_argument("--method", choices=["epicure", "baseline", "both"], default="epicure")
    p.add_argument("--thresholds", default=None, help="comma-separated list, e.g. 0.55,0.7,0.9")

    p = sub.add_parser("dot", help="export one record's lattice as Graphviz DOT")
    add_common(p)
    p.add_argument("--record", required=True, help="record id")
    p.add_argument("--min-prob", type=float, default=0.0, help="hide nodes below this probability")
    p.add_argument("--theta", type=_probability, default=None, help="shade nodes above this probability")
    return parser


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _load(args: argparse.Namespace) -> list[PredictionRecord]:
    return load_jsonl(
        args.input,
        logprob=args.logprob,
        normalize=args.normalize,
        split_digits=not args.keep_digits,
    )


def _workers(args: argparse.Namespace) -> int | None:
    return None if args.jobs == 0 else args.jobs


def _write_jsonl(rows: Sequence[dict[str, Any]], path: str) -> None:
    with _open_out(path) as out:
        for row in rows:
            out.write(json.dumps(row) + "\n")


def _require_truth(records: Sequence[PredictionRecord]) -> None:
    missing = [r.id for r in records if r.ground_truth is None]
    if missing:
        raise UsageError(f"records without ground_truth: {', '.join(missing[:10])}")


def cmd_distill(args: argparse.Namespace) -> int:
    warn_if_incompatible_theta(args.theta)
    rows = distill_all(_load(args), args.theta, args.max_rounds, _workers(args))
    _write_jsonl(rows, args.output)
    failed = [r["id"] for r in rows if r["status"] == STATUS_ERROR]
    if failed:
        log.error("failed records: %s", ", ".join(failed))
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    if args.theta <= 0.5:
        raise UsageError("check needs --theta > 0.5 so that the selected patterns are compatible")
    records = _load(args)
    _require_truth(records)
    rows = check_all(records, args.theta, args.max_rounds, _workers(args))
    _write_jsonl(rows, args.output)
    counts = {
        "records": len(rows),
        "anomalous": sum(r["status"] == STATUS_ANOMALOUS for r in rows),
        "abstained": sum(r["status"] == STATUS_ABSTAINED for r in rows),
        "failed": [r["id"] for r in rows if r["status"] == STATUS_ERROR],
    }
    counts["ok"] = counts["records"] - counts["anomalous"] - counts["abstained"] - len(counts["failed"])
    print(json.dumps({"summary": counts}), file=sys.stderr)
    return EXIT_PARTIAL if counts["failed"] else EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    methods = ["epicure", "baseline"] if args.method == "both" else [args.method]
    given = parse_thresholds(args.thresholds) if args.thresholds is not None else None
    records = _load(args)
    _require_truth(records)

    corpus, lattices, failed = [], [], []
    for record in records:
        lattice = None
        if "epicure" in methods:
            try:
                lattice = build_lattice(record.predictions, max_rounds=args.max_rounds)
            except RoundLimitExceeded as exc:
                log.error("record %s: %s", record.id, exc)
                failed.append(record.id)
                continue
        corpus.append((record.predictions, record.truth_tokens))
        lattices.append(lattice)
    if not corpus:
        raise UsageError("no usable records")

    with _open_out(args.output) as out:
        label = len(methods) > 1
        header = (("method",) if label else ()) + metrics.CSV_COLUMNS
        out.write(",".join(header) + "\n")
        for method in methods:
            thresholds = given or DEFAULT_THRESHOLDS[method]
            if method == "epicure":
                thresholds = [t for t in thresholds if t > 0.0]
                if not thresholds:
                    raise UsageError("epicure thresholds must be > 0")
                if min(thresholds) <= 0.5:
                    warnings.warn("epicure thresholds <= 0.5 may select incompatible patterns")
            points = metrics.sweep(corpus, method, thresholds, lattices=lattices if method == "epicure" else None)
            metrics.write_rows(points, out, method if label else None)
    if failed:
        log.error("failed records: %s", ", ".join(failed))
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_dot(args: argparse.Namespace) -> int:
    records = {r.id: r for r in _load(args)}
    if args.record not in records:
        raise UsageError(f"unknown record id {args.record!r}")
    lattice = build_lattice(records[args.record].predictions, max_rounds=args.max_rounds)
    with _open_out(args.output) as out:
        out.write(lattice_to_dot(lattice, min_prob=args.min_prob, theta=args.theta, name=args.record))
    return EXIT_OK


COMMANDS = {"distill": cmd_distill, "check": cmd_check, "eval": cmd_eval, "dot": cmd_dot}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (PredictionFileError, UsageError, RoundLimitExceeded, OSError) as exc:
        print(f"epicure: error: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
