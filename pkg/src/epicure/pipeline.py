"""Per-record distillation and anomaly checks with isolated failures."""
from __future__ import annotations

import functools
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Iterable, Sequence, TypeVar

from .io import PredictionRecord
from .lattice import (
    DEFAULT_MAX_ROUNDS,
    RoundLimitExceeded,
    Selection,
    build_lattice,
    detect_anomaly,
    select_patterns,
)
from .patterns import format_pattern, matches

T = TypeVar("T")
R = TypeVar("R")

STATUS_OK = "ok"
STATUS_NO_PATTERN = "no pattern"
STATUS_ANOMALOUS = "anomalous"
STATUS_ABSTAINED = "abstained"
STATUS_ERROR = "error"


def run_selection(record: PredictionRecord, theta: float, max_rounds: int = DEFAULT_MAX_ROUNDS) -> Selection:
    return select_patterns(build_lattice(record.predictions, max_rounds=max_rounds), theta)


def distill_record(
    record: PredictionRecord, theta: float, max_rounds: int = DEFAULT_MAX_ROUNDS
) -> dict[str, Any]:
    """Selected patterns of one record as a JSON-ready dict."""
    out: dict[str, Any] = {"id": record.id, "theta": theta}
    try:
        selection = run_selection(record, theta, max_rounds)
    except RoundLimitExceeded as exc:
        return {**out, "status": STATUS_ERROR, "error": str(exc), "patterns": [], "probs": []}
    out["status"] = STATUS_NO_PATTERN if selection.is_empty else STATUS_OK
    out["patterns"] = [format_pattern(p) for p in selection.patterns]
    out["probs"] = list(selection.probs)
    return out


def check_record(
    record: PredictionRecord, theta: float, max_rounds: int = DEFAULT_MAX_ROUNDS
) -> dict[str, Any]:
    """Audit ``record.ground_truth`` against the patterns selected at ``theta``."""
    name = record.truth_tokens
    if name is None:
        raise ValueError(f"record {record.id!r} has no ground_truth to check")
    out: dict[str, Any] = {"id": record.id, "name": record.ground_truth, "tokens": list(name)}
    try:
        selection = run_selection(record, theta, max_rounds)
    except RoundLimitExceeded as exc:
        return {**out, "status": STATUS_ERROR, "error": str(exc), "anomalous": False,
                "violated": [], "matched": []}
    anomalous = detect_anomaly(name, selection)
    if anomalous:
        status = STATUS_ANOMALOUS
    elif selection.is_trivial:
        status = STATUS_ABSTAINED
    else:
        status = STATUS_OK
    out["status"] = status
    out["anomalous"] = anomalous
    out["violated"] = [format_pattern(p) for p in selection.patterns if not matches(p, name)]
    out["matched"] = [format_pattern(p) for p in selection.patterns if matches(p, name)]
    return out


def parallel_map(fn: Callable[[T], R], items: Sequence[T], workers: int | None = 1) -> list[R]:
    """``[fn(x) for x in items]``, optionally across processes; order is kept.

    ``workers=None`` uses every CPU.
    """
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def distill_all(
    records: Iterable[PredictionRecord],
    theta: float,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    workers: int | None = 1,
) -> list[dict[str, Any]]:
    fn = functools.partial(distill_record, theta=theta, max_rounds=max_rounds)
    return parallel_map(fn, list(records), workers)


def check_all(
    records: Iterable[PredictionRecord],
    theta: float,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    workers: int | None = 1,
) -> list[dict[str, Any]]:
    fn = functools.partial(check_record, theta=theta, max_rounds=max_rounds)
    return parallel_map(fn, list(records), workers)
