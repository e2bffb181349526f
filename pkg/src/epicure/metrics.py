"""Scoring pattern suggestions against ground-truth names.

``regex_acc`` rewards the fraction of ground-truth subtokens a matching
pattern set recalls; ``complete_match`` is 1 when a non-trivial pattern set
matches entirely. ``sweep`` turns either method into false-alarm-rate curves
over a list of thresholds.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .lattice import DEFAULT_MAX_ROUNDS, Lattice, PredictionSet, build_lattice, select_patterns
from .patterns import WILDCARD, Pattern, TokenSequence, matches

TRIVIAL: tuple[Pattern, ...] = ((WILDCARD,),)
CSV_COLUMNS = ("threshold", "far", "regex_acc", "cm", "abstain")
METHODS = ("epicure", "baseline")


def pattern_subtokens(patterns: Iterable[Sequence[str]]) -> frozenset[str]:
    """Distinct literal subtokens across ``patterns``, wildcards removed."""
    return frozenset(e for p in patterns for e in p if e != WILDCARD)


def all_match(patterns: Iterable[Sequence[str]], truth: Sequence[str]) -> bool:
    return all(matches(p, truth) for p in patterns)


def regex_acc(selection: Iterable[Sequence[str]], truth: Sequence[str]) -> float:
    """Share of distinct ground-truth subtokens recalled; 0 unless every pattern matches."""
    selection = list(selection)
    if not selection or not all_match(selection, truth):
        return 0.0
    return len(pattern_subtokens(selection)) / len(set(truth))


def complete_match(selection: Iterable[Sequence[str]], truth: Sequence[str]) -> int:
    selection = list(selection)
    if not pattern_subtokens(selection):
        return 0
    return int(all_match(selection, truth))


def baseline_top1(predictions: PredictionSet, threshold: float) -> tuple[Pattern, ...]:
    """The top prediction when its probability reaches ``threshold``, else ``*``."""
    tokens, prob = predictions.top()
    if prob < threshold:
        return TRIVIAL
    return (tokens,)


@dataclass(frozen=True)
class SweepPoint:
    threshold: float
    far: float
    regex_acc_mean: float
    cm_rate: float
    abstain_rate: float
    n: int = 0

    @property
    def row(self) -> tuple[float, ...]:
        return (self.threshold, self.far, self.regex_acc_mean, self.cm_rate, self.abstain_rate)


@dataclass(frozen=True)
class Outcome:
    """Per-sample result at one threshold."""

    patterns: tuple[Pattern, ...]
    regex_acc: float
    cm: int
    abstained: bool
    false_alarm: bool


def score(patterns: Sequence[Pattern], truth: TokenSequence) -> Outcome:
    abstained = not pattern_subtokens(patterns)
    hit = all_match(patterns, truth)
    return Outcome(
        patterns=tuple(patterns),
        regex_acc=regex_acc(patterns, truth),
        cm=complete_match(patterns, truth),
        abstained=abstained,
        false_alarm=not abstained and not hit,
    )


def emit(
    method: str,
    predictions: PredictionSet,
    threshold: float,
    lattice: Lattice | None = None,
) -> tuple[Pattern, ...]:
    """Pattern set produced by ``method`` for one sample."""
    if method == "baseline":
        return baseline_top1(predictions, threshold)
    if method == "epicure":
        if lattice is None:
            lattice = build_lattice(predictions)
        return select_patterns(lattice, threshold).patterns
    raise ValueError(f"unknown method {method!r}")


def sweep(
    corpus: Sequence[tuple[PredictionSet, TokenSequence]],
    method: str,
    thresholds: Sequence[float],
    lattices: Sequence[Lattice] | None = None,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> list[SweepPoint]:
    """One :class:`SweepPoint` per threshold.

    FAR, RegexAcc and CM are averaged over all samples, abstentions
    included, so ``far + cm + abstain == 1`` at every threshold.
    """
    if not corpus:
        raise ValueError("sweep needs a non-empty corpus")
    if not thresholds:
        raise ValueError("sweep needs at least one threshold")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "epicure" and lattices is None:
        lattices = [build_lattice(ps, max_rounds=max_rounds) for ps, _ in corpus]

    n = len(corpus)
    points = []
    for threshold in thresholds:
        outcomes = [
            score(emit(method, ps, threshold, lattices[k] if lattices else None), truth)
            for k, (ps, truth) in enumerate(corpus)
        ]
        points.append(
            SweepPoint(
                threshold=threshold,
                far=sum(o.false_alarm for o in outcomes) / n,
                regex_acc_mean=math.fsum(o.regex_acc for o in outcomes) / n,
                cm_rate=sum(o.cm for o in outcomes) / n,
                abstain_rate=sum(o.abstained for o in outcomes) / n,
                n=n,
            )
        )
    return points


def write_csv(points: Iterable[SweepPoint], out: TextIO, method: str | None = None) -> None:
    """Write sweep rows; a leading ``method`` column is added when ``method`` is given."""
    writer = csv.writer(out, lineterminator="\n")
    header = (("method",) if method else ()) + CSV_COLUMNS
    writer.writerow(header)
    write_rows(points, out, method)


def write_rows(points: Iterable[SweepPoint], out: TextIO, method: str | None = None) -> None:
    writer = csv.writer(out, lineterminator="\n")
    for point in points:
        cells = [f"{v:.6f}" for v in point.row]
        writer.writerow(([method] if method else []) + cells)


def to_csv(points: Iterable[SweepPoint], method: str | None = None) -> str:
    buf = io.StringIO()
    write_csv(points, buf, method)
    return buf.getvalue()
