"""Reading and writing prediction files.

Input is JSON Lines, one record per line::

    {"id": "17", "ground_truth": "loadAll",
     "predictions": [{"name": "load_all", "prob": 0.4},
                     {"tokens": ["load", "msgpack"], "prob": 0.2}]}

Raw names are subtokenized; token lists are lowercased. Predictions that end
up with the same tokens are merged by summing their probabilities.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Iterator, TextIO

from .lattice import PredictionSet, PredictionSetError
from .patterns import EmptyNameError, PatternSyntaxError, TokenSequence, make_pattern, subtokenize


class PredictionFileError(ValueError):
    """A malformed or invalid record in a prediction file."""

    def __init__(self, message: str, line: int | None = None, record_id: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if record_id is not None:
            where.append(f"record {record_id!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.record_id = record_id


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    predictions: PredictionSet
    ground_truth: str | None = None
    split_digits: bool = True

    @property
    def truth_tokens(self) -> TokenSequence | None:
        if self.ground_truth is None:
            return None
        return subtokenize(self.ground_truth, split_digits=self.split_digits)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"id": self.id}
        if self.ground_truth is not None:
            out["ground_truth"] = self.ground_truth
        out["predictions"] = [
            {"tokens": list(tokens), "prob": prob} for tokens, prob in self.predictions.entries
        ]
        return out


def parse_record(
    obj: Any,
    line: int | None = None,
    logprob: bool = False,
    normalize: bool = False,
    split_digits: bool = True,
) -> PredictionRecord:
    if not isinstance(obj, dict):
        raise PredictionFileError("expected a JSON object", line)
    if "id" not in obj:
        raise PredictionFileError("missing field 'id'", line)
    record_id = str(obj["id"])

    def fail(message: str) -> PredictionFileError:
        return PredictionFileError(message, line, record_id)

    truth = obj.get("ground_truth")
    if truth is not None and not isinstance(truth, str):
        raise fail("'ground_truth' must be a string")
    raw = obj.get("predictions")
    if not isinstance(raw, list) or not raw:
        raise fail("'predictions' must be a non-empty list")

    pairs = []
    for k, pred in enumerate(raw):
        if not isinstance(pred, dict) or "prob" not in pred:
            raise fail(f"prediction {k} needs a 'prob' and a 'name' or 'tokens'")
        prob = pred["prob"]
        if isinstance(prob, bool) or not isinstance(prob, (int, float)):
            raise fail(f"prediction {k}: 'prob' must be a number")
        prob = math.exp(prob) if logprob else float(prob)
        if not 0.0 < prob <= 1.0:
            raise fail(f"prediction {k}: probability {prob!r} is outside (0, 1]")
        try:
            if "tokens" in pred:
                tokens = pred["tokens"]
                if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
                    raise fail(f"prediction {k}: 'tokens' must be a list of strings")
                tokens = make_pattern(t.lower() for t in tokens)
            elif isinstance(pred.get("name"), str):
                tokens = subtokenize(pred["name"], split_digits=split_digits)
            else:
                raise fail(f"prediction {k} needs a 'name' or 'tokens'")
        except (EmptyNameError, PatternSyntaxError) as exc:
            raise fail(f"prediction {k}: {exc}") from None
        pairs.append((tokens, prob))

    try:
        predictions = PredictionSet.from_pairs(pairs, normalize=normalize)
    except PredictionSetError as exc:
        raise fail(str(exc)) from None
    if truth is not None:
        try:
            subtokenize(truth, split_digits=split_digits)
        except EmptyNameError as exc:
            raise fail(str(exc)) from None
    return PredictionRecord(record_id, predictions, truth, split_digits)


def iter_jsonl(source: TextIO, **options: Any) -> Iterator[PredictionRecord]:
    for line_no, line in enumerate(source, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise PredictionFileError(f"malformed JSON ({exc.msg})", line_no) from None
        yield parse_record(obj, line=line_no, **options)


def load_jsonl(path: str | Path, **options: Any) -> list[PredictionRecord]:
    """Load every record of a prediction file.

    Keyword options: ``logprob`` (probabilities are natural-log values),
    ``normalize`` (rescale each record to sum to 1) and ``split_digits``.
    """
    with open(path, encoding="utf-8") as fh:
        return list(iter_jsonl(fh, **options))


def dump_jsonl(records: Iterable[PredictionRecord], out: TextIO) -> None:
    for record in records:
        out.write(json.dumps(record.to_json(), sort_keys=True) + "\n")

