"""Synthetic beam-search outputs for demos and benchmarks.

Each sample perturbs a hidden name with subtoken substitutions, insertions
and deletions, ranks the variants, and assigns Zipf-like probabilities that
sum to ``mass`` (< 1, as with a truncated beam).
"""
from __future__ import annotations

import random

from .io import PredictionRecord
from .lattice import PredictionSet

VOCAB = (
    "get set load save read write parse build make init update delete add remove "
    "all file files data msgpack json gz path name user config from to by id list "
    "dict item items value values key keys node tree cache http request response"
).split()


def perturb(tokens: list[str], rng: random.Random, edits: int) -> tuple[str, ...]:
    out = list(tokens)
    for _ in range(edits):
        op = rng.random()
        if op < 0.4 and out:
            out[rng.randrange(len(out))] = rng.choice(VOCAB)
        elif op < 0.7 or len(out) <= 1:
            out.insert(rng.randrange(len(out) + 1), rng.choice(VOCAB))
        else:
            del out[rng.randrange(len(out))]
    return tuple(out)


def sample(
    rng: random.Random,
    beams: int = 100,
    mass: float = 0.95,
    exponent: float = 1.1,
) -> tuple[PredictionSet, tuple[str, ...]]:
    """One ``(predictions, hidden_name)`` pair."""
    truth = [rng.choice(VOCAB) for _ in range(rng.randint(2, 4))]
    variants: dict[tuple[str, ...], None] = {}
    # the hidden name itself is usually, not always, among the beams
    if rng.random() < 0.7:
        variants[tuple(truth)] = None
    while len(variants) < beams:
        variants.setdefault(perturb(truth, rng, rng.choice((1, 1, 2, 2, 3))), None)
    order = list(variants)
    head = order[: max(1, beams // 5)]
    rng.shuffle(head)
    order[: len(head)] = head
    weights = [1.0 / (k + 1) ** exponent for k in range(len(order))]
    scale = mass / sum(weights)
    return PredictionSet(tuple((t, w * scale) for t, w in zip(order, weights))), tuple(truth)


def records(n: int, beams: int = 100, seed: int = 0) -> list[PredictionRecord]:
    rng = random.Random(seed)
    out = []
    for k in range(n):
        predictions, truth = sample(rng, beams=beams)
        out.append(PredictionRecord(str(k), predictions, "_".join(truth)))
    return out
