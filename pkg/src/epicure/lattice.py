"""Generalisation lattice over a set of concrete predictions.

Starting from the concrete predictions, every round joins all pairs of the
current frontier; the distinct joins form the next frontier, until a single
pattern remains. Each pattern's probability is the total probability of the
concrete predictions it matches.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import _kernel
from .antiunify import join
from .patterns import WILDCARD, Pattern, TokenSequence, literals, make_pattern, matches, subsumes

log = logging.getLogger(__name__)

DEFAULT_MAX_ROUNDS = 64
PROB_SUM_TOLERANCE = 1e-9


class PredictionSetError(ValueError):
    """Raised for an invalid set of predictions or probabilities."""


class RoundLimitExceeded(RuntimeError):
    """Raised when lattice construction does not converge within the round cap."""


@dataclass(frozen=True)
class PredictionSet:
    """Concrete predictions with their model probabilities.

    Use :meth:`from_pairs` to build one from raw (tokens, probability) pairs;
    it merges duplicate sequences and validates the probabilities.
    """

    entries: tuple[tuple[TokenSequence, float], ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise PredictionSetError("a prediction set needs at least one entry")
        seen = set()
        total = 0.0
        for tokens, prob in self.entries:
            if tokens in seen:
                raise PredictionSetError(f"duplicate prediction {tokens!r}")
            seen.add(tokens)
            if not (0.0 < prob <= 1.0):
                raise PredictionSetError(f"probability {prob!r} of {tokens!r} is outside (0, 1]")
            total += prob
        if total > 1.0 + PROB_SUM_TOLERANCE:
            raise PredictionSetError(f"probabilities sum to {total:.12g} > 1")

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[Sequence[str], float]],
        normalize: bool = False,
    ) -> PredictionSet:
        merged: dict[TokenSequence, float] = {}
        for tokens, prob in pairs:
            key = make_pattern(tokens)
            if not 0.0 < prob <= 1.0:
                raise PredictionSetError(f"probability {prob!r} of {key!r} is outside (0, 1]")
            merged[key] = merged.get(key, 0.0) + prob
        if normalize and merged:
            total = math.fsum(merged.values())
            merged = {k: v / total for k, v in merged.items()}
        return cls(tuple(merged.items()))

    @property
    def sequences(self) -> tuple[TokenSequence, ...]:
        return tuple(tokens for tokens, _ in self.entries)

    def total(self) -> float:
        return math.fsum(prob for _, prob in self.entries)

    def top(self) -> tuple[TokenSequence, float]:
        """Highest-probability entry; ties go to the lexicographically smallest."""
        return min(self.entries, key=lambda e: (-e[1], e[0]))

    def __len__(self) -> int:
        return len(self.entries)


def pattern_probability(pattern: Pattern, predictions: PredictionSet) -> float:
    """Total probability of the concrete predictions matched by ``pattern``."""
    return math.fsum(prob for tokens, prob in predictions.entries if matches(pattern, tokens))


@dataclass(frozen=True)
class Lattice:
    nodes: frozenset[Pattern]
    children: Mapping[Pattern, frozenset[Pattern]]
    prob: Mapping[Pattern, float]
    leaves: frozenset[Pattern]
    top: Pattern
    rounds: int
    predictions: PredictionSet = field(repr=False)

    def edges(self) -> list[tuple[Pattern, Pattern]]:
        """(parent, child) pairs in sorted order."""
        return sorted(
            (parent, child) for parent, kids in self.children.items() for child in kids
        )

    def parents(self) -> dict[Pattern, frozenset[Pattern]]:
        up: dict[Pattern, set[Pattern]] = {node: set() for node in self.nodes}
        for parent, child in self.edges():
            up[child].add(parent)
        return {node: frozenset(ps) for node, ps in up.items()}

    def descendants(self, node: Pattern) -> frozenset[Pattern]:
        seen: set[Pattern] = set()
        stack = [node]
        while stack:
            for child in self.children.get(stack.pop(), ()):
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return frozenset(seen)

    def matched_leaves(self, pattern: Pattern) -> frozenset[Pattern]:
        return frozenset(t for t in self.predictions.sequences if matches(pattern, t))


def build_lattice(
    predictions: PredictionSet,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    backend: str = "auto",
) -> Lattice:
    """Construct the lattice of joins over ``predictions``.

    Every round joins all pairs of the current frontier (in sorted order).
    When ``s`` is attached below its join ``m``, the children ``s`` already
    has are removed from ``m``'s children, so edges go to nearest
    descendants. Probabilities are computed against the original
    predictions, never by summing over children.

    ``backend`` is ``"python"``, ``"numba"`` or ``"auto"`` (numba when it is
    installed, falling back to Python for very large lattices). Both produce
    the same lattice.
    """
    if backend not in ("auto", "python", "numba"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not _kernel.AVAILABLE:
        raise RuntimeError("the numba backend needs numba installed")
    if backend != "python" and _kernel.AVAILABLE:
        status, pats, kids, top, rounds = _kernel.build(
            sorted(predictions.sequences), WILDCARD, max_rounds
        )
        if status == _kernel.ROUND_LIMIT:
            raise RoundLimitExceeded(f"lattice did not converge within {max_rounds} rounds")
        if status == _kernel.OK:
            return _finish(predictions, pats, kids, pats[top], rounds)
        if backend == "numba":
            raise RuntimeError("lattice too large for the numba backend")
        log.debug("lattice too large for the compiled backend, using Python")
    return _build_python(predictions, max_rounds)


def _build_python(predictions: PredictionSet, max_rounds: int) -> Lattice:
    leaves = frozenset(predictions.sequences)
    # Patterns are interned to ints; the pair loop runs on ids.
    pats: list[Pattern] = sorted(leaves)
    ids = {p: k for k, p in enumerate(pats)}
    children: list[set[int]] = [set() for _ in pats]
    frontier = list(range(len(pats)))

    rounds = 0
    while len(frontier) > 1:
        if rounds >= max_rounds:
            raise RoundLimitExceeded(
                f"lattice did not converge within {max_rounds} rounds "
                f"({len(frontier)} patterns still in the frontier)"
            )
        rounds += 1
        following: set[int] = set()
        for a, i in enumerate(frontier):
            s_i = pats[i]
            kids_i = children[i]
            for j in frontier[a + 1:]:
                s_m = join(s_i, pats[j])
                m = ids.get(s_m)
                if m is None:
                    m = ids[s_m] = len(pats)
                    pats.append(s_m)
                    children.append(set())
                following.add(m)
                kids_m = children[m]
                if i != m:
                    kids_m.add(i)
                    if kids_i:
                        kids_m.difference_update(kids_i)
                if j != m:
                    kids_m.add(j)
                    kids_j = children[j]
                    if kids_j:
                        kids_m.difference_update(kids_j)
        frontier = sorted(following, key=pats.__getitem__)
        log.debug("round %d: %d patterns", rounds, len(frontier))

    return _finish(predictions, pats, children, pats[frontier[0]], rounds)


def _finish(predictions, pats, children, top, rounds) -> Lattice:
    return Lattice(
        nodes=frozenset(pats),
        children={pats[k]: frozenset(pats[c] for c in kids) for k, kids in enumerate(children)},
        prob=_probabilities(pats, predictions),
        leaves=frozenset(predictions.sequences),
        top=top,
        rounds=rounds,
        predictions=predictions,
    )


def _probabilities(patterns: Iterable[Pattern], predictions: PredictionSet) -> dict[Pattern, float]:
    # A match needs every literal of the pattern in the sequence; the subset
    # test rejects most pairs before the full match.
    entries = [(tokens, frozenset(tokens), prob) for tokens, prob in predictions.entries]
    out = {}
    for pattern in patterns:
        lits = literals(pattern)
        out[pattern] = math.fsum(
            prob for tokens, vocab, prob in entries if lits <= vocab and matches(pattern, tokens)
        )
    return out


@dataclass(frozen=True)
class Selection:
    """Least general lattice patterns whose probability exceeds ``theta``."""

    patterns: tuple[Pattern, ...]
    theta: float
    probs: tuple[float, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not self.patterns

    @property
    def is_trivial(self) -> bool:
        """True when the selection carries no literal (empty or only ``*``)."""
        return not any(literals(p) for p in self.patterns)

    def items(self) -> list[tuple[Pattern, float]]:
        return list(zip(self.patterns, self.probs))


def select_patterns(lattice: Lattice, theta: float) -> Selection:
    """Return every node above ``theta`` with no strictly less general node above it.

    Compatibility of the selected patterns is only guaranteed for
    ``theta > 0.5``; lower values are accepted for inspection.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta!r}")
    candidates = sorted(node for node in lattice.nodes if lattice.prob[node] > theta)
    chosen = [
        s
        for s in candidates
        if not any(other != s and subsumes(s, other) for other in candidates)
    ]
    return Selection(
        patterns=tuple(chosen),
        theta=theta,
        probs=tuple(lattice.prob[s] for s in chosen),
    )


def warn_if_incompatible_theta(theta: float) -> None:
    if theta <= 0.5:
        warnings.warn(
            f"theta={theta} <= 0.5: selected patterns may be mutually incompatible",
            stacklevel=2,
        )


def detect_anomaly(name: Sequence[str], selection: Selection) -> bool:
    """True when ``name`` fails to match at least one selected pattern."""
    return any(not matches(p, name) for p in selection.patterns)
