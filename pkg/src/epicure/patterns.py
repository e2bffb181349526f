"""Subtokens, wildcard patterns, matching and subsumption.

A pattern is a tuple of elements. Each element is either a literal subtoken
(a non-empty lowercase string) or the :data:`WILDCARD` marker, which matches
zero or more arbitrary subtokens. A token sequence is a pattern with no
wildcards, so the two share one representation::

    >>> matches(("load", WILDCARD, "msgpack", WILDCARD),
    ...         ("load", "all", "msgpack", "l", "gz"))
    True

The textual form joins elements with ``|`` and writes the wildcard as ``*``,
e.g. ``load|*|messages|*``.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence, Tuple

WILDCARD = "*"
SEPARATOR = "|"

Pattern = Tuple[str, ...]
TokenSequence = Tuple[str, ...]

# An uppercase run followed by Capital+lower keeps its last capital for the
# next word ("HTTPServer" -> HTTP, Server).
_WORD_SPLIT_DIGITS = re.compile(
    r"[A-Z]+(?=[A-Z][^\W\dA-Z_])|[A-Z]?[^\W\dA-Z_]+|[A-Z]+|\d+"
)
_WORD_KEEP_DIGITS = re.compile(
    r"[A-Z]+(?=[A-Z][^\WA-Z_])|[A-Z]?[^\WA-Z_]+|[A-Z\d]+"
)
_SEPARATORS = re.compile(r"[\W_]+")


class EmptyNameError(ValueError):
    """Raised when an identifier contains no subtokens."""


class PatternSyntaxError(ValueError):
    """Raised for malformed pattern text or invalid pattern elements."""


def subtokenize(raw_name: str, split_digits: bool = True) -> TokenSequence:
    """Split an identifier into lowercase subtokens.

    Splits on underscores (and any other non-alphanumeric character), on
    lower-to-upper case transitions, inside acronym runs before a capitalised
    word, and, unless ``split_digits`` is false, on letter/digit boundaries.

    >>> subtokenize("HTTPServer2")
    ('http', 'server', '2')
    """
    word = _WORD_SPLIT_DIGITS if split_digits else _WORD_KEEP_DIGITS
    tokens = []
    for chunk in _SEPARATORS.split(raw_name):
        tokens.extend(piece.lower() for piece in word.findall(chunk))
    if not tokens:
        raise EmptyNameError(f"no subtokens in identifier {raw_name!r}")
    return tuple(tokens)


def validate_subtoken(token: str) -> str:
    if not token:
        raise PatternSyntaxError("empty subtoken")
    if token != token.lower() or "_" in token:
        raise PatternSyntaxError(f"subtoken {token!r} must be lowercase without underscores")
    if WILDCARD in token or SEPARATOR in token or any(c.isspace() for c in token):
        raise PatternSyntaxError(f"subtoken {token!r} contains a reserved character")
    return token


def canonicalize(elements: Iterable, wildcard=WILDCARD) -> tuple:
    """Collapse runs of adjacent wildcards into one."""
    out: list = []
    for element in elements:
        if element == wildcard and out and out[-1] == wildcard:
            continue
        out.append(element)
    return tuple(out)


def make_pattern(elements: Iterable[str]) -> Pattern:
    """Validate ``elements`` and return them as a canonical pattern."""
    elements = tuple(elements)
    if not elements:
        raise PatternSyntaxError("a pattern needs at least one element")
    for element in elements:
        if element != WILDCARD:
            validate_subtoken(element)
    return canonicalize(elements)


def parse_pattern(text: str) -> Pattern:
    """Parse the ``|``-delimited textual form, e.g. ``"load|*|gz"``."""
    return make_pattern(text.split(SEPARATOR))


def format_pattern(pattern: Sequence[str]) -> str:
    return SEPARATOR.join(pattern)


def is_concrete(pattern: Sequence[str]) -> bool:
    return WILDCARD not in pattern


def literals(pattern: Sequence[str]) -> frozenset[str]:
    """Distinct literal subtokens of ``pattern``."""
    return frozenset(e for e in pattern if e != WILDCARD)


def matches(pattern: Sequence[str], tokens: Sequence[str]) -> bool:
    """Whether ``tokens`` belongs to the language of ``pattern``.

    Greedy segment matching: the pattern is cut at its wildcards into literal
    segments; the first and last segments are anchored and the middle ones
    are placed at their leftmost occurrence. Leftmost placement never loses a
    match, so no backtracking is needed and the worst case is
    O(len(pattern) * len(tokens)).
    """
    segments: list[list[str]] = [[]]
    for element in pattern:
        if element == WILDCARD:
            segments.append([])
        else:
            segments[-1].append(element)

    n = len(tokens)
    if len(segments) == 1:
        return len(pattern) == n and all(p == t for p, t in zip(pattern, tokens))

    head, *middle, tail = segments
    if len(head) + len(tail) > n:
        return False
    if any(p != t for p, t in zip(head, tokens)):
        return False
    end = n - len(tail)
    if any(p != t for p, t in zip(tail, tokens[end:])):
        return False

    pos = len(head)
    for segment in middle:
        if not segment:
            continue
        width = len(segment)
        last_start = end - width
        while pos <= last_start:
            if tokens[pos] == segment[0] and all(
                tokens[pos + k] == segment[k] for k in range(1, width)
            ):
                break
            pos += 1
        else:
            return False
        pos += width
    return True


def subsumes(general: Sequence[str], specific: Sequence[str]) -> bool:
    """Whether every sequence matched by ``specific`` is matched by ``general``.

    Decided structurally: a literal of ``general`` must consume an equal
    literal of ``specific`` and a wildcard of ``general`` may consume any run
    of elements of ``specific``, wildcards included.
    """
    m = len(specific)
    # reach[j]: general[:i] can produce specific[:j]
    reach = [True] + [False] * m
    for element in general:
        if element == WILDCARD:
            for j in range(1, m + 1):
                reach[j] = reach[j] or reach[j - 1]
        else:
            for j in range(m, 0, -1):
                reach[j] = reach[j - 1] and specific[j - 1] == element
            reach[0] = False
    return reach[m]


def strictly_subsumes(general: Sequence[str], specific: Sequence[str]) -> bool:
    return tuple(general) != tuple(specific) and subsumes(general, specific)
