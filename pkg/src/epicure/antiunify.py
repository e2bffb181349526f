"""Join of two patterns: their generalisation by wildcard gaps.

The two patterns are aligned with Ratcliff/Obershelp matching (the
``difflib.SequenceMatcher`` algorithm, auto-junk disabled). Matching blocks
are kept verbatim; every inserted, deleted or replaced stretch becomes a
wildcard, and adjacent wildcards are collapsed.
"""
from __future__ import annotations

from difflib import SequenceMatcher
from functools import lru_cache
from typing import NamedTuple, Sequence

from .patterns import WILDCARD, Pattern, canonicalize


class MatchingBlock(NamedTuple):
    start_a: int
    start_b: int
    length: int


def matching_blocks(a: Sequence[str], b: Sequence[str]) -> list[MatchingBlock]:
    """Non-overlapping common blocks of ``a`` and ``b`` in increasing order.

    The longest common contiguous block is taken first (ties go to the
    smallest start in ``a``, then in ``b``) and the search recurses on what
    lies to its left and right. Wildcards compare equal only to wildcards.
    """
    matcher = SequenceMatcher(None, a, b, autojunk=False)
    return [MatchingBlock(*blk) for blk in matcher.get_matching_blocks() if blk.size]


def join(a: Pattern, b: Pattern) -> Pattern:
    """Generalise ``a`` and ``b`` into one pattern subsuming both.

    The operands are ordered first, so ``join(a, b) == join(b, a)``.

    >>> join(("a", "b", "c", "d"), ("a", "e", "b"))
    ('a', '*', 'b', '*')
    """
    if a == b:
        return a
    if b < a:
        a, b = b, a
    # The alignment only sees element equality, so the result is computed on
    # first-occurrence labels (wildcard = 0) and cached across calls.
    labels = {WILDCARD: 0}
    shape_a = tuple([labels.setdefault(x, len(labels)) for x in a])
    shape_b = tuple([labels.setdefault(x, len(labels)) for x in b])
    names = list(labels)
    return tuple([names[k] for k in _join_shape(shape_a, shape_b)])


@lru_cache(maxsize=1 << 17)
def _join_shape(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    i = j = 0
    for start_a, start_b, length in matching_blocks(a, b):
        if start_a > i or start_b > j:
            out.append(0)
        out.extend(a[start_a:start_a + length])
        i, j = start_a + length, start_b + length
    if i < len(a) or j < len(b):
        out.append(0)
    return canonicalize(out, wildcard=0)
