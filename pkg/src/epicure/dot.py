"""Graphviz DOT rendering of a lattice."""
from __future__ import annotations

from .lattice import Lattice
from .patterns import format_pattern

SHADE = "lightblue"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def lattice_to_dot(
    lattice: Lattice,
    min_prob: float = 0.0,
    theta: float | None = None,
    name: str = "lattice",
) -> str:
    """Render ``lattice`` with edges from the more general pattern to the less.

    Nodes with probability below ``min_prob`` are left out, together with
    their edges; descendants of a hidden node are never more probable, so no
    shown node loses its path to the top. Nodes whose probability exceeds ``theta`` are filled.
    """
    shown = sorted(p for p in lattice.nodes if lattice.prob[p] >= min_prob)
    ids = {p: f"n{k}" for k, p in enumerate(shown)}
    lines = [f"digraph {_quote(name)} {{", "  node [shape=box];"]
    for pattern in shown:
        prob = lattice.prob[pattern]
        attrs = [f"label={_quote(f'{format_pattern(pattern)} ({100 * prob:.1f}%)')}"]
        if theta is not None and prob > theta:
            attrs.append(f'style=filled, fillcolor="{SHADE}"')
        lines.append(f"  {ids[pattern]} [{', '.join(attrs)}];")
    for parent, child in lattice.edges():
        if parent in ids and child in ids:
            lines.append(f"  {ids[parent]} -> {ids[child]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
