"""Render a small lattice as Graphviz DOT.

    python demos/lattice_dot.py | dot -Tpng > lattice.png

Nodes above the threshold are filled; edges point from each pattern to its
nearest more specific patterns.
"""
from __future__ import annotations

from epicure import PredictionSet, build_lattice
from epicure.dot import lattice_to_dot

predictions = PredictionSet.from_pairs([
    (("get", "user", "name"), 0.35),
    (("get", "user", "id"), 0.25),
    (("get", "name"), 0.15),
    (("set", "user", "name"), 0.1),
])
print(lattice_to_dot(build_lattice(predictions), theta=0.55, name="get_user"), end="")
