"""Distil six beam-search guesses for one method name into naming patterns.

The model is unsure whether the method loads "all" of something or loads
"messages", and which format is involved. No single beam is likely, but
the lattice finds the subtokens the beams agree on.

    python demos/distill_beams.py
"""
from __future__ import annotations

from epicure import PredictionSet, build_lattice, format_pattern, select_patterns, subtokenize

BEAMS = [
    ("load_all_msgpack", 0.12),
    ("load_all_gz", 0.10),
    ("load_messages_bin", 0.12),
    ("load_json_messages", 0.10),
    ("load_msgpack_l_gz", 0.07),
    ("read_all_messages", 0.05),
]

predictions = PredictionSet.from_pairs([(subtokenize(name), p) for name, p in BEAMS])
lattice = build_lattice(predictions)
top, p = predictions.top()
print(f"{len(lattice.nodes)} patterns over {len(lattice.leaves)} beams, built in {lattice.rounds} rounds")
print(f"best single beam: {format_pattern(top)} ({p:.0%})")

for theta in (0.2, 0.5, 0.6):
    selection = select_patterns(lattice, theta)
    shown = ", ".join(f"{format_pattern(s)} ({q:.0%})" for s, q in selection.items()) or "nothing"
    print(f"theta={theta}: {shown}")

# Below 0.5 the two patterns describe different beams: a name may satisfy
# load|all|* without satisfying load|*|messages|*.  Above 0.5 they always
# share a beam, which is what makes them safe to audit with.
