"""Flag method names that disagree with what the model confidently expects.

Each record pairs the beams predicted from a method body with the name a
developer actually wrote. A name is suspicious when it fails a pattern the
model is more than 60% sure about.

    python demos/anomaly_check.py
"""
from __future__ import annotations

from epicure import PredictionSet, build_lattice, detect_anomaly, format_pattern, matches
from epicure import select_patterns, subtokenize

RECORDS = {
    "saveData": [("save_data", 0.5), ("save_all", 0.2), ("save_file", 0.15)],
    "loadData": [("save_data", 0.5), ("save_all", 0.2), ("save_file", 0.15)],
    "getUserEmail": [("get_user_id", 0.4), ("get_user_name", 0.35)],
    "frobnicate": [("compute", 0.3), ("run", 0.2), ("apply", 0.2)],
}

for written, beams in RECORDS.items():
    predictions = PredictionSet.from_pairs([(subtokenize(n), p) for n, p in beams])
    selection = select_patterns(build_lattice(predictions), 0.6)
    name = subtokenize(written)
    if selection.is_trivial:
        print(f"{written:14s} no confident pattern, abstaining")
        continue
    verdict = "SUSPICIOUS" if detect_anomaly(name, selection) else "ok"
    details = ", ".join(
        f"{format_pattern(s)} {'matches' if matches(s, name) else 'violated'}" for s in selection.patterns
    )
    print(f"{written:14s} {verdict:10s} {details}")
