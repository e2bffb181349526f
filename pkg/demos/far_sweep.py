"""Trade false alarms against recall on a synthetic corpus.

Sweeps thresholds for lattice selection and for a top-1 filter, and prints
the CSV the ``epicure eval`` command would write. Plot far against
regex_acc to compare the two curves.

    python demos/far_sweep.py [n_records]
"""
from __future__ import annotations

import sys

from epicure import sweep
from epicure.metrics import to_csv
from epicure.synthetic import records

n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
corpus = [(r.predictions, r.truth_tokens) for r in records(n, beams=40, seed=3)]

epicure = sweep(corpus, "epicure", [0.55, 0.65, 0.75, 0.85, 0.95])
baseline = sweep(corpus, "baseline", [0.1 * k for k in range(11)])
print(to_csv(epicure, method="epicure"), end="")
print(to_csv(baseline, method="baseline").split("\n", 1)[1], end="")
