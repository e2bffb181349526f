from __future__ import annotations

import json
import random

import pytest

from epicure import PredictionSet, subtokenize

# Beams shaped after the load_all_msgpack_l_gz example; at theta=0.2 the
# selection is {load|all|*, load|*|messages|*}.
LOAD_BEAMS = [
    ("load_all_msgpack", 0.12),
    ("load_all_gz", 0.10),
    ("load_messages_bin", 0.12),
    ("load_json_messages", 0.10),
    ("load_msgpack_l_gz", 0.07),
    ("read_all_messages", 0.05),
]

# (truth, beams): at theta=0.55 the lattice selection matches 3 of 4 with one
# false alarm; the top-1 filter at 0.5 matches 2, abstains once, one alarm.
DOMINANCE_CORPUS = [
    ("save_file", [("save_file", 0.7), ("save_files", 0.2)]),
    ("get_user_email", [("get_user_id", 0.4), ("get_user_name", 0.35)]),
    ("load_config", [("load_config", 0.6), ("read_config", 0.2)]),
    ("parse_args", [("build_parser", 0.9)]),
]


def prediction_set(beams) -> PredictionSet:
    return PredictionSet.from_pairs([(subtokenize(n), p) for n, p in beams])


@pytest.fixture
def load_predictions() -> PredictionSet:
    return prediction_set(LOAD_BEAMS)


@pytest.fixture
def abc_predictions() -> PredictionSet:
    return PredictionSet.from_pairs([(("a", "b", "c"), 0.3), (("a", "d", "c"), 0.3), (("a", "b"), 0.2)])


@pytest.fixture
def dominance_corpus():
    return [(prediction_set(beams), subtokenize(truth)) for truth, beams in DOMINANCE_CORPUS]


def records_jsonl(rows) -> str:
    return "".join(json.dumps(r) + "\n" for r in rows)


@pytest.fixture
def dominance_file(tmp_path):
    rows = [
        {"id": f"s{k}", "ground_truth": truth, "predictions": [{"name": n, "prob": p} for n, p in beams]}
        for k, (truth, beams) in enumerate(DOMINANCE_CORPUS)
    ]
    path = tmp_path / "dominance.jsonl"
    path.write_text(records_jsonl(rows), encoding="utf-8")
    return path


@pytest.fixture
def load_file(tmp_path):
    row = {
        "id": "load",
        "ground_truth": "load_all_msgpack_l_gz",
        "predictions": [{"name": n, "prob": p} for n, p in LOAD_BEAMS],
    }
    path = tmp_path / "load.jsonl"
    path.write_text(records_jsonl([row]), encoding="utf-8")
    return path


def random_prediction_set(rng: random.Random, vocab="abcdef", max_beams=20, max_len=5) -> PredictionSet:
    """Random beams with probabilities summing to at most 1."""
    n = rng.randint(1, max_beams)
    seqs = {}
    while len(seqs) < n:
        seqs.setdefault(tuple(rng.choice(vocab) for _ in range(rng.randint(1, max_len))), None)
    weights = [rng.random() + 0.01 for _ in seqs]
    mass = rng.uniform(0.5, 1.0)
    total = sum(weights)
    return PredictionSet(tuple((s, w * mass / total) for s, w in zip(seqs, weights)))


# -- acceptance reporting: one line per @pytest.mark.criterion test ---------

_CRITERIA: list[tuple[str, str, float]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _CRITERIA.append((marker.args[0], status, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, seconds in _CRITERIA:
        terminalreporter.write_line(f"[{status}] {name} ({seconds:.2f}s)")
