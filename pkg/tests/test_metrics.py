import random

import pytest
from hypothesis import given, strategies as st

from conftest import random_prediction_set
from epicure.lattice import PredictionSet, build_lattice, select_patterns
from epicure.metrics import (
    TRIVIAL,
    baseline_top1,
    complete_match,
    pattern_subtokens,
    regex_acc,
    score,
    sweep,
    to_csv,
)
from epicure.patterns import WILDCARD as W, canonicalize

TRUTH = ("load", "all", "msgpack", "l", "gz")


def test_regex_acc_examples():
    assert regex_acc([("load", W, "msgpack", W)], TRUTH) == pytest.approx(0.4)
    assert regex_acc([("load", W, "messages", W)], TRUTH) == 0.0
    assert regex_acc([TRUTH], TRUTH) == 1.0
    assert regex_acc([(W,)], TRUTH) == 0.0
    assert regex_acc([], TRUTH) == 0.0


def test_regex_acc_uses_union_of_literals():
    sel = [("load", "all", W), ("load", W, "gz")]
    assert regex_acc(sel, TRUTH) == pytest.approx(3 / 5)
    # distinct subtokens in the denominator
    assert regex_acc([("get", W)], ("get", "x", "get")) == pytest.approx(1 / 2)


@pytest.mark.parametrize(
    "selection, expected",
    [
        ([(W,)], 0),
        ([("load", W)], 1),
        ([("load", W, "messages", W)], 0),
        ([("load", W), ("save", W)], 0),
        ([(W,), ("load", W)], 1),
        ([], 0),
    ],
)
def test_complete_match_truth_table(selection, expected):
    assert complete_match(selection, TRUTH) == expected


def test_pattern_subtokens():
    assert pattern_subtokens([("a", W, "b"), ("b", "c")]) == {"a", "b", "c"}
    assert pattern_subtokens([(W,)]) == frozenset()


def test_baseline_top1():
    ps = PredictionSet.from_pairs([(("a", "b"), 0.6), (("a", "c"), 0.3)])
    assert baseline_top1(ps, 0.5) == (("a", "b"),)
    assert baseline_top1(ps, 0.7) == TRIVIAL
    assert baseline_top1(ps, 0.6) == (("a", "b"),)
    tie = PredictionSet.from_pairs([(("b",), 0.4), (("a",), 0.4)])
    assert baseline_top1(tie, 0.3) == (("a",),)


patterns_st = st.lists(
    st.lists(st.sampled_from(["a", "b", "c", W]), min_size=1, max_size=5).map(canonicalize),
    min_size=1,
    max_size=3,
)
truth_st = st.lists(st.sampled_from(["a", "b", "c"]), min_size=1, max_size=6).map(tuple)


@given(patterns_st, truth_st)
def test_metric_properties(selection, truth):
    acc = regex_acc(selection, truth)
    cm = complete_match(selection, truth)
    assert 0.0 <= acc <= 1.0
    if acc > 0:
        assert cm == 1
    if cm == 1:
        assert pattern_subtokens(selection)
        assert acc > 0


@given(st.integers(0, 10_000), st.floats(0, 1), st.floats(0, 1))
def test_baseline_abstention_is_monotone(seed, t1, t2):
    ps = random_prediction_set(random.Random(seed))
    lo, hi = sorted((t1, t2))
    if baseline_top1(ps, lo) == TRIVIAL:
        assert baseline_top1(ps, hi) == TRIVIAL
    out = baseline_top1(ps, lo)
    assert out == TRIVIAL or (len(out) == 1 and W not in out[0])


def test_sweep_dominance_fixture(dominance_corpus):
    (epi,) = sweep(dominance_corpus, "epicure", [0.55])
    (base,) = sweep(dominance_corpus, "baseline", [0.5])
    assert (epi.far, epi.cm_rate, epi.abstain_rate) == (0.25, 0.75, 0.0)
    assert epi.regex_acc_mean == pytest.approx((1 + 2 / 3 + 1) / 4)
    assert (base.far, base.cm_rate, base.abstain_rate) == (0.25, 0.5, 0.25)
    assert base.regex_acc_mean == pytest.approx(0.5)


def test_sweep_all_matching_has_no_false_alarms():
    ps = PredictionSet.from_pairs([(("get", "x"), 0.6), (("get", "y"), 0.3)])
    corpus = [(ps, ("get", "x"))] * 3
    for point in sweep(corpus, "epicure", [0.55, 0.7, 0.9]):
        assert point.far == 0.0


def test_sweep_single_false_alarm():
    ps = PredictionSet.from_pairs([(("build", "parser"), 0.9)])
    (point,) = sweep([(ps, ("parse", "args"))], "epicure", [0.6])
    assert (point.far, point.cm_rate, point.regex_acc_mean) == (1.0, 0.0, 0.0)


@pytest.mark.parametrize("method", ["epicure", "baseline"])
@pytest.mark.parametrize("seed", range(5))
def test_sweep_accounting(method, seed):
    rng = random.Random(seed)
    corpus = []
    for _ in range(20):
        ps = random_prediction_set(rng, vocab="abc", max_beams=8, max_len=4)
        corpus.append((ps, rng.choice(ps.sequences) if rng.random() < 0.6 else ("c", "a")))
    for point in sweep(corpus, method, [0.55, 0.7, 0.9]):
        assert point.far + point.cm_rate + point.abstain_rate == pytest.approx(1.0)


def test_sweep_reuses_lattices(dominance_corpus):
    lattices = [build_lattice(ps) for ps, _ in dominance_corpus]
    a = sweep(dominance_corpus, "epicure", [0.55, 0.8], lattices=lattices)
    b = sweep(dominance_corpus, "epicure", [0.55, 0.8])
    assert a == b


def test_sweep_argument_errors(dominance_corpus):
    with pytest.raises(ValueError):
        sweep([], "epicure", [0.6])
    with pytest.raises(ValueError):
        sweep(dominance_corpus, "epicure", [])
    with pytest.raises(ValueError):
        sweep(dominance_corpus, "oracle", [0.6])


def test_score_outcome(dominance_corpus):
    ps, truth = dominance_corpus[3]
    outcome = score(select_patterns(build_lattice(ps), 0.55).patterns, truth)
    assert outcome.false_alarm and not outcome.abstained
    assert score((), truth).abstained


def test_csv_format(dominance_corpus):
    text = to_csv(sweep(dominance_corpus, "baseline", [0.0, 1.0]))
    lines = text.splitlines()
    assert lines[0] == "threshold,far,regex_acc,cm,abstain"
    assert lines[1] == "0.000000,0.500000,0.500000,0.500000,0.000000"
    assert lines[2] == "1.000000,0.000000,0.000000,0.000000,1.000000"
    labelled = to_csv(sweep(dominance_corpus, "epicure", [0.55]), method="epicure")
    assert labelled.splitlines()[1].startswith("epicure,0.550000,0.250000,0.666667,0.750000,")
