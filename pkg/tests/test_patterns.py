import itertools

import pytest
from hypothesis import given, strategies as st

from epicure.patterns import (
    WILDCARD as W,
    EmptyNameError,
    PatternSyntaxError,
    canonicalize,
    format_pattern,
    make_pattern,
    matches,
    parse_pattern,
    subsumes,
    subtokenize,
)
from oracles import all_sequences, canonical_patterns, match_set, naive_matches

TRUTH = ("load", "all", "msgpack", "l", "gz")


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("load_all_msgpack_l_gz", ("load", "all", "msgpack", "l", "gz")),
        ("loadAll", ("load", "all")),
        ("HTTPServer2", ("http", "server", "2")),
        ("getHTTPResponseCode", ("get", "http", "response", "code")),
        ("__init__", ("init",)),
        ("parse_v2_header", ("parse", "v", "2", "header")),
        ("XMLHttpRequest", ("xml", "http", "request")),
        ("snake_and_camelCase", ("snake", "and", "camel", "case")),
        ("ALL_CAPS", ("all", "caps")),
        ("x", ("x",)),
    ],
)
def test_subtokenize(raw, expected):
    assert subtokenize(raw) == expected


def test_subtokenize_keep_digits():
    assert subtokenize("HTTPServer2", split_digits=False) == ("http", "server2")
    assert subtokenize("parse_v2_header", split_digits=False) == ("parse", "v2", "header")


@pytest.mark.parametrize("raw", ["", "___", "--", "  "])
def test_subtokenize_empty(raw):
    with pytest.raises(EmptyNameError):
        subtokenize(raw)


@given(st.text(alphabet="abcXYZ_19", min_size=1, max_size=20))
def test_subtokenize_properties(raw):
    try:
        tokens = subtokenize(raw)
    except EmptyNameError:
        assert not any(c.isalnum() for c in raw)
        return
    assert all(t and t == t.lower() and "_" not in t for t in tokens)
    assert subtokenize(raw) == tokens
    # idempotent on its own underscore-joined output
    assert subtokenize("_".join(tokens)) == tokens


def test_matches_examples():
    assert matches(("load", W, "msgpack", W), TRUTH)
    assert not matches(("load", W, "messages", W), TRUTH)
    assert matches((W,), TRUTH)
    assert matches(("a", "b"), ("a", "b"))
    assert not matches(("a", "b"), ("a", "c"))


@pytest.mark.parametrize(
    "pattern, tokens, expected",
    [
        ((W, "a"), ("a",), True),
        (("a", W), ("a",), True),
        ((W, "a", W, "a", W), ("a",), False),
        ((W, "a", W, "a", W), ("b", "a", "c", "a"), True),
        (("a", W, "a"), ("a",), False),
        (("a", W, "b", "c"), ("a", "b", "c", "b", "c"), True),
        ((W, "b", "c", W, "b"), ("b", "c", "b"), True),
        ((W, "b", "c", W, "b"), ("b", "c"), False),
    ],
)
def test_matches_edge_cases(pattern, tokens, expected):
    assert matches(pattern, tokens) is expected


patterns_st = st.lists(st.sampled_from(["a", "b", "c", W]), min_size=1, max_size=7).map(canonicalize)
sequences_st = st.lists(st.sampled_from(["a", "b", "c"]), max_size=8).map(tuple)


@given(patterns_st, sequences_st)
def test_matches_agrees_with_recursive_definition(pattern, tokens):
    assert matches(pattern, tokens) == naive_matches(pattern, tokens)


@given(st.lists(st.sampled_from(["a", "b", "c", W]), min_size=1, max_size=7), sequences_st)
def test_matches_invariant_under_canonicalization(raw, tokens):
    assert matches(tuple(raw), tokens) == matches(canonicalize(raw), tokens)


@given(sequences_st.filter(bool), sequences_st)
def test_wildcard_free_match_is_equality(pattern, tokens):
    assert matches(pattern, tokens) == (pattern == tokens)


def test_matches_adversarial_input_is_fast():
    tokens = ("a",) * 4000 + ("b",)
    pattern = (W,) + ("a", W) * 200 + ("c",)
    assert not matches(pattern, tokens)


def test_subsumes_examples():
    A, B, C = "a", "b", "c"
    assert subsumes((A, W, C), (A, B, C))
    assert subsumes((A, W), (A, W, B, W))
    assert subsumes((A, B, C), (A, B, C))
    assert not subsumes((A, B, C), (A, W, C))


def test_subsumes_oracle_small():
    # the full exhaustive check lives in the acceptance suite
    pats = canonical_patterns("ab", 3)
    seqs = list(all_sequences("ab", 5))
    lang = {p: match_set(p, seqs) for p in pats}
    for g, s in itertools.product(pats, repeat=2):
        assert subsumes(g, s) == (lang[s] <= lang[g]), (g, s)


@given(patterns_st, patterns_st, patterns_st)
def test_subsumes_reflexive_and_transitive(a, b, c):
    assert subsumes(a, a)
    if subsumes(a, b) and subsumes(b, c):
        assert subsumes(a, c)


@given(patterns_st, patterns_st)
def test_subsumes_antisymmetric_on_canonical_patterns(a, b):
    if subsumes(a, b) and subsumes(b, a):
        assert a == b


def test_text_round_trip():
    p = parse_pattern("load|*|messages|*")
    assert p == ("load", W, "messages", W)
    assert format_pattern(p) == "load|*|messages|*"
    assert parse_pattern("a|*|*|b") == ("a", W, "b")


@pytest.mark.parametrize("text", ["", "a||b", "Load|*", "a_b|*", "a b|c"])
def test_parse_pattern_rejects(text):
    with pytest.raises(PatternSyntaxError):
        parse_pattern(text)


def test_make_pattern_rejects_reserved_characters():
    with pytest.raises(PatternSyntaxError):
        make_pattern(["a*"])
    with pytest.raises(PatternSyntaxError):
        make_pattern([])
