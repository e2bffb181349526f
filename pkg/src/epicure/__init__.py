"""Distil a sequence model's concrete predictions into wildcard naming patterns."""
from .antiunify import MatchingBlock, join, matching_blocks
from .lattice import (
    Lattice,
    PredictionSet,
    PredictionSetError,
    RoundLimitExceeded,
    Selection,
    build_lattice,
    detect_anomaly,
    pattern_probability,
    select_patterns,
)
from .metrics import SweepPoint, baseline_top1, complete_match, regex_acc, sweep
from .patterns import (
    WILDCARD,
    EmptyNameError,
    PatternSyntaxError,
    format_pattern,
    make_pattern,
    matches,
    parse_pattern,
    subsumes,
    subtokenize,
)

__version__ = "0.1.0"
