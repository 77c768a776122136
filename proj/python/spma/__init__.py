"""Python access to the spma alignment engine and grammar learner."""

import json

from . import _spma
from ._spma import DuplicateIdError, ParseError, corpus, corpus_names, normalize_store, run_cli, symbol_cost

__all__ = [
    "DuplicateIdError",
    "ParseError",
    "align",
    "corpus",
    "corpus_names",
    "learn",
    "match",
    "normalize_store",
    "run_cli",
    "symbol_cost",
]


def align(store_text, new_text, beam=30, max_stages=12, top_k=5):
    """Ranked alignments of the New text against the store, as dicts."""
    return json.loads(_spma.align(store_text, new_text, beam, max_stages, top_k))


def match(store_text, driving, target, alternatives=5, gap_penalty=0.0):
    """Best pairwise matches between two whitespace-separated sequences."""
    return json.loads(_spma.match(store_text, driving, target, alternatives, gap_penalty))


def learn(lines, pool=10, passes=2):
    """Candidate grammars for a corpus of lines, best (lowest T) first."""
    return json.loads(_spma.learn(list(lines), pool, passes))
