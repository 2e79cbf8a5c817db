"""Shared fixtures: the bundled synthetic corpus in both annotation modes."""

from __future__ import annotations

from pathlib import Path

import pytest

from echotrace import annotate, corpus, features

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_triples():
    subs = corpus.load_dump(FIXTURES / "submissions.jsonl")
    coms = corpus.load_dump(FIXTURES / "comments.jsonl")
    return corpus.extract_triples(subs.submissions, coms.comments)


@pytest.fixture(scope="session")
def fixture_annotated(fixture_triples):
    exchange = annotate.read_exchange_file(FIXTURES / "annotations.jsonl")
    return annotate.annotate_triples(fixture_triples, exchange)


@pytest.fixture(scope="session")
def fixture_annotated_builtin(fixture_triples):
    return annotate.annotate_triples(fixture_triples)


@pytest.fixture(scope="session")
def fixture_stats(fixture_annotated):
    return features.build_corpus_stats(fixture_annotated, features.load_taxonomy())


@pytest.fixture(scope="session")
def fixture_rows(fixture_annotated, fixture_stats):
    return features.featurize_split(fixture_annotated, fixture_stats)
