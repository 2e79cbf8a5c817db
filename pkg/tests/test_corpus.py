import json
from pathlib import Path

import pytest

from echotrace import corpus

FIXTURES = Path(__file__).parent / "fixtures"


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write((record if isinstance(record, str) else json.dumps(record)) + "\n")


def test_load_dump_two_valid_submissions(tmp_path):
    path = tmp_path / "subs.jsonl"
    write_jsonl(path, [
        {"id": "s1", "author": "a", "created_utc": 100, "title": "t", "selftext": "b"},
        {"id": "s2", "author": "b", "created_utc": 200, "title": "t2", "selftext": "b2"},
    ])
    result = corpus.load_dump(path)
    assert len(result.submissions) == 2 and result.skipped == 0


def test_load_dump_counts_malformed(tmp_path):
    path = tmp_path / "mixed.jsonl"
    write_jsonl(path, [
        {"id": "c1", "author": "a", "created_utc": 100, "body": "x",
         "parent_id": "s1", "link_id": "s1"},
        "{not json at all",
    ])
    result = corpus.load_dump(path)
    assert len(result.comments) == 1 and result.skipped == 1


def test_load_dump_empty_file_raises(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(corpus.EmptyCorpusError):
        corpus.load_dump(path)


def test_extraction_rules(fixture_triples):
    ids = {t.triple_id for t in fixture_triples}
    assert len(fixture_triples) == 20
    # Delta by a non-author, delta straight on the submission, deleted
    # persuasive comment, and dangling parents must not yield triples.
    assert not ids & {"c90_2", "c90_3", "d91", "d92"}


def test_triples_author_and_depth_invariants(fixture_triples):
    subs = corpus.load_dump(FIXTURES / "submissions.jsonl").submissions
    coms = corpus.load_dump(FIXTURES / "comments.jsonl").comments
    subs_by_id = {s.id: s for s in subs}
    coms_by_id = {c.id: c for c in coms}
    for triple in fixture_triples:
        explanation = coms_by_id[triple.triple_id]
        submission = subs_by_id[explanation.thread_id]
        assert explanation.author == submission.author == triple.op_author
        # Independent parent-chain walk agrees with the stored depth.
        depth = 0
        node = coms_by_id[explanation.parent_id]
        while True:
            depth += 1
            if node.parent_id == submission.id:
                break
            node = coms_by_id[node.parent_id]
        assert depth == triple.pc_depth >= 1


def test_pc_depth_direct_reply_is_one(fixture_triples):
    assert any(t.pc_depth == 1 for t in fixture_triples)
    assert any(t.pc_depth > 1 for t in fixture_triples)


def test_deleted_text_never_in_triples(fixture_triples):
    for triple in fixture_triples:
        for text in (triple.op_text, triple.pc_text, triple.explanation_text):
            assert text not in corpus.DELETED_PLACEHOLDERS


def test_split_partitions_fixture(fixture_triples):
    split = corpus.split_by_time(fixture_triples)
    parts = [split.train, split.validation, split.test]
    assert sum(len(p) for p in parts) == len(fixture_triples)
    assert {t.triple_id for p in parts for t in p} == {t.triple_id for t in fixture_triples}
    assert max(t.created_at for t in split.train) < min(t.created_at for t in split.validation)
    assert max(t.created_at for t in split.validation) < min(t.created_at for t in split.test)


def test_split_single_triple_goes_to_test(fixture_triples):
    split = corpus.split_by_time(fixture_triples[:1])
    assert not split.train and not split.validation and len(split.test) == 1


def _triple_at(ts: int, tid: str):
    return corpus.ConversationTriple(
        triple_id=tid, op_text="t\no", pc_text="p", explanation_text="e",
        op_author="a", pc_depth=1, created_at=ts)


def test_split_two_triples_a_year_apart():
    early = _triple_at(1_400_000_000, "early")
    late = _triple_at(1_400_000_000 + 400 * 86400, "late")
    split = corpus.split_by_time([early, late])
    assert [t.triple_id for t in split.train] == ["early"]
    assert [t.triple_id for t in split.test] == ["late"]


def test_split_boundary_goes_to_later_split(fixture_triples):
    # One fixture stamp sits exactly six months before the latest timestamp.
    split = corpus.split_by_time(fixture_triples)
    boundary = min(t.created_at for t in split.test)
    latest = max(t.created_at for t in fixture_triples)
    from echotrace.corpus import _shift_months
    assert boundary == _shift_months(latest, 6)


def test_split_empty_raises():
    with pytest.raises(ValueError):
        corpus.split_by_time([])


def test_triples_jsonl_roundtrip(tmp_path, fixture_triples):
    path = tmp_path / "triples.jsonl"
    corpus.write_triples_jsonl(fixture_triples, path)
    back = corpus.read_triples_jsonl(path)
    assert [t.triple_id for t in back] == [t.triple_id for t in fixture_triples]
    assert back[0].op_text == fixture_triples[0].op_text
    assert back[0].pc_depth == fixture_triples[0].pc_depth
