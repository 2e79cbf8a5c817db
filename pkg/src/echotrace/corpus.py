"""Dump ingestion, conversation-triple extraction, and time-based splits.

A triple is one (original post, persuasive comment, explanation) unit: the
thread author replies to someone else's comment with a delta token, and
that reply is the explanation for the view change.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import NamedTuple

logger = logging.getLogger(__name__)

DELETED_PLACEHOLDERS = ("[deleted]", "[removed]")
# Surface forms recognized as a delta award (same set the normalizer maps).
DELTA_FORMS = ("Δ", "δ", "&;#8710;", "!delta")


class EmptyCorpusError(ValueError):
    """Raised when a dump yields no parseable records."""


@dataclass(frozen=True)
class Submission:
    id: str
    author: str
    created_at: int
    title: str
    body: str


@dataclass(frozen=True)
class Comment:
    id: str
    author: str
    created_at: int
    body: str
    parent_id: str
    thread_id: str


@dataclass(frozen=True)
class ConversationTriple:
    triple_id: str
    op_text: str
    pc_text: str
    explanation_text: str
    op_author: str
    pc_depth: int
    created_at: int


@dataclass
class SplitCorpus:
    train: list[ConversationTriple] = field(default_factory=list)
    validation: list[ConversationTriple] = field(default_factory=list)
    test: list[ConversationTriple] = field(default_factory=list)


class DumpLoadResult(NamedTuple):
    submissions: list[Submission]
    comments: list[Comment]
    skipped: int


def _strip_kind(raw_id: str) -> str:
    # Dump ids may be prefixed with a kind tag like "t1_" / "t3_".
    if len(raw_id) > 3 and raw_id[0] == "t" and raw_id[2] == "_":
        return raw_id[3:]
    return raw_id


def _parse_line(obj: dict) -> Submission | Comment | None:
    if "title" in obj and "selftext" in obj:
        sub = Submission(
            id=_strip_kind(str(obj["id"])),
            author=str(obj["author"]),
            created_at=int(obj["created_utc"]),
            title=str(obj["title"]),
            body=str(obj["selftext"]),
        )
        if not sub.id or sub.created_at <= 0:
            return None
        return sub
    if "body" in obj and "parent_id" in obj:
        com = Comment(
            id=_strip_kind(str(obj["id"])),
            author=str(obj["author"]),
            created_at=int(obj["created_utc"]),
            body=str(obj["body"]),
            parent_id=_strip_kind(str(obj["parent_id"])),
            thread_id=_strip_kind(str(obj["link_id"])),
        )
        if not com.id or com.created_at <= 0:
            return None
        return com
    return None


def load_dump(path) -> DumpLoadResult:
    """Parse a JSONL dump of submissions and/or comments.

    Malformed lines are skipped and counted; a file with zero parseable
    records raises :class:`EmptyCorpusError`.
    """
    submissions: list[Submission] = []
    comments: list[Comment] = []
    skipped = 0
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            try:
                record = _parse_line(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                record = None
            if record is None:
                skipped += 1
            elif isinstance(record, Submission):
                submissions.append(record)
            else:
                comments.append(record)
    if not submissions and not comments:
        raise EmptyCorpusError(f"no parseable records in {path}")
    if skipped:
        logger.warning("skipped %d malformed lines in %s", skipped, path)
    return DumpLoadResult(submissions, comments, skipped)


def _is_deleted(text: str) -> bool:
    return text in DELETED_PLACEHOLDERS


def _contains_delta(body: str) -> bool:
    return any(form in body for form in DELTA_FORMS)


def _chain_depth(comment: Comment, by_id: dict[str, Comment], sub_id: str) -> int | None:
    """Comments on the path from the root-level comment down to ``comment``."""
    depth = 0
    current: Comment | None = comment
    seen: set[str] = set()
    while current is not None:
        if current.id in seen:
            return None
        seen.add(current.id)
        depth += 1
        if current.parent_id == sub_id:
            return depth
        current = by_id.get(current.parent_id)
    return None


def extract_triples(
    submissions: list[Submission], comments: list[Comment]
) -> list[ConversationTriple]:
    """Emit one triple per author-written delta reply to someone else's comment."""
    subs_by_id = {sub.id: sub for sub in submissions}
    comments_by_id = {com.id: com for com in comments}
    triples: list[ConversationTriple] = []
    dangling = 0
    threads_seen: dict[str, int] = {}

    for com in comments:
        sub = subs_by_id.get(com.thread_id)
        if sub is None:
            continue
        if sub.author in DELETED_PLACEHOLDERS or com.author != sub.author:
            continue
        if not _contains_delta(com.body):
            continue
        parent = comments_by_id.get(com.parent_id)
        if parent is None:
            if com.parent_id != sub.id:
                dangling += 1
            continue
        if parent.author == sub.author:
            continue
        if (
            _is_deleted(com.body)
            or _is_deleted(parent.body)
            or _is_deleted(sub.title)
            or _is_deleted(sub.body)
        ):
            continue
        depth = _chain_depth(parent, comments_by_id, sub.id)
        if depth is None:
            dangling += 1
            continue
        triples.append(
            ConversationTriple(
                triple_id=com.id,
                op_text=sub.title + "\n" + sub.body,
                pc_text=parent.body,
                explanation_text=com.body,
                op_author=sub.author,
                pc_depth=depth,
                created_at=com.created_at,
            )
        )
        threads_seen[sub.id] = threads_seen.get(sub.id, 0) + 1

    if dangling:
        logger.warning("skipped %d delta comments with unresolvable parents", dangling)
    multi = sum(1 for count in threads_seen.values() if count > 1)
    if multi:
        logger.info("%d threads contributed more than one triple (all kept)", multi)
    return triples


def _shift_months(ts: int, months: int) -> int:
    """Timestamp of the same wall-clock moment ``months`` earlier (day clamped)."""
    moment = datetime.fromtimestamp(ts, tz=timezone.utc)
    total = moment.year * 12 + (moment.month - 1) - months
    year, month = divmod(total, 12)
    month += 1
    day = moment.day
    while day > 28:
        try:
            shifted = moment.replace(year=year, month=month, day=day)
            break
        except ValueError:
            day -= 1
    else:
        shifted = moment.replace(year=year, month=month, day=day)
    return int(shifted.timestamp())


def split_by_time(
    triples: list[ConversationTriple],
    test_window: int = 6,
    validation_window: int = 6,
) -> SplitCorpus:
    """Chronological split: the final months are test, the preceding ones
    validation, everything earlier training. Boundary timestamps land in the
    later split."""
    if not triples:
        raise ValueError("cannot split an empty triple list")
    latest = max(t.created_at for t in triples)
    test_start = _shift_months(latest, test_window)
    val_start = _shift_months(latest, test_window + validation_window)

    split = SplitCorpus()
    for triple in sorted(triples, key=lambda t: (t.created_at, t.triple_id)):
        if triple.created_at >= test_start:
            split.test.append(triple)
        elif triple.created_at >= val_start:
            split.validation.append(triple)
        else:
            split.train.append(triple)
    for name, part in (("train", split.train), ("validation", split.validation)):
        if not part:
            logger.warning("time split produced an empty %s set", name)
    return split


def write_triples_jsonl(triples: list[ConversationTriple], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for triple in triples:
            handle.write(json.dumps({
                "triple_id": triple.triple_id,
                "op_text": triple.op_text,
                "pc_text": triple.pc_text,
                "explanation_text": triple.explanation_text,
                "pc_depth": triple.pc_depth,
                "created_utc": triple.created_at,
            }, ensure_ascii=False) + "\n")


def read_triples_jsonl(path) -> list[ConversationTriple]:
    triples = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            triples.append(ConversationTriple(
                triple_id=str(obj["triple_id"]),
                op_text=obj["op_text"],
                pc_text=obj["pc_text"],
                explanation_text=obj["explanation_text"],
                op_author=str(obj.get("op_author", "")),
                pc_depth=int(obj["pc_depth"]),
                created_at=int(obj["created_utc"]),
            ))
    return triples
