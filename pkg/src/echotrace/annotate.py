"""Token-level annotation: assembling analyzed documents for featurization.

Two annotation sources are supported. The builtin tagger is a deterministic
lexicon-plus-heuristics part-of-speech tagger with no dependency or entity
information, so the package is self-contained. Exchange mode reads
annotations produced by an external pipeline in the JSONL exchange format
``{"doc_id": str, "tokens": [{"text", "upos", "dep", "ent"}]}``; that is the
path used for parity with industrial taggers.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from importlib import resources

from .corpus import ConversationTriple
from .textprep import normalize_text, porter_stem, quote_flags, token_texts

logger = logging.getLogger(__name__)

# Universal POS inventory in canonical (report-column) order; the scheme in
# use for English has 16 tags.
POS_TAGS = (
    "ADP", "PRON", "X", "DET", "ADJ", "PROPN", "VERB", "PART",
    "CCONJ", "INTJ", "NOUN", "NUM", "ADV", "PUNCT", "SYM", "AUX",
)
POS_INDEX = {tag: i for i, tag in enumerate(POS_TAGS)}

SUBJECT_DEPS = frozenset({"nsubj", "nsubjpass", "csubj", "csubjpass", "agent", "expl"})
OBJECT_DEPS = frozenset({"dobj", "dative", "attr", "oprd"})

ENTITY_TYPES = frozenset({
    "PERSON", "NORP", "FAC", "ORG", "GPE", "LOC", "PRODUCT",
    "EVENT", "WORK_OF_ART", "LAW", "LANGUAGE",
})

DEP_ROLES = ("subject", "object", "other")


def dep_role(raw_dep: str) -> str:
    """Coarse grammatical role of a raw dependency label."""
    if raw_dep in SUBJECT_DEPS:
        return "subject"
    if raw_dep in OBJECT_DEPS:
        return "object"
    return "other"


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    stem: str
    index: int
    in_quotes: bool
    pos: str
    dep_role: str
    is_entity: bool


@dataclass(frozen=True)
class AnnotatedDoc:
    tokens: tuple[Token, ...]

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class AnnotatedTriple:
    triple_id: str
    op: AnnotatedDoc
    pc: AnnotatedDoc
    explanation: AnnotatedDoc
    pc_depth: int


class BuiltinTagger:
    """Lexicon-backed POS tagger; dependency roles are all "other" and no
    entities are emitted."""

    def __init__(self) -> None:
        text = resources.files("echotrace.data").joinpath("pos_lexicon.tsv").read_text("utf-8")
        self.lexicon: dict[str, str] = {}
        for line in text.splitlines():
            if line.strip():
                word, tag = line.split("\t")
                self.lexicon[word] = tag

    def tag(self, surface: str) -> str:
        lower = surface.lower()
        if lower in self.lexicon:
            return self.lexicon[lower]
        if all(not ch.isalnum() for ch in surface):
            return "SYM" if any(ch in "$%+=<>^~|" for ch in surface) else "PUNCT"
        if any(ch.isdigit() for ch in surface) and not any(ch.isalpha() for ch in surface):
            return "NUM"
        if surface[:1].isupper():
            return "PROPN"
        if lower.endswith("ly"):
            return "ADV"
        if lower.endswith(("ing", "ed")):
            return "VERB"
        if lower.endswith(("ous", "ful", "ive", "able", "ible", "al", "ish")):
            return "ADJ"
        return "NOUN"

    def annotate(self, surfaces: list[str]) -> list[tuple[str, str, str]]:
        return [(self.tag(surface), "", "") for surface in surfaces]


def _build_doc(surfaces: list[str], annotations: list[tuple[str, str, str]]) -> AnnotatedDoc:
    flags = quote_flags(surfaces)
    tokens = []
    for i, (surface, (pos, dep, ent)) in enumerate(zip(surfaces, annotations)):
        lower = surface.lower()
        tokens.append(Token(
            surface=surface,
            lower=lower,
            stem=porter_stem(lower),
            index=i,
            in_quotes=flags[i],
            pos=pos if pos in POS_INDEX else "X",
            dep_role=dep_role(dep),
            is_entity=ent in ENTITY_TYPES,
        ))
    return AnnotatedDoc(tokens=tuple(tokens))


def annotate_doc_builtin(text: str, tagger: BuiltinTagger) -> AnnotatedDoc:
    surfaces = token_texts(text)
    return _build_doc(surfaces, tagger.annotate(surfaces))


def doc_id(triple_id: str, side: str) -> str:
    return f"{triple_id}:{side}"


def normalized_docs(triple: ConversationTriple) -> dict[str, str]:
    """Normalized text for each side, keyed by exchange doc id."""
    return {
        doc_id(triple.triple_id, "op"): normalize_text(triple.op_text),
        doc_id(triple.triple_id, "pc"): normalize_text(triple.pc_text),
        doc_id(triple.triple_id, "exp"): normalize_text(triple.explanation_text, is_explanation=True),
    }


def read_exchange_file(path) -> dict[str, list[dict]]:
    """Map doc id to raw token dicts from an annotation exchange file."""
    out: dict[str, list[dict]] = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            out[str(obj["doc_id"])] = list(obj["tokens"])
    return out


def doc_from_exchange(tokens: list[dict]) -> AnnotatedDoc:
    surfaces = [str(tok["text"]) for tok in tokens]
    annotations = [
        (str(tok.get("upos", "X")), str(tok.get("dep", "")), str(tok.get("ent", "")))
        for tok in tokens
    ]
    return _build_doc(surfaces, annotations)


def annotate_triples(
    triples: list[ConversationTriple],
    exchange: dict[str, list[dict]] | None = None,
) -> list[AnnotatedTriple]:
    """Annotate every triple, via the builtin tagger or an exchange file."""
    tagger = BuiltinTagger() if exchange is None else None
    out = []
    missing = 0
    for triple in triples:
        if exchange is None:
            op = annotate_doc_builtin(normalize_text(triple.op_text), tagger)
            pc = annotate_doc_builtin(normalize_text(triple.pc_text), tagger)
            exp = annotate_doc_builtin(
                normalize_text(triple.explanation_text, is_explanation=True), tagger)
        else:
            keys = [doc_id(triple.triple_id, side) for side in ("op", "pc", "exp")]
            if any(key not in exchange for key in keys):
                missing += 1
                continue
            op, pc, exp = (doc_from_exchange(exchange[key]) for key in keys)
        out.append(AnnotatedTriple(
            triple_id=triple.triple_id, op=op, pc=pc, explanation=exp,
            pc_depth=triple.pc_depth,
        ))
    if missing:
        logger.warning("dropped %d triples missing exchange annotations", missing)
    return out
