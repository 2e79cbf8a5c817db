"""Corpus statistics and the 66-dimensional per-stem feature vectors.

For every unique stem in a triple's explanandum (original post plus
persuasive comment) we compute: five non-contextual features, 25 usage
features per side, five relation features linking the two sides, and six
document-pair features. The label marks whether the stem reappears in the
explanation.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import TYPE_CHECKING

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .annotate import DEP_ROLES, POS_INDEX, POS_TAGS, dep_role
from .textprep import porter_stem

if TYPE_CHECKING:
    from .annotate import AnnotatedDoc, AnnotatedTriple

__all__ = [
    "FEATURE_NAMES", "FEATURE_GROUPS", "N_FEATURES", "CorpusStats", "CandidateRow",
    "MinMaxScaler", "dep_role", "js_divergence", "wordnet_depths", "load_taxonomy",
    "build_corpus_stats", "side_usage", "relation_features", "pair_features",
    "featurize_triple", "featurize_split", "rows_to_xy", "write_rows_csv",
    "read_rows_csv", "write_stats_json", "read_stats_json",
]

logger = logging.getLogger(__name__)

N_POS = len(POS_TAGS)

FEATURE_NAMES: tuple[str, ...] = (
    ("idf", "stem_length", "wn_depth_min", "wn_depth_max", "transfer_prob")
    + tuple(f"op_pos_{tag}" for tag in POS_TAGS)
    + ("op_dep_subject", "op_dep_object", "op_dep_other",
       "op_tf", "op_ntf", "op_n_surface_forms", "op_location",
       "op_in_quotes", "op_is_entity")
    + tuple(f"pc_pos_{tag}" for tag in POS_TAGS)
    + ("pc_dep_subject", "pc_dep_object", "pc_dep_other",
       "pc_tf", "pc_ntf", "pc_n_surface_forms", "pc_location",
       "pc_in_quotes", "pc_is_entity")
    + ("in_both", "uniq_sf_op_only", "uniq_sf_pc_only", "js_pos", "js_dep")
    + ("op_len", "pc_len", "abs_len_diff", "avg_word_len_diff",
       "js_pos_docs", "pc_depth")
)
N_FEATURES = len(FEATURE_NAMES)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}

FEATURE_GROUPS: dict[str, range] = {
    "non_contextual": range(0, 5),
    "op_usage": range(5, 30),
    "pc_usage": range(30, 55),
    "op_pc_relation": range(55, 60),
    "general": range(60, 66),
}


@dataclass
class CorpusStats:
    """Training-corpus statistics needed at featurization time."""

    n_docs: int
    df: dict[str, int]
    transfer_prob: dict[str, float]
    mean_transfer_prob: float
    taxonomy: dict[str, tuple[int, int]] = field(default_factory=dict, repr=False)

    def idf(self, stem: str) -> float:
        return math.log(self.n_docs / self.df.get(stem, 1))

    def transfer(self, stem: str) -> float:
        return self.transfer_prob.get(stem, self.mean_transfer_prob)


@dataclass
class CandidateRow:
    triple_id: str
    stem: str
    features: np.ndarray
    label: int


def load_taxonomy(path=None) -> dict[str, tuple[int, int]]:
    """Hypernym-depth lexicon keyed by stemmed lemma.

    Entries whose lemmas share a stem are merged: min over entries for the
    minimum depth, max over entries for the maximum.
    """
    if path is None:
        text = resources.files("echotrace.data").joinpath("taxonomy.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    out: dict[str, tuple[int, int]] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        lemma, lo, hi = line.split("\t")
        stem = porter_stem(lemma.lower())
        lo_i, hi_i = int(lo), int(hi)
        if stem in out:
            prev = out[stem]
            out[stem] = (min(prev[0], lo_i), max(prev[1], hi_i))
        else:
            out[stem] = (lo_i, hi_i)
    return out


def wordnet_depths(stem: str, taxonomy: dict[str, tuple[int, int]]) -> tuple[int, int]:
    """Min and max hypernym-path depth for a stem; unknown stems get (0, 0)."""
    return taxonomy.get(stem, (0, 0))


def doc_stems(doc: AnnotatedDoc) -> set[str]:
    return {token.stem for token in doc.tokens}


def build_corpus_stats(
    triples: list[AnnotatedTriple],
    taxonomy: dict[str, tuple[int, int]] | None = None,
) -> CorpusStats:
    """Fit document frequencies and transfer probabilities on training triples.

    Each original post and each persuasive comment counts as one document.
    A stem's transfer probability is the fraction of triples whose
    explanandum contains it in which the explanation echoes it.
    """
    if not triples:
        raise ValueError("cannot fit corpus statistics on an empty training set")
    df: dict[str, int] = {}
    seen: dict[str, int] = {}
    echoed: dict[str, int] = {}
    for triple in triples:
        op_stems = doc_stems(triple.op)
        pc_stems = doc_stems(triple.pc)
        exp_stems = doc_stems(triple.explanation)
        for stems in (op_stems, pc_stems):
            for stem in stems:
                df[stem] = df.get(stem, 0) + 1
        for stem in op_stems | pc_stems:
            seen[stem] = seen.get(stem, 0) + 1
            if stem in exp_stems:
                echoed[stem] = echoed.get(stem, 0) + 1
    transfer = {stem: echoed.get(stem, 0) / count for stem, count in seen.items()}
    mean_tp = sum(transfer.values()) / len(transfer) if transfer else 0.0
    return CorpusStats(
        n_docs=2 * len(triples),
        df=df,
        transfer_prob=transfer,
        mean_transfer_prob=mean_tp,
        taxonomy=taxonomy if taxonomy is not None else {},
    )


def js_divergence(p, q, distance: bool = False) -> float:
    """Base-2 Jensen-Shannon divergence between two probability vectors.

    ``distance=True`` returns the square root (the JS distance); the
    divergence is the default used throughout the feature set.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"dimension mismatch: {p.shape} vs {q.shape}")
    for name, vec in (("p", p), ("q", q)):
        if abs(float(vec.sum()) - 1.0) > 1e-9 or (vec < 0).any():
            raise ValueError(f"{name} is not a probability vector")
    m = (p + q) / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        kl_p = np.where(p > 0, p * (np.log2(p, where=p > 0) - np.log2(m, where=m > 0)), 0.0)
        kl_q = np.where(q > 0, q * (np.log2(q, where=q > 0) - np.log2(m, where=m > 0)), 0.0)
    value = float(min(max((kl_p.sum() + kl_q.sum()) / 2.0, 0.0), 1.0))
    return math.sqrt(value) if distance else value


@dataclass
class SideUsage:
    """Aggregates of one stem's usage on one side of the explanandum."""

    pos_dist: np.ndarray
    dep_dist: np.ndarray
    tf: int
    ntf: float
    n_surface_forms: int
    location: float
    in_quotes: int
    entity_frac: float
    surface_forms: frozenset[str]
    pos_counts: np.ndarray

    @classmethod
    def absent(cls) -> SideUsage:
        return cls(
            pos_dist=np.full(N_POS, 1.0 / N_POS),
            dep_dist=np.full(3, 1.0 / 3.0),
            tf=0, ntf=0.0, n_surface_forms=0, location=0.5,
            in_quotes=0, entity_frac=0.0, surface_forms=frozenset(),
            pos_counts=np.zeros(N_POS),
        )

    def vector(self) -> np.ndarray:
        return np.concatenate([
            self.pos_dist, self.dep_dist,
            [self.tf, self.ntf, self.n_surface_forms, self.location,
             self.in_quotes, self.entity_frac],
        ])


def side_profiles(doc: AnnotatedDoc) -> dict[str, SideUsage]:
    """One-pass usage profiles for every stem occurring in the document."""
    length = doc.length
    occurrences: dict[str, list] = {}
    for token in doc.tokens:
        occurrences.setdefault(token.stem, []).append(token)
    profiles: dict[str, SideUsage] = {}
    for stem, tokens in occurrences.items():
        pos_counts = np.zeros(N_POS)
        dep_counts = np.zeros(3)
        quotes = 0
        entities = 0
        loc_sum = 0.0
        forms = set()
        for token in tokens:
            pos_counts[POS_INDEX[token.pos]] += 1
            dep_counts[DEP_ROLES.index(token.dep_role)] += 1
            quotes += token.in_quotes
            entities += token.is_entity
            loc_sum += (length - 1 - token.index) / length
            forms.add(token.lower)
        tf = len(tokens)
        profiles[stem] = SideUsage(
            pos_dist=pos_counts / tf,
            dep_dist=dep_counts / tf,
            tf=tf,
            ntf=tf / length,
            n_surface_forms=len(forms),
            location=loc_sum / tf,
            in_quotes=quotes,
            entity_frac=entities / length,
            surface_forms=frozenset(forms),
            pos_counts=pos_counts,
        )
    return profiles


def side_usage(stem: str, doc: AnnotatedDoc) -> SideUsage:
    """Usage profile of one stem on one side; defaults when absent."""
    return side_profiles(doc).get(stem, SideUsage.absent())


def relation_features(op_usage: SideUsage, pc_usage: SideUsage) -> np.ndarray:
    in_both = 1.0 if op_usage.tf > 0 and pc_usage.tf > 0 else 0.0
    op_only = len(op_usage.surface_forms - pc_usage.surface_forms)
    pc_only = len(pc_usage.surface_forms - op_usage.surface_forms)
    return np.array([
        in_both, op_only, pc_only,
        js_divergence(op_usage.pos_dist, pc_usage.pos_dist),
        js_divergence(op_usage.dep_dist, pc_usage.dep_dist),
    ])


def _doc_pos_dist(doc: AnnotatedDoc) -> np.ndarray:
    if doc.length == 0:
        return np.full(N_POS, 1.0 / N_POS)
    counts = np.zeros(N_POS)
    for token in doc.tokens:
        counts[POS_INDEX[token.pos]] += 1
    return counts / doc.length


def _mean_word_length(doc: AnnotatedDoc) -> float:
    if doc.length == 0:
        return 0.0
    return sum(len(token.surface) for token in doc.tokens) / doc.length


def pair_features(op: AnnotatedDoc, pc: AnnotatedDoc, pc_depth: int) -> np.ndarray:
    return np.array([
        op.length,
        pc.length,
        abs(op.length - pc.length),
        _mean_word_length(op) - _mean_word_length(pc),
        js_divergence(_doc_pos_dist(op), _doc_pos_dist(pc)),
        pc_depth,
    ])


def featurize_triple(triple: AnnotatedTriple, stats: CorpusStats) -> list[CandidateRow]:
    """One labeled feature row per unique stem in the explanandum."""
    op_profiles = side_profiles(triple.op)
    pc_profiles = side_profiles(triple.pc)
    candidates = sorted(set(op_profiles) | set(pc_profiles))
    if not candidates:
        logger.warning("triple %s has an empty explanandum", triple.triple_id)
        return []
    exp_stems = doc_stems(triple.explanation)
    pair = pair_features(triple.op, triple.pc, triple.pc_depth)
    absent = SideUsage.absent()
    rows = []
    for stem in candidates:
        op_usage = op_profiles.get(stem, absent)
        pc_usage = pc_profiles.get(stem, absent)
        depths = wordnet_depths(stem, stats.taxonomy)
        head = np.array([
            stats.idf(stem), len(stem), depths[0], depths[1], stats.transfer(stem),
        ])
        features = np.concatenate([
            head, op_usage.vector(), pc_usage.vector(),
            relation_features(op_usage, pc_usage), pair,
        ])
        rows.append(CandidateRow(
            triple_id=triple.triple_id,
            stem=stem,
            features=features,
            label=int(stem in exp_stems),
        ))
    return rows


def featurize_split(triples: list[AnnotatedTriple], stats: CorpusStats) -> list[CandidateRow]:
    rows: list[CandidateRow] = []
    for triple in triples:
        rows.extend(featurize_triple(triple, stats))
    return rows


def rows_to_xy(rows: list[CandidateRow]) -> tuple[np.ndarray, np.ndarray]:
    X = np.vstack([row.features for row in rows]) if rows else np.empty((0, N_FEATURES))
    y = np.array([row.label for row in rows], dtype=np.int64)
    return X, y


class MinMaxScaler(BaseEstimator, TransformerMixin):
    """Per-feature min-max scaling to [0, 1], fitted on training rows only.

    Constant training columns map to 0; out-of-range values at transform
    time (validation/test) are clipped into [0, 1].
    """

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] == 0:
            raise ValueError("scaler requires a non-empty 2-D matrix")
        if not np.isfinite(X).all():
            raise ValueError("scaler input contains non-finite values")
        self.data_min_ = X.min(axis=0)
        self.data_max_ = X.max(axis=0)
        span = self.data_max_ - self.data_min_
        self.scale_ = np.where(span > 0, span, 1.0)
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=np.float64)
        scaled = (X - self.data_min_) / self.scale_
        return np.clip(scaled, 0.0, 1.0)


def write_rows_csv(rows: list[CandidateRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["triple_id", "stem", "label", *FEATURE_NAMES])
        for row in rows:
            writer.writerow([row.triple_id, row.stem, row.label,
                             *[repr(float(v)) for v in row.features]])


def read_rows_csv(path) -> list[CandidateRow]:
    rows = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["triple_id", "stem", "label", *FEATURE_NAMES]:
            raise ValueError(f"unexpected feature CSV header in {path}")
        for record in reader:
            rows.append(CandidateRow(
                triple_id=record[0],
                stem=record[1],
                label=int(record[2]),
                features=np.array([float(v) for v in record[3:]], dtype=np.float64),
            ))
    return rows


def write_stats_json(stats: CorpusStats, path) -> None:
    payload = {
        "schema_version": 1,
        "n_docs": stats.n_docs,
        "df": stats.df,
        "transfer_prob": stats.transfer_prob,
        "mean_transfer_prob": stats.mean_transfer_prob,
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, ensure_ascii=False)


def read_stats_json(path, taxonomy: dict[str, tuple[int, int]] | None = None) -> CorpusStats:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    return CorpusStats(
        n_docs=int(payload["n_docs"]),
        df={k: int(v) for k, v in payload["df"].items()},
        transfer_prob={k: float(v) for k, v in payload["transfer_prob"].items()},
        mean_transfer_prob=float(payload["mean_transfer_prob"]),
        taxonomy=taxonomy if taxonomy is not None else {},
    )
