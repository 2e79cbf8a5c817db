"""F1 evaluation, breakdowns, ablations, corpus descriptives, and
significance testing."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as scipy_stats

from .annotate import POS_TAGS, AnnotatedTriple
from .features import (
    FEATURE_GROUPS,
    FEATURE_INDEX,
    FEATURE_NAMES,
    CandidateRow,
    CorpusStats,
    rows_to_xy,
)
from .learn import TrainedModel, random_baseline
from .textprep import is_stopword

logger = logging.getLogger(__name__)

BREAKDOWN_POS = ("NOUN", "ADV", "VERB", "PROPN", "ADJ")
SENTENCE_FINAL = frozenset({".", "!", "?"})

_OP_TF = FEATURE_INDEX["op_tf"]
_PC_TF = FEATURE_INDEX["pc_tf"]
_OP_POS0 = FEATURE_INDEX["op_pos_" + POS_TAGS[0]]
_PC_POS0 = FEATURE_INDEX["pc_pos_" + POS_TAGS[0]]

# Bonferroni multiplier: one test per feature within each population column.
BONFERRONI_M = len(FEATURE_NAMES)
ARROW_LEVELS = ((0.0001, 4), (0.001, 3), (0.01, 2), (0.05, 1))


def f1(preds, labels) -> float:
    """Balanced F-score; 0 when precision and recall are both undefined."""
    preds = np.asarray(preds)
    labels = np.asarray(labels)
    if preds.shape != labels.shape:
        raise ValueError("predictions and labels differ in length")
    tp = int(((preds == 1) & (labels == 1)).sum())
    fp = int(((preds == 1) & (labels == 0)).sum())
    fn = int(((preds == 0) & (labels == 1)).sum())
    if 2 * tp + fp + fn == 0:
        return 0.0
    return 2.0 * tp / (2 * tp + fp + fn)


def row_source(row: CandidateRow) -> str:
    in_op = row.features[_OP_TF] > 0
    in_pc = row.features[_PC_TF] > 0
    if in_op and in_pc:
        return "both"
    return "op_only" if in_op else "pc_only"


def row_modal_pos(row: CandidateRow) -> str:
    """Most frequent POS tag over the stem's explanandum occurrences; ties
    break lexicographically by tag name."""
    op_tf = row.features[_OP_TF]
    pc_tf = row.features[_PC_TF]
    counts = (op_tf * row.features[_OP_POS0:_OP_POS0 + len(POS_TAGS)]
              + pc_tf * row.features[_PC_POS0:_PC_POS0 + len(POS_TAGS)])
    best = counts.max()
    winners = [tag for tag, count in zip(POS_TAGS, counts) if count == best]
    return min(winners)


@dataclass
class EvalReport:
    f1_all: float
    f1_content: float | None
    f1_stop: float | None
    f1_random_all: float
    counts: dict[str, int]
    pos_breakdown: dict[str, dict[str, float | None]]
    source_breakdown: dict[str, float | None]
    ablation: dict[str, dict[str, float | None]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "f1_all": self.f1_all,
            "f1_content": self.f1_content,
            "f1_stop": self.f1_stop,
            "f1_random_all": self.f1_random_all,
            "counts": self.counts,
            "pos_breakdown": self.pos_breakdown,
            "source_breakdown": self.source_breakdown,
            "ablation": self.ablation,
        }


def _subset_f1(preds, labels, mask) -> float | None:
    if not mask.any():
        return None
    return f1(preds[mask], labels[mask])


def evaluate(model: TrainedModel, rows: list[CandidateRow],
             threshold: float = 0.5, random_p: float = 0.15,
             seed: int = 0) -> EvalReport:
    """Pooled instance-level F1 with stopword/content, word-source, and
    part-of-speech breakdowns. Empty subsets are reported as absent.

    Rows are already one-per-stem, so the label-averaging step that a
    token-level tagger would need before scoring is a no-op here.
    """
    X, y = rows_to_xy(rows)
    preds = model.predict(X, threshold=threshold)
    rand = random_baseline(len(rows), p=random_p, seed=seed)

    content = np.array([not is_stopword(row.stem) for row in rows], dtype=bool)
    sources = np.array([row_source(row) for row in rows])
    modal = np.array([row_modal_pos(row) for row in rows])

    pos_breakdown: dict[str, dict[str, float | None]] = {}
    for tag in BREAKDOWN_POS:
        mask = modal == tag
        if not mask.any():
            continue
        pos_breakdown[tag] = {
            "f1_content": _subset_f1(preds, y, mask & content),
            "f1_all": _subset_f1(preds, y, mask),
            "f1_random": _subset_f1(rand, y, mask & content),
        }

    source_breakdown = {
        name: _subset_f1(preds, y, sources == name)
        for name in ("op_only", "pc_only", "both")
    }

    return EvalReport(
        f1_all=f1(preds, y),
        f1_content=_subset_f1(preds, y, content),
        f1_stop=_subset_f1(preds, y, ~content),
        f1_random_all=f1(rand, y),
        counts={
            "rows": len(rows),
            "content": int(content.sum()),
            "stop": int((~content).sum()),
            "positive": int(y.sum()),
        },
        pos_breakdown=pos_breakdown,
        source_breakdown=source_breakdown,
    )


def ablation(train_rows, validation_rows, test_rows, kind: str = "gbt",
             groups=None, grid=None, n_trees: int | None = None,
             threshold: float = 0.5) -> dict[str, dict[str, float | None]]:
    """Forward (group only) and backward (group removed) feature ablations.

    Every ablated model is re-tuned on all-words validation F1 before being
    scored on the test rows' content and stopword subsets.
    """
    from .learn import GBT_GRID, LOGREG_GRID, grid_search

    group_names = list(groups) if groups is not None else list(FEATURE_GROUPS)
    for name in group_names:
        if name not in FEATURE_GROUPS:
            raise ValueError(f"unknown feature group: {name}")
    if grid is None:
        grid = GBT_GRID if kind == "gbt" else LOGREG_GRID

    X_test, y_test = rows_to_xy(test_rows)
    content = np.array([not is_stopword(row.stem) for row in test_rows], dtype=bool)

    def scores(indices) -> tuple[float | None, float | None]:
        model, _, _ = grid_search(train_rows, validation_rows, grid, kind,
                                  feature_indices=indices, n_trees=n_trees)
        preds = model.predict(X_test, threshold=threshold)
        return (_subset_f1(preds, y_test, content),
                _subset_f1(preds, y_test, ~content))

    out: dict[str, dict[str, float | None]] = {}
    all_indices = set(range(len(FEATURE_NAMES)))
    for name in group_names:
        member = set(FEATURE_GROUPS[name])
        fwd_content, fwd_stop = scores(sorted(member))
        bwd_content, bwd_stop = scores(sorted(all_indices - member))
        out[name] = {
            "forward_content": fwd_content, "forward_stop": fwd_stop,
            "backward_content": bwd_content, "backward_stop": bwd_stop,
        }
    return out


@dataclass
class DecileBin:
    df_lo: int
    df_hi: int
    n: int
    echo_prob: float
    stderr: float


def echo_prob_by_df_decile(rows: list[CandidateRow], stats: CorpusStats,
                           n_bins: int = 10) -> list[DecileBin]:
    """Echo probability per training-document-frequency decile.

    Bin edges are df quantiles over the candidate rows; when there are too
    few distinct df values, duplicate edges collapse and bins merge.
    """
    dfs = np.array([stats.df.get(row.stem, 1) for row in rows], dtype=np.float64)
    labels = np.array([row.label for row in rows], dtype=np.float64)
    edges = np.unique(np.quantile(dfs, np.linspace(0, 1, n_bins + 1)[1:-1]))
    if len(edges) < n_bins - 1:
        logger.warning("df deciles collapsed to %d bins (ties)", len(edges) + 1)
    assignment = np.searchsorted(edges, dfs, side="right")
    bins = []
    for b in range(len(edges) + 1):
        mask = assignment == b
        if not mask.any():
            continue
        prob = float(labels[mask].mean())
        n = int(mask.sum())
        bins.append(DecileBin(
            df_lo=int(dfs[mask].min()),
            df_hi=int(dfs[mask].max()),
            n=n,
            echo_prob=prob,
            stderr=math.sqrt(prob * (1.0 - prob) / n),
        ))
    return bins


def _pearson(a: np.ndarray, b: np.ndarray) -> float | None:
    if len(a) < 2 or a.std() == 0 or b.std() == 0:
        return None
    return float(np.corrcoef(a, b)[0, 1])


def _echo_fraction(source_stems: set[str], target_doc, content_only: bool,
                   exclude_quoted: bool) -> float | None:
    tokens = [t for t in target_doc.tokens
              if not (exclude_quoted and t.in_quotes)
              and not (content_only and is_stopword(t.stem))]
    if not tokens:
        return None
    echoed = sum(1 for t in tokens if t.stem in source_stems)
    return echoed / len(tokens)


def _sentence_count(doc) -> int:
    if doc.length == 0:
        return 0
    count = sum(1 for t in doc.tokens if t.surface in SENTENCE_FINAL)
    return max(count, 1)


def corpus_descriptives(triples: list[AnnotatedTriple]) -> dict:
    """Length correlations, echo fractions, and per-role size statistics."""
    from .features import doc_stems

    op_lens = np.array([t.op.length for t in triples], dtype=np.float64)
    pc_lens = np.array([t.pc.length for t in triples], dtype=np.float64)
    exp_lens = np.array([t.explanation.length for t in triples], dtype=np.float64)

    variants = {
        "all": (False, False),
        "no_quotes": (False, True),
        "content": (True, False),
        "content_no_quotes": (True, True),
    }
    exp_fracs: dict[str, list[float]] = {k: [] for k in variants}
    pc_fracs: dict[str, list[float]] = {k: [] for k in variants}
    for triple in triples:
        op_stems = doc_stems(triple.op)
        explanandum = op_stems | doc_stems(triple.pc)
        for key, (content_only, no_quotes) in variants.items():
            frac = _echo_fraction(explanandum, triple.explanation, content_only, no_quotes)
            if frac is not None:
                exp_fracs[key].append(frac)
            frac = _echo_fraction(op_stems, triple.pc, content_only, no_quotes)
            if frac is not None:
                pc_fracs[key].append(frac)

    def summarize(doc_lens, docs):
        return {
            "count": len(docs),
            "mean_words": float(doc_lens.mean()) if len(docs) else None,
            "mean_sentences": (sum(_sentence_count(d) for d in docs) / len(docs)
                               if docs else None),
        }

    return {
        "length_correlations": {
            "op_pc": _pearson(op_lens, pc_lens),
            "op_explanation": _pearson(op_lens, exp_lens),
            "pc_explanation": _pearson(pc_lens, exp_lens),
        },
        "echo_fraction_explanation": {
            k: (float(np.mean(v)) if v else None) for k, v in exp_fracs.items()
        },
        "echo_fraction_pc_from_op": {
            k: (float(np.mean(v)) if v else None) for k, v in pc_fracs.items()
        },
        "sizes": {
            "op": summarize(op_lens, [t.op for t in triples]),
            "pc": summarize(pc_lens, [t.pc for t in triples]),
            "explanation": summarize(exp_lens, [t.explanation for t in triples]),
        },
    }


def _arrows(direction: int, corrected_p: float) -> str:
    symbol = "↑" if direction > 0 else "↓"
    for threshold, count in ARROW_LEVELS:
        if corrected_p < threshold:
            return symbol * count
    return ""


def significance_tests(rows: list[CandidateRow],
                       populations=("all", "content", "stop")) -> list[dict]:
    """Per-feature two-sided Welch t-tests of echoed vs non-echoed rows,
    Bonferroni-corrected within each population column."""
    X, y = rows_to_xy(rows)
    if (y == 1).sum() < 2 or (y == 0).sum() < 2:
        raise ValueError("need at least two rows per class for significance tests")
    content = np.array([not is_stopword(row.stem) for row in rows], dtype=bool)
    masks = {"all": np.ones(len(rows), dtype=bool), "content": content, "stop": ~content}

    table = []
    for population in populations:
        mask = masks[population]
        X_pop, y_pop = X[mask], y[mask]
        echoed = X_pop[y_pop == 1]
        other = X_pop[y_pop == 0]
        for i, name in enumerate(FEATURE_NAMES):
            entry = {"feature": name, "population": population}
            if len(echoed) < 2 or len(other) < 2:
                entry.update(status="skipped_small", mean_echoed=None, mean_not=None,
                             t_stat=None, corrected_p=None, direction="", arrows="")
                table.append(entry)
                continue
            a, b = echoed[:, i], other[:, i]
            mean_a, mean_b = float(a.mean()), float(b.mean())
            va, vb = float(a.var(ddof=1)), float(b.var(ddof=1))
            if va == 0.0 and vb == 0.0:
                entry.update(status="skipped_zero_variance", mean_echoed=mean_a,
                             mean_not=mean_b, t_stat=None, corrected_p=None,
                             direction="", arrows="")
                table.append(entry)
                continue
            se = math.sqrt(va / len(a) + vb / len(b))
            t_stat = (mean_a - mean_b) / se
            df = se ** 4 / (
                (va / len(a)) ** 2 / (len(a) - 1) + (vb / len(b)) ** 2 / (len(b) - 1)
            )
            p_raw = 2.0 * float(scipy_stats.t.sf(abs(t_stat), df))
            corrected = min(1.0, p_raw * BONFERRONI_M)
            direction = 1 if mean_a > mean_b else (-1 if mean_a < mean_b else 0)
            entry.update(
                status="ok", mean_echoed=mean_a, mean_not=mean_b,
                t_stat=float(t_stat), corrected_p=corrected,
                direction={1: "up", -1: "down", 0: "flat"}[direction],
                arrows=_arrows(direction, corrected) if direction else "",
            )
            table.append(entry)
    return table
