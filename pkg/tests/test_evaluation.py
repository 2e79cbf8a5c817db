import numpy as np
import pytest
from scipy import stats as scipy_stats

from echotrace import evaluation, features, learn
from echotrace.evaluation import (
    DecileBin,
    echo_prob_by_df_decile,
    f1,
    row_modal_pos,
    row_source,
    significance_tests,
)
from echotrace.features import N_FEATURES, CandidateRow, CorpusStats, FEATURE_INDEX
from echotrace.textprep import is_stopword

F = FEATURE_INDEX


# -- f1 ------------------------------------------------------------------------

def test_f1_examples():
    assert f1([1, 0, 1], [1, 0, 1]) == 1.0
    assert f1([0, 0, 0], [1, 0, 1]) == 0.0
    # TP=1, FP=1, FN=1
    assert f1([1, 1, 0], [1, 0, 1]) == 0.5


def test_f1_length_mismatch():
    with pytest.raises(ValueError):
        f1([1, 0], [1, 0, 1])


def test_f1_matches_brute_force_confusion(fixture_rows):
    model = learn.fit_model("gbt", {"max_depth": 3, "min_child_weight": 1.0,
                                    "pos_weight": 3.0}, fixture_rows, n_trees=10)
    X, y = features.rows_to_xy(fixture_rows)
    preds = model.predict(X)
    tp = sum(1 for p, t in zip(preds, y) if p == 1 and t == 1)
    fp = sum(1 for p, t in zip(preds, y) if p == 1 and t == 0)
    fn = sum(1 for p, t in zip(preds, y) if p == 0 and t == 1)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    expected = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    assert f1(preds, y) == pytest.approx(expected, abs=1e-12)


# -- evaluate -------------------------------------------------------------------

@pytest.fixture(scope="module")
def fixture_model(fixture_rows):
    return learn.fit_model("gbt", {"max_depth": 3, "min_child_weight": 1.0,
                                   "pos_weight": 3.0}, fixture_rows, n_trees=20)


def test_source_partition_covers_rows(fixture_rows):
    sources = [row_source(r) for r in fixture_rows]
    assert set(sources) <= {"op_only", "pc_only", "both"}
    counts = {name: sources.count(name) for name in ("op_only", "pc_only", "both")}
    assert sum(counts.values()) == len(fixture_rows)
    assert all(v > 0 for v in counts.values())


def test_stop_content_pool_back_to_overall(fixture_model, fixture_rows):
    X, y = features.rows_to_xy(fixture_rows)
    preds = fixture_model.predict(X)
    content = np.array([not is_stopword(r.stem) for r in fixture_rows])

    def confusion(mask):
        return (int(((preds == 1) & (y == 1) & mask).sum()),
                int(((preds == 1) & (y == 0) & mask).sum()),
                int(((preds == 0) & (y == 1) & mask).sum()))

    whole = confusion(np.ones_like(content))
    pooled = tuple(a + b for a, b in zip(confusion(content), confusion(~content)))
    assert whole == pooled


def test_evaluate_report_shape(fixture_model, fixture_rows):
    report = evaluation.evaluate(fixture_model, fixture_rows, seed=1)
    assert 0.0 <= report.f1_all <= 1.0
    assert report.counts["rows"] == len(fixture_rows)
    assert report.counts["content"] + report.counts["stop"] == len(fixture_rows)
    assert set(report.source_breakdown) == {"op_only", "pc_only", "both"}
    for tag, entry in report.pos_breakdown.items():
        assert tag in evaluation.BREAKDOWN_POS
        for value in entry.values():
            assert value is None or 0.0 <= value <= 1.0


def test_modal_pos_tie_breaks_lexicographically():
    vec = np.zeros(N_FEATURES)
    vec[F["op_tf"]] = 2.0
    vec[F["op_pos_VERB"]] = 0.5
    vec[F["op_pos_NOUN"]] = 0.5
    row = CandidateRow("t", "s", vec, 0)
    assert row_modal_pos(row) == "NOUN"  # NOUN < VERB


def test_modal_pos_combines_sides_by_occurrence_counts():
    vec = np.zeros(N_FEATURES)
    vec[F["op_tf"]] = 1.0
    vec[F["op_pos_ADJ"]] = 1.0
    vec[F["pc_tf"]] = 3.0
    vec[F["pc_pos_VERB"]] = 1.0
    row = CandidateRow("t", "s", vec, 0)
    assert row_modal_pos(row) == "VERB"


# -- ablation -------------------------------------------------------------------

def test_ablation_group_coverage_and_unknown_group(fixture_rows):
    union = sorted(i for r in features.FEATURE_GROUPS.values() for i in r)
    assert union == list(range(N_FEATURES))
    with pytest.raises(ValueError):
        evaluation.ablation(fixture_rows, fixture_rows, fixture_rows,
                            groups=["nope"])


def test_ablation_runs_forward_and_backward(fixture_rows):
    train = fixture_rows[:500]
    val = fixture_rows[500:700]
    test = fixture_rows[700:]
    grid = [{"max_depth": 2, "min_child_weight": 1.0, "pos_weight": 3.0}]
    table = evaluation.ablation(train, val, test, kind="gbt",
                                groups=["op_pc_relation"], grid=grid, n_trees=5)
    entry = table["op_pc_relation"]
    assert set(entry) == {"forward_content", "forward_stop",
                          "backward_content", "backward_stop"}
    for value in entry.values():
        assert value is None or 0.0 <= value <= 1.0


# -- decile curve ----------------------------------------------------------------

def _row_with(stem, label):
    return CandidateRow("t", stem, np.zeros(N_FEATURES), label)


def test_decile_weighted_mean_equals_global_rate(fixture_rows, fixture_stats):
    bins = echo_prob_by_df_decile(fixture_rows, fixture_stats)
    total = sum(b.n for b in bins)
    assert total == len(fixture_rows)
    weighted = sum(b.n * b.echo_prob for b in bins) / total
    global_rate = np.mean([r.label for r in fixture_rows])
    assert weighted == pytest.approx(global_rate, abs=1e-12)


def test_decile_single_df_value_collapses_to_global():
    rows = [_row_with("s", i % 3 == 0) for i in range(30)]
    stats = CorpusStats(n_docs=10, df={"s": 4}, transfer_prob={}, mean_transfer_prob=0.0)
    bins = echo_prob_by_df_decile(rows, stats)
    assert len(bins) == 1
    assert bins[0].echo_prob == pytest.approx(np.mean([r.label for r in rows]))


def test_decile_u_shape_recovered():
    # Rare and very common stems echo often; the middle does not.
    rows = []
    df_map = {}
    for d in range(1, 51):
        stem = f"s{d}"
        df_map[stem] = d
        echo_rate = 0.7 if (d <= 5 or d > 45) else 0.1
        for i in range(40):
            rows.append(_row_with(stem, int(i < echo_rate * 40)))
    stats = CorpusStats(n_docs=100, df=df_map, transfer_prob={}, mean_transfer_prob=0.0)
    bins = echo_prob_by_df_decile(rows, stats)
    assert len(bins) == 10
    median_bin = bins[len(bins) // 2]
    assert bins[0].echo_prob > median_bin.echo_prob
    assert bins[-1].echo_prob > median_bin.echo_prob


def test_decile_bins_partition(fixture_rows, fixture_stats):
    bins = echo_prob_by_df_decile(fixture_rows, fixture_stats)
    for b in bins:
        assert isinstance(b, DecileBin)
        assert 0.0 <= b.echo_prob <= 1.0
        assert b.df_lo <= b.df_hi
        assert b.stderr >= 0.0


# -- descriptives ----------------------------------------------------------------

def test_descriptives_on_fixture(fixture_annotated):
    desc = evaluation.corpus_descriptives(fixture_annotated)
    corr = desc["length_correlations"]
    for value in corr.values():
        assert value is None or -1.0 <= value <= 1.0
    frac = desc["echo_fraction_explanation"]
    assert 0.0 <= frac["all"] <= 1.0
    sizes = desc["sizes"]
    assert sizes["op"]["count"] == len(fixture_annotated)
    assert sizes["op"]["mean_sentences"] >= 1.0


def test_descriptives_identical_lengths_reports_absent():
    from test_features import make_annotated
    triples = [make_annotated(["a", "b"], ["c", "d"], ["a"], tid=f"t{i}")
               for i in range(3)]
    desc = evaluation.corpus_descriptives(triples)
    assert desc["length_correlations"]["op_pc"] is None


def test_descriptives_verbatim_copy_fraction_one():
    from test_features import make_annotated
    triples = [make_annotated(["echo", "chamber"], ["unrelated"],
                              ["echo", "chamber"], tid="t0")]
    desc = evaluation.corpus_descriptives(triples)
    assert desc["echo_fraction_explanation"]["all"] == 1.0


def test_descriptives_quote_exclusion_differs(fixture_annotated):
    desc = evaluation.corpus_descriptives(fixture_annotated)
    pc = desc["echo_fraction_pc_from_op"]
    assert pc["all"] is not None and pc["no_quotes"] is not None
    assert pc["all"] != pc["no_quotes"]  # fixture persuasive comments quote the post


# -- significance -----------------------------------------------------------------

def _rows_for_sig(seed=0, n=400, shift=0.0, feature="idf"):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        label = int(rng.random() < 0.4)
        vec = np.zeros(N_FEATURES)
        vec[F[feature]] = rng.normal(shift * label, 1.0)
        vec[F["stem_length"]] = 3.0  # constant in both classes
        rows.append(CandidateRow("t", f"content{i}", vec, label))
    return rows


def test_significance_requires_two_rows_per_class():
    rows = [_row_with("s", 1), _row_with("s", 0), _row_with("s", 0)]
    with pytest.raises(ValueError):
        significance_tests(rows)


def test_significance_zero_variance_skipped_and_identical_means_flat():
    rows = _rows_for_sig(seed=1, shift=0.0)
    table = {(r["feature"], r["population"]): r for r in significance_tests(rows)}
    const = table[("stem_length", "all")]
    assert const["status"] == "skipped_zero_variance"
    same = table[("idf", "all")]
    assert same["status"] == "ok"
    assert same["corrected_p"] > 0.5  # no real difference survives correction
    assert same["arrows"] in ("", "↑", "↓")


def test_significance_exactly_equal_distributions_give_p_one():
    rows = []
    for label in (0, 0, 1, 1):
        for value in (0.0, 1.0):
            vec = np.zeros(N_FEATURES)
            vec[F["idf"]] = value
            vec[F["transfer_prob"]] = 1.0 - value
            rows.append(CandidateRow("t", "word", vec, label))
    table = {(r["feature"], r["population"]): r for r in significance_tests(rows)}
    entry = table[("idf", "all")]
    assert entry["t_stat"] == pytest.approx(0.0, abs=1e-12)
    assert entry["corrected_p"] == 1.0
    assert entry["arrows"] == ""


def test_significance_matches_scipy_welch_with_bonferroni():
    rows = _rows_for_sig(seed=2, shift=0.9)
    table = {(r["feature"], r["population"]): r for r in significance_tests(rows)}
    entry = table[("idf", "all")]
    X, y = features.rows_to_xy(rows)
    col = X[:, F["idf"]]
    t_ref, p_ref = scipy_stats.ttest_ind(col[y == 1], col[y == 0], equal_var=False)
    assert entry["t_stat"] == pytest.approx(float(t_ref), rel=1e-9)
    assert entry["corrected_p"] == pytest.approx(min(1.0, float(p_ref) * 66), rel=1e-9)
    assert entry["direction"] == "up"
    assert entry["arrows"].startswith("↑")


def test_significance_arrow_thresholds():
    # Corrected p just under 0.05 must render exactly one arrow.
    for seed in range(60):
        rows = _rows_for_sig(seed=seed, n=120, shift=0.45)
        table = {(r["feature"], r["population"]): r for r in significance_tests(rows)}
        entry = table[("idf", "all")]
        if entry["corrected_p"] is None:
            continue
        if 0.01 <= entry["corrected_p"] < 0.05:
            assert len(entry["arrows"]) == 1
            break
    else:
        pytest.fail("no seed produced a corrected p in the one-arrow band")


def test_significance_antisymmetric_under_label_inversion(fixture_rows):
    table = significance_tests(fixture_rows)
    flipped_rows = [CandidateRow(r.triple_id, r.stem, r.features, 1 - r.label)
                    for r in fixture_rows]
    flipped = significance_tests(flipped_rows)
    for a, b in zip(table, flipped):
        assert a["feature"] == b["feature"] and a["population"] == b["population"]
        if a["status"] == "ok" and b["status"] == "ok" and a["direction"] != "flat":
            assert {a["direction"], b["direction"]} == {"up", "down"}
            assert len(a["arrows"]) == len(b["arrows"])


def test_js_distance_switch():
    div = features.js_divergence([0.5, 0.5], [0.9, 0.1])
    dist = features.js_divergence([0.5, 0.5], [0.9, 0.1], distance=True)
    assert dist == pytest.approx(div ** 0.5, abs=1e-15)


def test_fixture_transfer_probability_direction_is_up(fixture_rows):
    table = {(r["feature"], r["population"]): r
             for r in significance_tests(fixture_rows)}
    for population in ("all", "content", "stop"):
        entry = table[("transfer_prob", population)]
        assert entry["status"] == "ok"
        assert entry["direction"] == "up"


def test_bonferroni_multiplication_example():
    # A raw p of 0.0005 with 66 tests corrects to 0.033: one arrow.
    assert min(1.0, 0.0005 * evaluation.BONFERRONI_M) == pytest.approx(0.033)
    assert evaluation._arrows(1, 0.033) == "↑"
    assert evaluation._arrows(1, 0.009) == "↑↑"
    assert evaluation._arrows(-1, 0.0009) == "↓↓↓"
    assert evaluation._arrows(1, 0.00009) == "↑↑↑↑"
    assert evaluation._arrows(1, 0.2) == ""
