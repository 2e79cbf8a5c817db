"""Command-line pipeline: ingest -> featurize -> train -> evaluate/stats,
plus the feature-augmented token-stream export for external sequence models.

Every stage reads and writes plain files under one working directory so each
intermediate is inspectable and diffable. Writes are atomic
(temp-then-rename), and all randomness flows from ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

from . import annotate, corpus, evaluation, features, learn

logger = logging.getLogger("echotrace")

SEPARATOR_TOKEN = "@sep@"


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


def load_config(path: Path) -> dict:
    text = path.read_bytes()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text.decode("utf-8"))
    return json.loads(text.decode("utf-8"))


def atomic_write(path: Path, writer) -> None:
    tmp = path.with_name(path.name + ".tmp")
    writer(tmp)
    os.replace(tmp, path)


class Pipeline:
    def __init__(self, config: dict, seed: int):
        self.config = config
        self.seed = seed
        base = os.environ.get("ECHOTRACE_DATA_DIR", ".")
        self.base = Path(base)
        self.workdir = self._resolve(config.get("workdir", "out"))
        self.workdir.mkdir(parents=True, exist_ok=True)

    def _resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base / p

    def artifact(self, name: str) -> Path:
        return self.workdir / name

    def require(self, name: str, produced_by: str) -> Path:
        path = self.artifact(name)
        if not path.exists():
            raise StageError(produced_by, f"missing {path}; run the {produced_by} stage first")
        return path

    # -- stages ---------------------------------------------------------

    def ingest(self) -> None:
        dumps = self.config.get("dumps", [])
        if not dumps:
            raise StageError("ingest", "config has no 'dumps' entries")
        submissions, comments = [], []
        skipped = 0
        for dump in dumps:
            path = self._resolve(dump)
            if not path.exists():
                raise StageError("ingest", f"dump file not found: {path}")
            result = corpus.load_dump(path)
            submissions.extend(result.submissions)
            comments.extend(result.comments)
            skipped += result.skipped
        triples = corpus.extract_triples(submissions, comments)
        if not triples:
            raise StageError("ingest", "no conversation triples extracted")
        atomic_write(self.artifact("triples.jsonl"),
                     lambda p: corpus.write_triples_jsonl(triples, p))

        def write_docs(path: Path) -> None:
            with open(path, "w", encoding="utf-8") as handle:
                for triple in triples:
                    for key, text in annotate.normalized_docs(triple).items():
                        handle.write(json.dumps(
                            {"doc_id": key, "text": text}, ensure_ascii=False) + "\n")

        atomic_write(self.artifact("docs.jsonl"), write_docs)
        print(f"ingest: {len(triples)} triples "
              f"({len(submissions)} submissions, {len(comments)} comments, "
              f"{skipped} skipped lines)")

    def _split_triples(self) -> corpus.SplitCorpus:
        path = self.require("triples.jsonl", "ingest")
        triples = corpus.read_triples_jsonl(path)
        return corpus.split_by_time(
            triples,
            test_window=int(self.config.get("test_window_months", 6)),
            validation_window=int(self.config.get("validation_window_months", 6)),
        )

    def _annotated_splits(self) -> dict[str, list[annotate.AnnotatedTriple]]:
        split = self._split_triples()
        mode = self.config.get("annotation", {"mode": "builtin"})
        exchange = None
        if mode.get("mode") == "exchange":
            exchange_path = self._resolve(mode["path"])
            if not exchange_path.exists():
                raise StageError("featurize", f"exchange annotations not found: {exchange_path}")
            exchange = annotate.read_exchange_file(exchange_path)
        return {
            name: annotate.annotate_triples(part, exchange)
            for name, part in (("train", split.train),
                               ("validation", split.validation),
                               ("test", split.test))
        }

    def featurize(self) -> None:
        annotated = self._annotated_splits()
        if not annotated["train"]:
            raise StageError("featurize", "training split is empty")
        taxonomy = features.load_taxonomy()
        stats = features.build_corpus_stats(annotated["train"], taxonomy)
        atomic_write(self.artifact("stats.json"),
                     lambda p: features.write_stats_json(stats, p))
        for name, triples in annotated.items():
            rows = features.featurize_split(triples, stats)
            atomic_write(self.artifact(f"features_{name}.csv"),
                         lambda p, rows=rows: features.write_rows_csv(rows, p))
            print(f"featurize: {name}: {len(triples)} triples, {len(rows)} rows")

    def _model_config(self) -> dict:
        return self.config.get("model", {"kind": "gbt"})

    def train(self) -> None:
        model_cfg = self._model_config()
        kind = model_cfg.get("kind", "gbt")
        n_trees = model_cfg.get("n_trees")
        train_rows = features.read_rows_csv(self.require("features_train.csv", "featurize"))
        if model_cfg.get("grid", False):
            val_rows = features.read_rows_csv(
                self.require("features_validation.csv", "featurize"))
            grid = model_cfg["grid"]
            if grid is True:
                grid = learn.GBT_GRID if kind == "gbt" else learn.LOGREG_GRID
            model, best_config, results = learn.grid_search(
                train_rows, val_rows, grid, kind, n_trees=n_trees)
            print(f"train: best config {best_config}")
        else:
            model = learn.fit_model(kind, model_cfg.get("config", {}),
                                    train_rows, n_trees=n_trees)
        atomic_write(self.artifact("model.json"), lambda p: learn.save_model(model, p))
        print(f"train: wrote {self.artifact('model.json')}")

    def evaluate(self) -> None:
        model = learn.load_model(self.require("model.json", "train"))
        test_rows = features.read_rows_csv(self.require("features_test.csv", "featurize"))
        report = evaluation.evaluate(
            model, test_rows,
            threshold=float(self.config.get("threshold", 0.5)),
            random_p=float(self.config.get("random_p", 0.15)),
            seed=self.seed,
        )
        if self.config.get("ablation", False):
            train_rows = features.read_rows_csv(
                self.require("features_train.csv", "featurize"))
            val_rows = features.read_rows_csv(
                self.require("features_validation.csv", "featurize"))
            model_cfg = self._model_config()
            grid = model_cfg.get("grid")
            if grid in (True, None, False):
                grid = learn.GBT_GRID if model.kind == "gbt" else learn.LOGREG_GRID
            report.ablation = evaluation.ablation(
                train_rows, val_rows, test_rows, kind=model.kind,
                grid=grid, n_trees=model_cfg.get("n_trees"))
        atomic_write(self.artifact("report.json"), lambda p: p.write_text(
            json.dumps(report.to_dict(), indent=2), encoding="utf-8"))
        print(f"evaluate: F1 all={report.f1_all:.3f} "
              f"content={report.f1_content} stop={report.f1_stop}")

    def stats(self) -> None:
        taxonomy = features.load_taxonomy()
        stats = features.read_stats_json(self.require("stats.json", "featurize"), taxonomy)
        train_rows = features.read_rows_csv(self.require("features_train.csv", "featurize"))
        annotated = self._annotated_splits()

        descriptives = evaluation.corpus_descriptives(annotated["train"])
        atomic_write(self.artifact("descriptives.json"), lambda p: p.write_text(
            json.dumps(descriptives, indent=2), encoding="utf-8"))

        curve = evaluation.echo_prob_by_df_decile(train_rows, stats)

        def write_curve(path: Path) -> None:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle)
                writer.writerow(["df_lo", "df_hi", "n", "echo_prob", "stderr"])
                for b in curve:
                    writer.writerow([b.df_lo, b.df_hi, b.n,
                                     repr(b.echo_prob), repr(b.stderr)])

        atomic_write(self.artifact("decile_curve.csv"), write_curve)

        table = evaluation.significance_tests(train_rows)

        def write_sig(path: Path) -> None:
            fields = ["feature", "population", "status", "mean_echoed", "mean_not",
                      "t_stat", "corrected_p", "direction", "arrows"]
            with open(path, "w", encoding="utf-8", newline="") as handle:
                writer = csv.DictWriter(handle, fieldnames=fields)
                writer.writeheader()
                writer.writerows(table)

        atomic_write(self.artifact("significance.csv"), write_sig)
        print(f"stats: wrote descriptives, {len(curve)} decile bins, "
              f"{len(table)} significance rows")

    def export_augmented(self) -> None:
        taxonomy = features.load_taxonomy()
        stats = features.read_stats_json(self.require("stats.json", "featurize"), taxonomy)
        annotated = self._annotated_splits()
        zeros = [0.0] * features.N_FEATURES

        def write(path: Path) -> None:
            with open(path, "w", encoding="utf-8") as handle:
                for name in ("train", "validation", "test"):
                    for triple in annotated[name]:
                        rows = features.featurize_triple(triple, stats)
                        by_stem = {row.stem: row for row in rows}
                        tokens = []
                        for doc in (triple.op, None, triple.pc):
                            if doc is None:
                                tokens.append({"text": SEPARATOR_TOKEN, "stem": SEPARATOR_TOKEN,
                                               "features": zeros, "label": 0})
                                continue
                            for token in doc.tokens:
                                row = by_stem[token.stem]
                                tokens.append({
                                    "text": token.surface,
                                    "stem": token.stem,
                                    "features": [float(v) for v in row.features],
                                    "label": row.label,
                                })
                        handle.write(json.dumps({
                            "triple_id": triple.triple_id,
                            "split": name,
                            "tokens": tokens,
                        }, ensure_ascii=False) + "\n")

        atomic_write(self.artifact("augmented.jsonl"), write)
        print(f"export-augmented: wrote {self.artifact('augmented.jsonl')}")


COMMANDS = {
    "ingest": Pipeline.ingest,
    "featurize": Pipeline.featurize,
    "train": Pipeline.train,
    "evaluate": Pipeline.evaluate,
    "stats": Pipeline.stats,
    "export-augmented": Pipeline.export_augmented,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="echotrace",
        description="Word-echo analysis pipeline over conversation triples.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="path to a JSON or TOML config")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    config_path = Path(args.config)
    if not config_path.exists():
        print(f"error: config not found: {config_path}", file=sys.stderr)
        return 2
    try:
        pipeline = Pipeline(load_config(config_path), seed=args.seed)
        COMMANDS[args.command](pipeline)
    except StageError as err:
        print(f"error [{err.stage}]: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # file/format errors surface with a stage hint
        print(f"error [{args.command}]: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
