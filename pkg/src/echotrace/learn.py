"""Classifiers for the word-echo task, plus tuning and importance utilities.

Both learners are deterministic: logistic regression is trained by Newton
steps with a backtracking line search on the class-weighted L2-penalized
log-likelihood, and the tree ensemble does second-order boosting on the
logistic loss with exact greedy splits (no subsampling, no randomness).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .features import FEATURE_NAMES, MinMaxScaler, rows_to_xy

MODEL_SCHEMA_VERSION = 1

# Hyperparameter grids used for exhaustive tuning.
LOGREG_GRID = tuple(
    {"C": c, "class_weights": w}
    for c in (0.1, 1.0, 10.0, 100.0, 1000.0, 10000.0)
    for w in ((0.25, 0.75), (0.20, 0.80), (0.15, 0.85))
)
GBT_GRID = tuple(
    {"max_depth": d, "min_child_weight": m, "pos_weight": p}
    for d in (5, 7, 9)
    for m in (3.0, 5.0, 7.0)
    for p in (3.0, 4.0, 5.0)
)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return out


def _softplus(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0) + np.log1p(np.exp(-np.abs(z)))


def weighted_nll(params: np.ndarray, X: np.ndarray, y: np.ndarray,
                 C: float, class_weights: tuple[float, float]) -> float:
    """Class-weighted negative log-likelihood plus the L2 term (bias last,
    unpenalized)."""
    w, b = params[:-1], params[-1]
    z = X @ w + b
    c = np.where(y == 1, class_weights[1], class_weights[0])
    losses = _softplus(z) - y * z
    return float(c @ losses + (w @ w) / (2.0 * C))


def weighted_nll_grad(params: np.ndarray, X: np.ndarray, y: np.ndarray,
                      C: float, class_weights: tuple[float, float]) -> np.ndarray:
    """Analytic gradient of :func:`weighted_nll` in the same layout."""
    w, b = params[:-1], params[-1]
    z = X @ w + b
    c = np.where(y == 1, class_weights[1], class_weights[0])
    residual = c * (_sigmoid(z) - y)
    grad_w = X.T @ residual + w / C
    return np.append(grad_w, residual.sum())


class LogisticRegressionClassifier(BaseEstimator, ClassifierMixin):
    """Class-weighted L2 logistic regression trained with Newton steps."""

    def __init__(self, C: float = 1.0, class_weights: tuple[float, float] = (0.5, 0.5),
                 tol: float = 1e-6, max_iter: int = 1000):
        self.C = C
        self.class_weights = class_weights
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise ValueError("X must be 2-D with one label per row")
        classes = np.unique(y)
        if classes.size < 2:
            raise ValueError("training labels contain a single class")
        n, d = X.shape
        params = np.zeros(d + 1)
        loss = weighted_nll(params, X, y, self.C, self.class_weights)
        trace = [loss]
        c = np.where(y == 1, self.class_weights[1], self.class_weights[0])
        penalty_diag = np.append(np.full(d, 1.0 / self.C), 0.0)
        Xb = np.hstack([X, np.ones((n, 1))])
        for _ in range(self.max_iter):
            grad = weighted_nll_grad(params, X, y, self.C, self.class_weights)
            if np.linalg.norm(grad) < self.tol:
                break
            z = X @ params[:-1] + params[-1]
            p = _sigmoid(z)
            diag = c * p * (1.0 - p)
            hessian = (Xb * diag[:, None]).T @ Xb + np.diag(penalty_diag)
            try:
                step = np.linalg.solve(hessian, -grad)
            except np.linalg.LinAlgError:
                step = -grad
            # Backtracking line search (Armijo) keeps the loss monotone.
            alpha, slope = 1.0, grad @ step
            for _ in range(60):
                candidate = params + alpha * step
                new_loss = weighted_nll(candidate, X, y, self.C, self.class_weights)
                if new_loss <= loss + 1e-4 * alpha * slope:
                    break
                alpha *= 0.5
            else:
                break
            params, loss = candidate, new_loss
            trace.append(loss)
        self.coef_ = params[:-1]
        self.intercept_ = float(params[-1])
        self.loss_trace_ = trace
        self.n_features_in_ = d
        return self

    def decision_function(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p = _sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


def _build_tree(X, g, h, orders, depth, max_depth, min_child_weight, reg_lambda):
    rows = orders[0]
    G = float(g[rows].sum())
    H = float(h[rows].sum())
    leaf = {"leaf": -G / (H + reg_lambda)}
    if depth >= max_depth or rows.size < 2:
        return leaf
    parent_score = G * G / (H + reg_lambda)
    best_gain = 0.0
    best = None
    for j, idx in enumerate(orders):
        vals = X[idx, j]
        if vals[0] == vals[-1]:
            continue
        gl = np.cumsum(g[idx])[:-1]
        hl = np.cumsum(h[idx])[:-1]
        valid = (vals[:-1] != vals[1:]) & (hl >= min_child_weight) & (H - hl >= min_child_weight)
        if not valid.any():
            continue
        gains = np.where(
            valid,
            0.5 * (gl ** 2 / (hl + reg_lambda)
                   + (G - gl) ** 2 / (H - hl + reg_lambda)
                   - parent_score),
            -np.inf,
        )
        pos = int(np.argmax(gains))
        if gains[pos] > best_gain:
            best_gain = float(gains[pos])
            best = (j, pos)
    if best is None:
        return leaf
    j, pos = best
    idx = orders[j]
    threshold = float((X[idx[pos], j] + X[idx[pos + 1], j]) / 2.0)
    is_left = np.zeros(X.shape[0], dtype=bool)
    is_left[idx[: pos + 1]] = True
    left_orders = [o[is_left[o]] for o in orders]
    right_orders = [o[~is_left[o]] for o in orders]
    return {
        "feature": j,
        "threshold": threshold,
        "gain": best_gain,
        "left": _build_tree(X, g, h, left_orders, depth + 1,
                            max_depth, min_child_weight, reg_lambda),
        "right": _build_tree(X, g, h, right_orders, depth + 1,
                             max_depth, min_child_weight, reg_lambda),
    }


def _eval_tree(tree, X, out, mask):
    if "leaf" in tree:
        out[mask] += tree["leaf"]
        return
    go_left = X[:, tree["feature"]] < tree["threshold"]
    _eval_tree(tree["left"], X, out, mask & go_left)
    _eval_tree(tree["right"], X, out, mask & ~go_left)


def tree_margins(trees, X, learning_rate, base_margin):
    out = np.full(X.shape[0], base_margin, dtype=np.float64)
    scores = np.zeros(X.shape[0])
    for tree in trees:
        scores[:] = 0.0
        _eval_tree(tree, X, scores, np.ones(X.shape[0], dtype=bool))
        out += learning_rate * scores
    return out


class GradientBoostedTreesClassifier(BaseEstimator, ClassifierMixin):
    """Second-order boosted trees on the logistic loss.

    Positive instances are up-weighted by ``pos_weight`` as gradient and
    hessian multipliers. Splits maximize the standard second-order gain with
    leaf regularization ``reg_lambda`` and must be strictly positive;
    children must carry at least ``min_child_weight`` of hessian mass.
    """

    def __init__(self, n_trees: int = 1000, learning_rate: float = 0.1,
                 max_depth: int = 5, min_child_weight: float = 3.0,
                 pos_weight: float = 1.0, reg_lambda: float = 1.0,
                 base_score: float = 0.5):
        self.n_trees = n_trees
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.min_child_weight = min_child_weight
        self.pos_weight = pos_weight
        self.reg_lambda = reg_lambda
        self.base_score = base_score

    def fit(self, X, y):
        if self.n_trees <= 0:
            raise ValueError("n_trees must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n, d = X.shape
        weights = np.where(y == 1, self.pos_weight, 1.0)
        base_orders = [np.argsort(X[:, j], kind="stable") for j in range(d)]
        self.base_margin_ = math.log(self.base_score / (1.0 - self.base_score))
        margin = np.full(n, self.base_margin_)
        trees = []
        loss_trace = []
        scores = np.zeros(n)
        for _ in range(self.n_trees):
            p = _sigmoid(margin)
            loss_trace.append(float(weights @ (_softplus(margin) - y * margin)) / n)
            g = weights * (p - y)
            h = weights * p * (1.0 - p)
            tree = _build_tree(X, g, h, base_orders, 0, self.max_depth,
                               self.min_child_weight, self.reg_lambda)
            trees.append(tree)
            scores[:] = 0.0
            _eval_tree(tree, X, scores, np.ones(n, dtype=bool))
            margin += self.learning_rate * scores
        p = _sigmoid(margin)
        loss_trace.append(float(weights @ (_softplus(margin) - y * margin)) / n)
        self.trees_ = trees
        self.loss_trace_ = loss_trace
        self.n_features_in_ = d
        return self

    def decision_function(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return tree_margins(self.trees_, X, self.learning_rate, self.base_margin_)

    def predict_proba(self, X):
        p = _sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(np.int64)


def feature_importance(model: GradientBoostedTreesClassifier,
                       feature_names: tuple[str, ...] | None = None) -> dict[str, float]:
    """Per-feature total split gain across the ensemble, normalized to sum
    to 100. Models with no splits report all zeros."""
    if feature_names is None:
        feature_names = FEATURE_NAMES[: model.n_features_in_]
    totals = np.zeros(model.n_features_in_)

    def walk(tree):
        if "leaf" in tree:
            return
        totals[tree["feature"]] += tree["gain"]
        walk(tree["left"])
        walk(tree["right"])

    for tree in model.trees_:
        walk(tree)
    total = totals.sum()
    if total > 0:
        totals = totals * (100.0 / total)
    return {name: float(totals[i]) for i, name in enumerate(feature_names)}


def random_baseline(n: int, p: float = 0.15, seed: int = 0) -> np.ndarray:
    """I.i.d. Bernoulli(p) predictions, reproducible by seed."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    return (rng.random(n) < p).astype(np.int64)


@dataclass
class TrainedModel:
    """A fitted classifier plus its scaler and the raw-feature columns it
    consumes."""

    kind: str
    estimator: LogisticRegressionClassifier | GradientBoostedTreesClassifier
    scaler: MinMaxScaler
    feature_indices: tuple[int, ...]

    def _matrix(self, X_raw: np.ndarray) -> np.ndarray:
        X = np.asarray(X_raw, dtype=np.float64)
        if X.shape[1] == len(self.feature_indices):
            sub = X
        elif X.shape[1] == len(FEATURE_NAMES):
            sub = X[:, self.feature_indices]
        else:
            raise ValueError(f"expected {len(FEATURE_NAMES)} raw or "
                             f"{len(self.feature_indices)} selected features")
        return self.scaler.transform(sub)

    def predict_proba(self, X_raw) -> np.ndarray:
        return self.estimator.predict_proba(self._matrix(X_raw))[:, 1]

    def predict(self, X_raw, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X_raw) >= threshold).astype(np.int64)


def make_estimator(kind: str, config: dict, n_trees: int | None = None):
    if kind == "logreg":
        return LogisticRegressionClassifier(
            C=float(config.get("C", 1.0)),
            class_weights=tuple(config.get("class_weights", (0.5, 0.5))),
        )
    if kind == "gbt":
        return GradientBoostedTreesClassifier(
            n_trees=int(config.get("n_trees", n_trees if n_trees else 1000)),
            learning_rate=float(config.get("learning_rate", 0.1)),
            max_depth=int(config.get("max_depth", 5)),
            min_child_weight=float(config.get("min_child_weight", 3.0)),
            pos_weight=float(config.get("pos_weight", 1.0)),
        )
    raise ValueError(f"unknown model kind: {kind}")


def fit_model(kind: str, config: dict, train_rows, feature_indices=None,
              n_trees: int | None = None) -> TrainedModel:
    indices = tuple(feature_indices) if feature_indices is not None \
        else tuple(range(len(FEATURE_NAMES)))
    X, y = rows_to_xy(train_rows)
    X = X[:, indices]
    scaler = MinMaxScaler().fit(X)
    estimator = make_estimator(kind, config, n_trees=n_trees)
    estimator.fit(scaler.transform(X), y)
    return TrainedModel(kind=kind, estimator=estimator, scaler=scaler,
                        feature_indices=indices)


def grid_search(train_rows, validation_rows, grid, kind: str,
                feature_indices=None, n_trees: int | None = None):
    """Exhaustive search maximizing validation F1 over all words; ties keep
    the earliest grid entry. The returned model is fit on the training rows."""
    from .evaluation import f1

    grid = list(grid)
    if not grid:
        raise ValueError("hyperparameter grid is empty")
    X_val, y_val = rows_to_xy(validation_rows)
    best_score = -1.0
    best_model = None
    best_config = None
    results = []
    for config in grid:
        model = fit_model(kind, config, train_rows, feature_indices, n_trees=n_trees)
        score = f1(model.predict(X_val), y_val)
        results.append({"config": config, "validation_f1": score})
        if score > best_score:
            best_score, best_model, best_config = score, model, config
    return best_model, best_config, results


def _tree_to_json(tree):
    if "leaf" in tree:
        return {"leaf": tree["leaf"]}
    return {
        "feature": tree["feature"],
        "threshold": tree["threshold"],
        "gain": tree["gain"],
        "left": _tree_to_json(tree["left"]),
        "right": _tree_to_json(tree["right"]),
    }


def save_model(model: TrainedModel, path) -> None:
    payload = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "kind": model.kind,
        "feature_indices": list(model.feature_indices),
        "scaler": {
            "min": model.scaler.data_min_.tolist(),
            "max": model.scaler.data_max_.tolist(),
        },
    }
    est = model.estimator
    if model.kind == "logreg":
        payload["config"] = {"C": est.C, "class_weights": list(est.class_weights)}
        payload["weights"] = est.coef_.tolist()
        payload["bias"] = est.intercept_
    else:
        payload["config"] = {
            "n_trees": est.n_trees, "learning_rate": est.learning_rate,
            "max_depth": est.max_depth, "min_child_weight": est.min_child_weight,
            "pos_weight": est.pos_weight, "reg_lambda": est.reg_lambda,
            "base_score": est.base_score,
        }
        payload["trees"] = [_tree_to_json(t) for t in est.trees_]
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema in {path}")
    scaler = MinMaxScaler()
    scaler.data_min_ = np.array(payload["scaler"]["min"], dtype=np.float64)
    scaler.data_max_ = np.array(payload["scaler"]["max"], dtype=np.float64)
    span = scaler.data_max_ - scaler.data_min_
    scaler.scale_ = np.where(span > 0, span, 1.0)
    kind = payload["kind"]
    config = payload["config"]
    if kind == "logreg":
        est = LogisticRegressionClassifier(
            C=config["C"], class_weights=tuple(config["class_weights"]))
        est.coef_ = np.array(payload["weights"], dtype=np.float64)
        est.intercept_ = float(payload["bias"])
        est.n_features_in_ = est.coef_.size
    elif kind == "gbt":
        est = GradientBoostedTreesClassifier(**config)
        est.trees_ = payload["trees"]
        est.base_margin_ = math.log(est.base_score / (1.0 - est.base_score))
        est.n_features_in_ = len(payload["feature_indices"])
    else:
        raise ValueError(f"unknown model kind in {path}: {kind}")
    return TrainedModel(kind=kind, estimator=est, scaler=scaler,
                        feature_indices=tuple(payload["feature_indices"]))
