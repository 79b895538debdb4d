"""Random forest over feature vectors, written against numpy only.

Axis-aligned threshold splits on the Gini criterion, bootstrap bagging,
sqrt-of-features candidate sampling per node. Determinism is part of the
contract: every tree draws from numpy's default_rng seeded with
[train_seed, tree_index], so training order (or parallel scheduling) cannot
change the model, and serialized models round-trip byte-identically.

Class convention throughout: y is a 0/1 integer array, 1 = Affiliate.
Ties lean positive: leaves with equal class counts predict 1, and a forest
score of exactly 0.5 labels Affiliate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .features import FEATURE_NAMES, FEATURE_SCHEMA_VERSION, FeatureVector

# Full hyperparameter grid used by `affaudit train` unless one is supplied.
DEFAULT_GRID = tuple(
    {"n_trees": n, "max_depth": d, "min_samples_leaf": l}
    for n in (50, 100, 200)
    for d in (4, 8, 16, None)
    for l in (1, 5)
)

# Small documented grid for pipeline runs and the bundled-corpus checks,
# where the full grid would dominate the runtime budget.
REDUCED_GRID = (
    {"n_trees": 50, "max_depth": None, "min_samples_leaf": 1},
    {"n_trees": 50, "max_depth": 12, "min_samples_leaf": 1},
)

_UNDERSAMPLE_STREAM = 1_000_000
_CV_STREAM = 1_000_001


@dataclass(frozen=True, slots=True)
class TrainConfig:
    n_trees: int
    max_depth: int | None
    min_samples_leaf: int

    def size_key(self):
        depth = math.inf if self.max_depth is None else self.max_depth
        return (self.n_trees, depth, self.min_samples_leaf)


@dataclass
class TreeNode:
    """Internal split (feature, threshold, children) or leaf (prediction)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    prediction: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.prediction is not None


@dataclass
class ForestModel:
    trees: list[TreeNode]
    config: TrainConfig
    feature_schema_version: int
    train_seed: int

    @property
    def n_trees(self) -> int:
        return len(self.trees)


@dataclass
class FoldMetrics:
    fold: int
    precision: float
    recall: float
    f1: float


@dataclass
class CVReport:
    chosen: TrainConfig
    folds: list[FoldMetrics]
    grid_mean_f1: list[tuple[TrainConfig, float]]


def _gini_best_split(x: np.ndarray, y: np.ndarray, min_leaf: int):
    """Best (threshold, weighted_gini) for one feature column, or None."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    n = len(ys)
    # prefix positive counts; split i puts items [0..i] left
    pos_prefix = np.cumsum(ys)
    total_pos = pos_prefix[-1]
    left_n = np.arange(1, n)
    right_n = n - left_n
    valid = (xs[:-1] < xs[1:]) & (left_n >= min_leaf) & (right_n >= min_leaf)
    if not np.any(valid):
        return None
    left_pos = pos_prefix[:-1]
    right_pos = total_pos - left_pos
    with np.errstate(invalid="ignore"):
        p_left = left_pos / left_n
        p_right = right_pos / right_n
    gini_left = 1.0 - p_left**2 - (1.0 - p_left) ** 2
    gini_right = 1.0 - p_right**2 - (1.0 - p_right) ** 2
    weighted = (left_n * gini_left + right_n * gini_right) / n
    weighted[~valid] = np.inf
    best = int(np.argmin(weighted))
    lo, hi = xs[best], xs[best + 1]
    threshold = lo + (hi - lo) / 2.0
    if threshold >= hi:  # adjacent floats collapsed the midpoint
        threshold = lo
    return float(threshold), float(weighted[best])


def _grow(X: np.ndarray, y: np.ndarray, depth: int, config: TrainConfig, rng: np.random.Generator) -> TreeNode:
    n, n_features = X.shape
    pos = int(y.sum())
    if pos == 0 or pos == n or (config.max_depth is not None and depth >= config.max_depth) \
            or n < 2 * config.min_samples_leaf:
        return TreeNode(prediction=1 if 2 * pos >= n else 0)
    n_candidates = max(1, math.ceil(math.sqrt(n_features)))
    candidates = rng.choice(n_features, size=n_candidates, replace=False)
    best = None
    for feature in candidates:
        found = _gini_best_split(X[:, feature], y, config.min_samples_leaf)
        if found is None:
            continue
        threshold, impurity = found
        if best is None or impurity < best[2]:
            best = (int(feature), threshold, impurity)
    if best is None:
        return TreeNode(prediction=1 if 2 * pos >= n else 0)
    feature, threshold, _ = best
    mask = X[:, feature] <= threshold
    left = _grow(X[mask], y[mask], depth + 1, config, rng)
    right = _grow(X[~mask], y[~mask], depth + 1, config, rng)
    return TreeNode(feature=feature, threshold=threshold, left=left, right=right)


def _fit_tree(X: np.ndarray, y: np.ndarray, config: TrainConfig, rng: np.random.Generator) -> TreeNode:
    sample = rng.integers(0, len(y), len(y))
    return _grow(X[sample], y[sample], 0, config, rng)


def fit_forest(X: np.ndarray, y: np.ndarray, config: TrainConfig, seed_path: tuple[int, ...]) -> list[TreeNode]:
    """Fit config.n_trees trees; tree t draws from default_rng([*seed_path, t])."""
    return [
        _fit_tree(X, y, config, np.random.default_rng([*seed_path, t]))
        for t in range(config.n_trees)
    ]


def _walk(node: TreeNode, row: np.ndarray) -> int:
    while not node.is_leaf:
        node = node.left if row[node.feature] <= node.threshold else node.right
    return node.prediction


def predict_scores(trees: list[TreeNode], X: np.ndarray) -> np.ndarray:
    """Fraction of trees voting positive, per row."""
    votes = np.zeros(len(X))
    for tree in trees:
        votes += np.fromiter((_walk(tree, row) for row in X), dtype=float, count=len(X))
    return votes / len(trees)


def predict(model: ForestModel, fv: FeatureVector) -> tuple[str, float]:
    """(label, score): score is the Affiliate vote fraction, >= 0.5 wins."""
    if model.feature_schema_version != FEATURE_SCHEMA_VERSION:
        raise ValueError(
            f"model built for feature schema {model.feature_schema_version}, "
            f"this build uses {FEATURE_SCHEMA_VERSION}"
        )
    score = float(predict_scores(model.trees, fv.to_array()[None, :])[0])
    return ("Affiliate" if score >= 0.5 else "NonAffiliate"), score


def predict_batch(model: ForestModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if model.feature_schema_version != FEATURE_SCHEMA_VERSION:
        raise ValueError("feature schema mismatch")
    scores = predict_scores(model.trees, X)
    return (scores >= 0.5).astype(int), scores


def undersample_majority(y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Indices keeping all minority rows and an equal-size majority draw."""
    pos = np.flatnonzero(y == 1)
    neg = np.flatnonzero(y == 0)
    if len(pos) == len(neg):
        return np.arange(len(y))
    minority, majority = (pos, neg) if len(pos) < len(neg) else (neg, pos)
    kept = rng.choice(majority, size=len(minority), replace=False)
    return np.sort(np.concatenate([minority, kept]))


def stratified_kfold(y: np.ndarray, k: int, rng: np.random.Generator) -> list[np.ndarray]:
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(len(idx))]
        for j, i in enumerate(idx):
            folds[j % k].append(int(i))
    return [np.array(sorted(f), dtype=int) for f in folds]


def precision_recall_f1(y_true: np.ndarray, y_pred: np.ndarray) -> tuple[float, float, float]:
    """Positive-class metrics with the 0-when-undefined convention."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def train_forest(
    X: np.ndarray,
    y: np.ndarray,
    grid=DEFAULT_GRID,
    seed: int = 0,
    n_folds: int = 5,
) -> tuple[ForestModel, CVReport]:
    """Grid search by mean CV F1, then fit the winner on all training data.

    The training set is first balanced by undersampling the majority class.
    Grid ties go to the smaller model: fewer trees, then shallower, then the
    smaller leaf bound, then grid order.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if len(set(y.tolist())) < 2:
        raise ValueError("training data has a single class")
    configs = [c if isinstance(c, TrainConfig) else TrainConfig(**c) for c in grid]
    if not configs:
        raise ValueError("empty hyperparameter grid")

    keep = undersample_majority(y, np.random.default_rng([seed, _UNDERSAMPLE_STREAM]))
    Xb, yb = X[keep], y[keep]

    folds = stratified_kfold(yb, n_folds, np.random.default_rng([seed, _CV_STREAM]))
    fold_metrics_by_config: list[list[FoldMetrics]] = []
    mean_f1s: list[float] = []
    for ci, config in enumerate(configs):
        metrics = []
        for fi in range(n_folds):
            val_idx = folds[fi]
            train_idx = np.concatenate([folds[j] for j in range(n_folds) if j != fi])
            trees = fit_forest(Xb[train_idx], yb[train_idx], config, (seed, ci, fi))
            pred = (predict_scores(trees, Xb[val_idx]) >= 0.5).astype(int)
            p, r, f1 = precision_recall_f1(yb[val_idx], pred)
            metrics.append(FoldMetrics(fi, p, r, f1))
        fold_metrics_by_config.append(metrics)
        mean_f1s.append(sum(m.f1 for m in metrics) / n_folds)

    best_ci = min(
        range(len(configs)),
        key=lambda ci: (-mean_f1s[ci], *configs[ci].size_key(), ci),
    )
    chosen = configs[best_ci]
    trees = fit_forest(Xb, yb, chosen, (seed,))
    model = ForestModel(trees, chosen, FEATURE_SCHEMA_VERSION, seed)
    report = CVReport(
        chosen=chosen,
        folds=fold_metrics_by_config[best_ci],
        grid_mean_f1=list(zip(configs, mean_f1s)),
    )
    return model, report


def _tree_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"leaf": node.prediction}
    return {
        "f": node.feature,
        "t": node.threshold,
        "l": _tree_to_dict(node.left),
        "r": _tree_to_dict(node.right),
    }


def _tree_from_dict(obj: dict) -> TreeNode:
    if "leaf" in obj:
        return TreeNode(prediction=obj["leaf"])
    return TreeNode(
        feature=obj["f"],
        threshold=obj["t"],
        left=_tree_from_dict(obj["l"]),
        right=_tree_from_dict(obj["r"]),
    )


def model_to_dict(model: ForestModel) -> dict:
    return {
        "format": "affaudit-forest",
        "feature_schema_version": model.feature_schema_version,
        "feature_names": list(FEATURE_NAMES),
        "train_seed": model.train_seed,
        "config": {
            "n_trees": model.config.n_trees,
            "max_depth": model.config.max_depth,
            "min_samples_leaf": model.config.min_samples_leaf,
        },
        "trees": [_tree_to_dict(t) for t in model.trees],
    }


def model_from_dict(obj: dict) -> ForestModel:
    if obj.get("format") != "affaudit-forest":
        raise ValueError("not a forest model file")
    config = TrainConfig(**obj["config"])
    return ForestModel(
        trees=[_tree_from_dict(t) for t in obj["trees"]],
        config=config,
        feature_schema_version=obj["feature_schema_version"],
        train_seed=obj["train_seed"],
    )


def save_model(model: ForestModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> ForestModel:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class HoldoutMetrics:
    name: str
    n: int
    precision: float
    recall: float
    f1: float
    baseline_precision: float
    baseline_recall: float
    baseline_f1: float


def evaluate_holdouts(
    model: ForestModel,
    holdouts: dict[str, tuple[np.ndarray, np.ndarray]],
    baselines: dict[str, np.ndarray],
) -> list[HoldoutMetrics]:
    """Model vs. phase-1 baseline on each named holdout.

    holdouts maps name -> (X, y_true); baselines maps name -> 0/1 predictions
    from the pattern registry alone (Unknown counted as 0).
    """
    out = []
    for name, (X, y_true) in holdouts.items():
        if len(y_true) == 0:
            raise ValueError(f"holdout {name!r} is empty")
        pred, _ = predict_batch(model, X)
        p, r, f1 = precision_recall_f1(y_true, pred)
        bp, br, bf1 = precision_recall_f1(y_true, baselines[name])
        out.append(HoldoutMetrics(name, len(y_true), p, r, f1, bp, br, bf1))
    return out
