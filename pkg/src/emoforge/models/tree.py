"""CART-style decision trees over flat node arrays.

Both tree flavors share one builder: classification trees split on Gini
impurity and keep class distributions at the leaves, regression trees split
on variance and keep means. Candidate thresholds are midpoints between
consecutive distinct sorted feature values; equal-gain ties resolve to the
lowest feature index, then the lowest threshold (features are scanned in
ascending order and only strictly better splits replace the incumbent).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from .base import ProbabilisticClassifier, check_training_labels, one_hot

_NO_FEATURE = -1


@dataclass
class TreeNodes:
    """Flat tree storage; feature == -1 marks a leaf."""

    feature: np.ndarray  # (n_nodes,) int64
    threshold: np.ndarray  # (n_nodes,) float64
    left: np.ndarray  # (n_nodes,) int64
    right: np.ndarray  # (n_nodes,) int64
    value: np.ndarray  # (n_nodes, value_dim) float64
    importances: np.ndarray  # (n_features,) unnormalized impurity decrease

    @property
    def n_nodes(self) -> int:
        return int(self.feature.size)

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Route every row to its leaf value, shape (N, value_dim)."""
        X = np.asarray(X, dtype=np.float64)
        idx = np.zeros(X.shape[0], dtype=np.int64)
        while True:
            feats = self.feature[idx]
            active = feats != _NO_FEATURE
            if not active.any():
                break
            rows = np.nonzero(active)[0]
            go_left = X[rows, feats[rows]] <= self.threshold[idx[rows]]
            idx[rows] = np.where(go_left, self.left[idx[rows]], self.right[idx[rows]])
        return self.value[idx]


def _gini(counts: np.ndarray, total: float) -> float:
    if total <= 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.dot(p, p))


def _best_split_classification(
    Xf: np.ndarray, y_hot: np.ndarray, min_samples_leaf: int
) -> tuple[float, float]:
    """Best (gain, threshold) for one feature column; gain <= 0 means none."""
    order = np.argsort(Xf, kind="stable")
    sv = Xf[order]
    cum = np.cumsum(y_hot[order], axis=0)
    n = sv.size
    total = cum[-1]
    # split after position i: left = first i+1 samples
    valid = sv[:-1] < sv[1:]
    sizes_left = np.arange(1, n)
    sizes_right = n - sizes_left
    if min_samples_leaf > 1:
        valid &= (sizes_left >= min_samples_leaf) & (sizes_right >= min_samples_leaf)
    if not valid.any():
        return 0.0, 0.0
    left_counts = cum[:-1]
    right_counts = total[np.newaxis, :] - left_counts
    gini_left = 1.0 - np.sum((left_counts / sizes_left[:, None]) ** 2, axis=1)
    gini_right = 1.0 - np.sum((right_counts / sizes_right[:, None]) ** 2, axis=1)
    weighted = (sizes_left * gini_left + sizes_right * gini_right) / n
    parent = _gini(total, float(n))
    gains = np.where(valid, parent - weighted, -np.inf)
    best = int(np.argmax(gains))  # first max: lowest threshold wins ties
    if not np.isfinite(gains[best]) or gains[best] <= 0.0:
        return 0.0, 0.0
    return float(gains[best]), float(0.5 * (sv[best] + sv[best + 1]))


def _best_split_regression(
    Xf: np.ndarray, y: np.ndarray, min_samples_leaf: int
) -> tuple[float, float]:
    order = np.argsort(Xf, kind="stable")
    sv = Xf[order]
    ys = y[order]
    n = sv.size
    cum = np.cumsum(ys)
    cum2 = np.cumsum(ys**2)
    valid = sv[:-1] < sv[1:]
    sizes_left = np.arange(1, n)
    sizes_right = n - sizes_left
    if min_samples_leaf > 1:
        valid &= (sizes_left >= min_samples_leaf) & (sizes_right >= min_samples_leaf)
    if not valid.any():
        return 0.0, 0.0
    sum_left = cum[:-1]
    sum_right = cum[-1] - sum_left
    sq_left = cum2[:-1]
    sq_right = cum2[-1] - sq_left
    var_left = sq_left / sizes_left - (sum_left / sizes_left) ** 2
    var_right = sq_right / sizes_right - (sum_right / sizes_right) ** 2
    weighted = (sizes_left * var_left + sizes_right * var_right) / n
    parent = float(np.var(ys))
    gains = np.where(valid, parent - weighted, -np.inf)
    best = int(np.argmax(gains))
    if not np.isfinite(gains[best]) or gains[best] <= 0.0:
        return 0.0, 0.0
    return float(gains[best]), float(0.5 * (sv[best] + sv[best + 1]))


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    task: str,
    n_classes: int = 0,
    max_depth: int | None = None,
    min_samples_leaf: int = 1,
    max_features: int | None = None,
    rng: np.random.Generator | None = None,
) -> TreeNodes:
    """Grow one tree. ``y`` is class indices (classification) or targets
    (regression). ``max_features`` draws that many split candidates per node
    from ``rng``; None considers every feature."""
    X = np.asarray(X, dtype=np.float64)
    n_samples, n_features = X.shape
    depth_cap = np.inf if max_depth is None else max_depth
    if task == "classification":
        y = np.asarray(y, dtype=np.int64)
        y_hot = one_hot(y, n_classes)
        value_dim = n_classes
    elif task == "regression":
        y = np.asarray(y, dtype=np.float64)
        y_hot = None
        value_dim = 1
    else:
        raise ParameterError(f"unknown tree task {task!r}")
    if max_features is not None and rng is None:
        raise ParameterError("feature subsampling requires an rng")

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[np.ndarray] = []
    importances = np.zeros(n_features, dtype=np.float64)

    def node_value(idx: np.ndarray) -> np.ndarray:
        if task == "classification":
            counts = y_hot[idx].sum(axis=0)
            return counts / counts.sum()
        return np.array([y[idx].mean()])

    def node_impurity(idx: np.ndarray) -> float:
        if task == "classification":
            return _gini(y_hot[idx].sum(axis=0), float(idx.size))
        return float(np.var(y[idx]))

    # stack of (sample indices, depth, parent node id, is_left_child)
    stack: list[tuple[np.ndarray, int, int, bool]] = [
        (np.arange(n_samples), 0, -1, False)
    ]
    while stack:
        idx, depth, parent, is_left = stack.pop()
        node_id = len(feature)
        if parent >= 0:
            if is_left:
                left[parent] = node_id
            else:
                right[parent] = node_id

        impurity = node_impurity(idx)
        splittable = (
            idx.size >= 2 * min_samples_leaf
            and depth < depth_cap
            and impurity > 0.0
        )
        best_gain, best_thr, best_feat = 0.0, 0.0, _NO_FEATURE
        if splittable:
            if max_features is not None and max_features < n_features:
                candidates = np.sort(rng.choice(n_features, size=max_features, replace=False))
            else:
                candidates = np.arange(n_features)
            for f in candidates:
                col = X[idx, f]
                if task == "classification":
                    gain, thr = _best_split_classification(col, y_hot[idx], min_samples_leaf)
                else:
                    gain, thr = _best_split_regression(col, y[idx], min_samples_leaf)
                if gain > best_gain:
                    best_gain, best_thr, best_feat = gain, thr, int(f)

        if best_feat == _NO_FEATURE:
            feature.append(_NO_FEATURE)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(node_value(idx))
            continue

        importances[best_feat] += (idx.size / n_samples) * best_gain
        feature.append(best_feat)
        threshold.append(best_thr)
        left.append(-1)
        right.append(-1)
        value.append(node_value(idx))
        mask = X[idx, best_feat] <= best_thr
        # push right first so the left child is processed (and numbered) next
        stack.append((idx[~mask], depth + 1, node_id, False))
        stack.append((idx[mask], depth + 1, node_id, True))

    return TreeNodes(
        feature=np.asarray(feature, dtype=np.int64),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        value=np.vstack(value),
        importances=importances,
    )


def pack_trees(trees: list[TreeNodes]) -> dict[str, np.ndarray]:
    """Concatenate trees into offset-indexed flat arrays for serialization."""
    offsets = np.cumsum([0] + [t.n_nodes for t in trees])
    return {
        "offsets": offsets.astype(np.int64),
        "feature": np.concatenate([t.feature for t in trees]),
        "threshold": np.concatenate([t.threshold for t in trees]),
        "left": np.concatenate([t.left for t in trees]),
        "right": np.concatenate([t.right for t in trees]),
        "value": np.vstack([t.value for t in trees]),
        "importances": np.vstack([t.importances for t in trees]),
    }


def unpack_trees(arrays: dict[str, np.ndarray]) -> list[TreeNodes]:
    offsets = arrays["offsets"]
    trees = []
    for i in range(offsets.size - 1):
        lo, hi = int(offsets[i]), int(offsets[i + 1])
        trees.append(
            TreeNodes(
                feature=arrays["feature"][lo:hi],
                threshold=arrays["threshold"][lo:hi],
                left=arrays["left"][lo:hi],
                right=arrays["right"][lo:hi],
                value=arrays["value"][lo:hi],
                importances=arrays["importances"][i],
            )
        )
    return trees


class DecisionTreeClassifier(ProbabilisticClassifier):
    """Single Gini tree; building block for the forest and a model on its own."""

    def __init__(
        self,
        max_depth: int | None = None,
        min_samples_leaf: int = 1,
        n_classes: int | None = None,
    ):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.n_classes = n_classes
        self.tree_: TreeNodes | None = None

    def fit(self, X, y):
        y = np.asarray(y, dtype=np.int64)
        self.n_classes = check_training_labels(y, self.n_classes)
        self.tree_ = grow_tree(
            X,
            y,
            task="classification",
            n_classes=self.n_classes,
            max_depth=self.max_depth,
            min_samples_leaf=self.min_samples_leaf,
        )
        return self

    def predict_proba(self, X):
        if self.tree_ is None:
            raise ParameterError("tree is not fitted")
        return self.tree_.apply(X)
