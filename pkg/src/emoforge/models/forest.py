"""Random forest: bagged Gini trees with per-split feature subsampling."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ParameterError
from .base import ProbabilisticClassifier, check_training_labels
from .tree import TreeNodes, grow_tree, pack_trees, unpack_trees


class RandomForest(ProbabilisticClassifier):
    """Ensemble of trees fit on bootstrap resamples.

    Each split considers ceil(sqrt(d)) randomly drawn features. Prediction
    averages the per-tree leaf class distributions (a soft vote; the argmax
    coincides with the hard majority when leaves are pure). Tree t draws all
    of its randomness from a generator seeded with seed + t, so fitting is
    reproducible and could run tree-parallel without changing the result.
    ``bootstrap=False`` with ``max_features=None`` reduces the forest to a
    single deterministic tree per member.
    """

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = 16,
        min_samples_leaf: int = 1,
        seed: int = 0,
        bootstrap: bool = True,
        max_features: int | str | None = "sqrt",
        n_classes: int | None = None,
    ):
        if n_trees < 1:
            raise ParameterError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.bootstrap = bootstrap
        self.max_features = max_features
        self.n_classes = n_classes
        self.trees_: list[TreeNodes] = []

    def _resolve_max_features(self, n_features: int) -> int | None:
        if self.max_features == "sqrt":
            return math.ceil(math.sqrt(n_features))
        if self.max_features is None:
            return None
        return int(self.max_features)

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        self.n_classes = check_training_labels(y, self.n_classes)
        n = X.shape[0]
        max_features = self._resolve_max_features(X.shape[1])
        self.trees_ = []
        for t in range(self.n_trees):
            rng = np.random.default_rng(self.seed + t)
            if self.bootstrap:
                sample = rng.integers(0, n, size=n)
                Xs, ys = X[sample], y[sample]
            else:
                Xs, ys = X, y
            self.trees_.append(
                grow_tree(
                    Xs,
                    ys,
                    task="classification",
                    n_classes=self.n_classes,
                    max_depth=self.max_depth,
                    min_samples_leaf=self.min_samples_leaf,
                    max_features=max_features,
                    rng=rng,
                )
            )
        return self

    def predict_proba(self, X):
        if not self.trees_:
            raise ParameterError("forest is not fitted")
        X = np.asarray(X, dtype=np.float64)
        total = np.zeros((X.shape[0], self.n_classes), dtype=np.float64)
        for tree in self.trees_:
            total += tree.apply(X)
        return total / len(self.trees_)

    @property
    def feature_importances_(self) -> np.ndarray:
        if not self.trees_:
            raise ParameterError("forest is not fitted")
        return np.sum([t.importances for t in self.trees_], axis=0)

    def state(self) -> tuple[dict, dict[str, np.ndarray]]:
        meta = {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "seed": self.seed,
            "bootstrap": self.bootstrap,
            "max_features": self.max_features,
            "n_classes": self.n_classes,
        }
        return meta, pack_trees(self.trees_)

    @classmethod
    def from_state(cls, meta: dict, arrays: dict[str, np.ndarray]) -> "RandomForest":
        model = cls(**{k: meta[k] for k in (
            "n_trees", "max_depth", "min_samples_leaf", "seed", "bootstrap",
            "max_features", "n_classes",
        )})
        model.trees_ = unpack_trees(arrays)
        return model
