from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from spamhunter.exceptions import InputError
from spamhunter.models.base import SpamModel

LEAF = -1


def gini(positives: np.ndarray, counts: np.ndarray) -> np.ndarray:
    p = positives / counts
    return 2.0 * p * (1.0 - p)


def best_split(
    x: np.ndarray, y: np.ndarray, min_leaf: int
) -> Optional[Tuple[float, float]]:
    """Lowest weighted Gini split of one feature as ``(impurity, threshold)``.

    Values ``<= threshold`` go left. Returns None when no split leaves at
    least ``min_leaf`` samples on both sides.
    """
    n = len(y)
    order = np.argsort(x, kind="mergesort")
    xs, ys = x[order], y[order]
    n_left = np.arange(1, n)
    pos_left = np.cumsum(ys)[:-1]
    valid = (xs[:-1] < xs[1:]) & (n_left >= min_leaf) & (n - n_left >= min_leaf)
    if not valid.any():
        return None
    n_right = n - n_left
    pos_right = ys.sum() - pos_left
    impurity = (n_left * gini(pos_left, n_left) + n_right * gini(pos_right, n_right)) / n
    impurity = np.where(valid, impurity, np.inf)
    i = int(np.argmin(impurity))
    # lands in [xs[i], xs[i + 1]) even for adjacent floats
    threshold = xs[i] + (xs[i + 1] - xs[i]) / 2.0
    return float(impurity[i]), float(threshold)


@dataclass
class TreeNodes:
    """Flat array-of-nodes tree; ``feature == LEAF`` marks a leaf."""

    feature: List[int] = field(default_factory=list)
    threshold: List[float] = field(default_factory=list)
    left: List[int] = field(default_factory=list)
    right: List[int] = field(default_factory=list)
    value: List[float] = field(default_factory=list)

    def add(self, value: float) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(float(value))
        return len(self.value) - 1

    def __len__(self):
        return len(self.value)

    @property
    def depth(self) -> int:
        depths = {0: 0}
        for i in range(len(self)):
            if self.feature[i] != LEAF:
                depths[self.left[i]] = depths[self.right[i]] = depths[i] + 1
        return max(depths.values())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf value reached by every row of ``X``."""
        X = np.atleast_2d(X)
        feature = np.array(self.feature)
        threshold = np.array(self.threshold)
        left, right = np.array(self.left), np.array(self.right)
        node = np.zeros(len(X), dtype=int)
        active = feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            n = node[rows]
            goes_left = X[rows, feature[n]] <= threshold[n]
            node[rows] = np.where(goes_left, left[n], right[n])
            active = feature[node] != LEAF
        return np.array(self.value)[node]

    def to_dict(self) -> dict:
        return dict(
            feature=list(self.feature),
            threshold=list(self.threshold),
            left=list(self.left),
            right=list(self.right),
            value=list(self.value),
        )

    @classmethod
    def from_dict(cls, d: dict) -> "TreeNodes":
        return cls(
            [int(v) for v in d["feature"]],
            [float(v) for v in d["threshold"]],
            [int(v) for v in d["left"]],
            [int(v) for v in d["right"]],
            [float(v) for v in d["value"]],
        )


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    max_depth: Optional[int] = None,
    min_leaf: int = 1,
    max_features: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> TreeNodes:
    """Grow a CART tree on Gini impurity; leaves hold the spammer fraction.

    With ``max_features`` each split looks at that many features drawn from
    ``rng``, falling back to the remaining ones only if none of them splits.
    """
    if min_leaf < 1:
        raise InputError(f"min_leaf must be positive, got {min_leaf}")
    if max_depth is not None and max_depth < 0:
        raise InputError(f"max_depth must not be negative, got {max_depth}")
    n_features = X.shape[1]
    nodes = TreeNodes()
    root = nodes.add(y.mean())
    stack = [(root, np.arange(len(y)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        ys = y[idx]
        if (
            (max_depth is not None and depth >= max_depth)
            or len(idx) < 2 * min_leaf
            or ys.min() == ys.max()
        ):
            continue
        if max_features is None or rng is None:
            candidates = np.arange(n_features)
            first = n_features
        else:
            candidates = rng.permutation(n_features)
            first = min(max_features, n_features)
        best = None
        for rank, f in enumerate(candidates):
            if rank >= first and best is not None:
                break
            split = best_split(X[idx, f], ys, min_leaf)
            if split is not None and (best is None or split[0] < best[0]):
                best = (split[0], split[1], int(f))
        if best is None:
            continue
        _, threshold, f = best
        goes_left = X[idx, f] <= threshold
        left_idx, right_idx = idx[goes_left], idx[~goes_left]
        left = nodes.add(y[left_idx].mean())
        right = nodes.add(y[right_idx].mean())
        nodes.feature[node] = f
        nodes.threshold[node] = threshold
        nodes.left[node] = left
        nodes.right[node] = right
        stack.append((right, right_idx, depth + 1))
        stack.append((left, left_idx, depth + 1))
    return nodes


class DecisionTree(SpamModel):
    NAME = "decision_tree"
    DEFAULTS = dict(max_depth=None, min_leaf=1)

    def _fit(self, X, y):
        self.nodes = grow_tree(X, y, self.config["max_depth"], self.config["min_leaf"])

    def predict_proba(self, X):
        return self.nodes.apply(X)

    def _params(self):
        return self.nodes.to_dict()

    def _load_params(self, params):
        self.nodes = TreeNodes.from_dict(params)
