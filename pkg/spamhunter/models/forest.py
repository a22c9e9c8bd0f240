import logging
import math

from joblib import Parallel, delayed
import numpy as np

from spamhunter.exceptions import InputError
from spamhunter.models.base import DECISION_THRESHOLD, SpamModel
from spamhunter.models.tree import TreeNodes, grow_tree

logger = logging.getLogger(__name__)


def tree_seed(seed: int, i: int) -> int:
    return seed ^ i


def _grow_bootstrap_tree(X, y, seed, max_depth, min_leaf, max_features):
    rng = np.random.default_rng(seed)
    sample = rng.integers(0, len(y), len(y))
    return grow_tree(X[sample], y[sample], max_depth, min_leaf, max_features, rng)


class RandomForest(SpamModel):
    """Bagged CART trees with ``sqrt(d)`` features tried per split.

    The score is the fraction of trees voting spammer. Tree ``i`` draws its
    bootstrap sample and feature subsets from ``seed ^ i`` only, so the
    forest does not depend on the number of jobs.
    """

    NAME = "random_forest"
    DEFAULTS = dict(n_trees=100, max_depth=None, min_leaf=1)

    def _fit(self, X, y):
        n_trees = self.config["n_trees"]
        if n_trees < 1:
            raise InputError(f"n_trees must be positive, got {n_trees}")
        max_features = max(1, int(math.isqrt(X.shape[1])))
        logger.debug("growing %d trees with %d features per split", n_trees, max_features)
        self.trees = Parallel(n_jobs=self.jobs)(
            delayed(_grow_bootstrap_tree)(
                X,
                y,
                tree_seed(self.seed, i),
                self.config["max_depth"],
                self.config["min_leaf"],
                max_features,
            )
            for i in range(n_trees)
        )

    def votes(self, X) -> np.ndarray:
        return np.stack([tree.apply(X) > DECISION_THRESHOLD for tree in self.trees], axis=1)

    def predict_proba(self, X):
        return self.votes(X).mean(axis=1)

    def _params(self):
        return dict(trees=[tree.to_dict() for tree in self.trees])

    def _load_params(self, params):
        self.trees = [TreeNodes.from_dict(t) for t in params["trees"]]
