from typing import Dict, Optional, Sequence
import logging

import numpy as np

from spamhunter.exceptions import InputError, TrainingError
from spamhunter.features.base import FeatureVector
from spamhunter.preprocessing.structures import AccountClass

logger = logging.getLogger(__name__)

SPAMMER = 1
NON_SPAMMER = 0


class Dataset:
    """Feature matrix with binary targets (1 = spammer) in canonical feature order.

    The original three-way classes are kept in ``classes`` for error analysis.
    """

    def __init__(
        self,
        X: np.ndarray,
        y: np.ndarray,
        feature_names: Sequence[str],
        account_ids: Optional[Sequence[str]] = None,
        classes: Optional[Sequence[AccountClass]] = None,
    ):
        self.X = np.asarray(X, dtype=float).reshape(len(y), len(feature_names))
        self.y = np.asarray(y, dtype=int)
        self.feature_names = tuple(feature_names)
        if account_ids is None:
            account_ids = [str(i) for i in range(len(self.y))]
        self.account_ids = tuple(account_ids)
        if classes is None:
            classes = [AccountClass.SPAMMER if v else AccountClass.NON_SPAMMER for v in self.y]
        self.classes = tuple(AccountClass(c) for c in classes)
        if not np.all(np.isfinite(self.X)):
            raise InputError("dataset contains non-finite feature values")
        if not set(np.unique(self.y)) <= {NON_SPAMMER, SPAMMER}:
            raise InputError("targets must be 0 (non-spammer) or 1 (spammer)")

    def __len__(self):
        return len(self.y)

    def __repr__(self):
        return (
            f"Dataset({len(self)} accounts, {len(self.feature_names)} features, "
            f"{int(self.y.sum())} spammers)"
        )

    @classmethod
    def from_vectors(
        cls,
        vectors: Sequence[FeatureVector],
        labels: Dict[str, AccountClass],
        feature_names: Optional[Sequence[str]] = None,
    ) -> "Dataset":
        """Join feature vectors with labels by account id; unlabeled accounts are dropped."""
        labeled = [v for v in vectors if v.account_id in labels]
        if len(labeled) < len(vectors):
            logger.info("%d feature vectors have no label", len(vectors) - len(labeled))
        if not labeled:
            raise InputError("no labeled feature vectors")
        if feature_names is None:
            feature_names = list(labeled[0])
        X = np.array([v.as_array(feature_names) for v in labeled], dtype=float)
        classes = [AccountClass(labels[v.account_id]) for v in labeled]
        y = [SPAMMER if c.binary is AccountClass.SPAMMER else NON_SPAMMER for c in classes]
        return cls(X, y, feature_names, [v.account_id for v in labeled], classes)

    def project(self, names: Sequence[str]) -> "Dataset":
        missing = [n for n in names if n not in self.feature_names]
        if missing:
            raise InputError(f"features not in dataset: {missing}")
        idx = [self.feature_names.index(n) for n in names]
        return Dataset(self.X[:, idx], self.y, names, self.account_ids, self.classes)

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(
            self.X[indices],
            self.y[indices],
            self.feature_names,
            [self.account_ids[i] for i in indices],
            [self.classes[i] for i in indices],
        )

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.feature_names.index(name)]

    def check_trainable(self):
        if len(np.unique(self.y)) < 2:
            raise TrainingError("training needs at least one spammer and one non-spammer")

    def with_labels(self, y) -> "Dataset":
        return Dataset(self.X, y, self.feature_names, self.account_ids)
