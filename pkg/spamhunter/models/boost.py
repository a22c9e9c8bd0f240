from dataclasses import dataclass
from typing import Tuple
import logging
import math

import numpy as np
from scipy.special import expit

from spamhunter.exceptions import InputError
from spamhunter.models.base import SpamModel

logger = logging.getLogger(__name__)

# stand-in weighted error for a perfect stump
MIN_ERROR = 1e-10


@dataclass(frozen=True)
class Stump:
    feature: int
    threshold: float
    polarity: int
    alpha: float

    def vote(self, X: np.ndarray) -> np.ndarray:
        return np.where(X[:, self.feature] <= self.threshold, self.polarity, -self.polarity)

    def to_dict(self):
        return dict(
            feature=self.feature, threshold=self.threshold, polarity=self.polarity, alpha=self.alpha
        )


def fit_stump(X: np.ndarray, signs: np.ndarray, w: np.ndarray) -> Tuple[float, int, float, int]:
    """Decision stump with the least weighted error.

    Returns ``(error, feature, threshold, polarity)``; a polarity of +1 means
    values ``<= threshold`` vote spammer. A threshold at the feature maximum
    gives the constant stump.
    """
    best = None
    total_pos = w[signs > 0].sum()
    total_neg = w[signs < 0].sum()
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="mergesort")
        xs, ss, ws = X[order, f], signs[order], w[order]
        pos_left = np.cumsum(np.where(ss > 0, ws, 0.0))
        neg_left = np.cumsum(np.where(ss < 0, ws, 0.0))
        # split after position i, or after the last one
        valid = np.append(xs[:-1] < xs[1:], True)
        err_pos = neg_left + (total_pos - pos_left)
        err_neg = pos_left + (total_neg - neg_left)
        for polarity, err in ((1, err_pos), (-1, err_neg)):
            err = np.where(valid, err, np.inf)
            i = int(np.argmin(err))
            if best is None or err[i] < best[0]:
                if i + 1 < len(xs):
                    threshold = xs[i] + (xs[i + 1] - xs[i]) / 2.0
                else:
                    threshold = xs[i]
                best = (float(err[i]), f, float(threshold), polarity)
    return best


class AdaBoost(SpamModel):
    """Discrete AdaBoost over decision stumps.

    Boosting stops early on a perfect stump, which is kept, or on a stump no
    better than chance, which is dropped. The score is ``logistic(2 F)`` of the
    weighted vote ``F``; an empty ensemble scores 0.5.
    """

    NAME = "adaboost"
    DEFAULTS = dict(boost_rounds=50)

    def _fit(self, X, y):
        rounds = self.config["boost_rounds"]
        if rounds < 1:
            raise InputError(f"boost_rounds must be positive, got {rounds}")
        signs = np.where(y == 1, 1, -1)
        w = np.full(len(y), 1.0 / len(y))
        self.stumps = []
        for t in range(rounds):
            err, f, threshold, polarity = fit_stump(X, signs, w)
            if err >= 0.5:
                logger.debug("round %d: weighted error %.3f, stopping", t, err)
                break
            perfect = err <= MIN_ERROR
            err = max(err, MIN_ERROR)
            stump = Stump(f, threshold, polarity, 0.5 * math.log((1.0 - err) / err))
            self.stumps.append(stump)
            if perfect:
                logger.debug("round %d: perfect stump, stopping", t)
                break
            w = w * np.exp(-stump.alpha * signs * stump.vote(X))
            w /= w.sum()

    def margin(self, X) -> np.ndarray:
        X = np.atleast_2d(X)
        return sum((s.alpha * s.vote(X) for s in self.stumps), np.zeros(len(X)))

    def predict_proba(self, X):
        return expit(2.0 * self.margin(X))

    def _params(self):
        return dict(stumps=[s.to_dict() for s in self.stumps])

    def _load_params(self, params):
        self.stumps = [
            Stump(int(s["feature"]), float(s["threshold"]), int(s["polarity"]), float(s["alpha"]))
            for s in params["stumps"]
        ]
