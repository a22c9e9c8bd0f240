from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging
import warnings

from joblib import Parallel, delayed
import numpy as np
from sklearn.model_selection import StratifiedKFold

from spamhunter.exceptions import InputError, TrainingError
from spamhunter.models.base import train
from spamhunter.preprocessing.datasets.base import SPAMMER, Dataset
from spamhunter.preprocessing.structures import AccountClass

logger = logging.getLogger(__name__)

ALL_FOLDS = "all"


@dataclass(frozen=True)
class ConfusionCounts:
    """Confusion counts with the spammer class as positive."""

    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise InputError(f"negative confusion count in {self}")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_predictions(cls, y_true, y_pred) -> "ConfusionCounts":
        y_true = np.asarray(y_true) == SPAMMER
        y_pred = np.asarray(y_pred) == SPAMMER
        return cls(
            int(np.sum(y_true & y_pred)),
            int(np.sum(~y_true & y_pred)),
            int(np.sum(~y_true & ~y_pred)),
            int(np.sum(y_true & ~y_pred)),
        )


class Metrics(NamedTuple):
    fp_rate: float
    recall: float
    precision: float
    f1: float


def _ratio(numerator, denominator) -> float:
    return numerator / denominator if denominator else 0.0


def metrics(c: ConfusionCounts) -> Metrics:
    """Spammer-class metrics; any 0/0 is 0."""
    recall = _ratio(c.tp, c.tp + c.fn)
    precision = _ratio(c.tp, c.tp + c.fp)
    return Metrics(
        fp_rate=_ratio(c.fp, c.fp + c.tn),
        recall=recall,
        precision=precision,
        f1=_ratio(2 * precision * recall, precision + recall),
    )


@dataclass(frozen=True)
class FoldResult:
    fold: int
    counts: Optional[ConfusionCounts]
    # compromised accounts of the test fold flagged as spammers
    compromised_flagged: int = 0
    error: str = ""

    @property
    def failed(self) -> bool:
        return self.counts is None


@dataclass
class EvalReport:
    algorithm: str
    feature_set: str
    seed: int
    folds: List[FoldResult] = field(default_factory=list)

    @property
    def counts(self) -> ConfusionCounts:
        """Counts summed over the successful folds (micro aggregation)."""
        return sum((f.counts for f in self.folds if not f.failed), ConfusionCounts())

    @property
    def metrics(self) -> Metrics:
        return metrics(self.counts)

    @property
    def partial(self) -> bool:
        return any(f.failed for f in self.folds)

    @property
    def compromised_flagged(self) -> int:
        return sum(f.compromised_flagged for f in self.folds)


def kfold_split(ds: Dataset, k: int, seed: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Stratified, shuffled ``k``-fold partition as (train, test) index arrays."""
    if k < 2:
        raise InputError(f"k must be at least 2, got {k}")
    if len(ds) < k:
        raise InputError(f"cannot split {len(ds)} examples into {k} folds")
    smallest = min(int(np.sum(ds.y == c)) for c in np.unique(ds.y))
    if smallest < k:
        logger.warning("smallest class has %d examples, some of the %d folds lack it", smallest, k)
    if max(int(np.sum(ds.y == c)) for c in np.unique(ds.y)) < k:
        return _deal_folds(ds.y, k, seed)
    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return list(splitter.split(np.zeros(len(ds)), ds.y))


def _deal_folds(y: np.ndarray, k: int, seed: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Shuffled indices of each class dealt round-robin over the folds, one
    running position across classes so no fold stays empty."""
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(y), dtype=int)
    position = 0
    for c in np.unique(y):
        members = rng.permutation(np.flatnonzero(y == c))
        fold_of[members] = (position + np.arange(len(members))) % k
        position += len(members)
    everything = np.arange(len(y))
    return [(everything[fold_of != f], everything[fold_of == f]) for f in range(k)]


def evaluate_fold(
    ds: Dataset,
    fold: int,
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    algorithm: str,
    config: Optional[dict],
    seed: int,
) -> FoldResult:
    try:
        model = train(ds.subset(train_idx), algorithm, config, seed)
    except TrainingError as e:
        logger.warning("%s fold %d failed: %s", algorithm, fold, e)
        return FoldResult(fold, None, error=str(e))
    test = ds.subset(test_idx)
    predicted = model.predict_classes(test.X)
    flagged = sum(
        1
        for c, p in zip(test.classes, predicted)
        if c is AccountClass.COMPROMISED and p == SPAMMER
    )
    return FoldResult(fold, ConfusionCounts.from_predictions(test.y, predicted), flagged)


def cross_validate(
    ds: Dataset,
    algorithm: str,
    feature_set: Sequence[str],
    k: int = 10,
    seed: int = 0,
    config: Optional[dict] = None,
    feature_set_name: str = "custom",
    jobs: int = 1,
) -> EvalReport:
    projected = ds.project(feature_set)
    splits = kfold_split(projected, k, seed)
    folds = Parallel(n_jobs=jobs)(
        delayed(evaluate_fold)(projected, i, tr, te, algorithm, config, seed)
        for i, (tr, te) in enumerate(splits)
    )
    report = EvalReport(algorithm, feature_set_name, seed, list(folds))
    m = report.metrics
    logger.info(
        "%s on %s: f1 %.4f, recall %.4f, fp rate %.4f%s",
        algorithm,
        feature_set_name,
        m.f1,
        m.recall,
        m.fp_rate,
        " (partial)" if report.partial else "",
    )
    return report


def compare(
    ds: Dataset,
    algorithms: Sequence[str],
    feature_sets: Dict[str, Sequence[str]],
    k: int = 10,
    seed: int = 0,
    configs: Optional[Dict[str, dict]] = None,
    jobs: int = 1,
) -> List[EvalReport]:
    """One report per (algorithm, feature set), algorithms varying fastest."""
    configs = configs or dict()
    return [
        cross_validate(ds, algo, names, k, seed, configs.get(algo), set_name, jobs)
        for set_name, names in feature_sets.items()
        for algo in algorithms
    ]
