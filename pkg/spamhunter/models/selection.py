from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple
import logging

import numpy as np
from scipy.stats import entropy, rankdata

from spamhunter.exceptions import InputError, PresetNotFoundError
from spamhunter.features.catalog import catalog_names
from spamhunter.preprocessing.datasets.base import Dataset
from spamhunter.preprocessing.store import require_file

logger = logging.getLogger(__name__)

INFO_GAIN = "infogain"
CHI_SQUARED = "chi2"
RANKING_METHODS = (INFO_GAIN, CHI_SQUARED)


@dataclass(frozen=True)
class FeatureRanking:
    method: str
    scores: Tuple[Tuple[str, float], ...]

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.scores]

    def top(self, k: int) -> List[str]:
        return self.names[:k]

    def to_rows(self) -> List[dict]:
        return [
            dict(rank=i + 1, feature=name, score=score, method=self.method)
            for i, (name, score) in enumerate(self.scores)
        ]


def discretize(column: np.ndarray, bins: int) -> np.ndarray:
    """Equal-frequency bin of every value; ties share the bin of their lowest rank."""
    ranks = rankdata(column, method="min").astype(int)
    return ((ranks - 1) * bins) // len(column)


def contingency(binned: np.ndarray, y: np.ndarray, bins: int) -> np.ndarray:
    table = np.zeros((bins, 2), dtype=float)
    np.add.at(table, (binned, y), 1.0)
    return table


def class_entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    return float(entropy(counts, base=2))


def information_gain(table: np.ndarray) -> float:
    n = table.sum()
    conditional = sum(row.sum() / n * class_entropy(row) for row in table if row.sum() > 0)
    return max(0.0, class_entropy(table.sum(axis=0)) - conditional)


def chi_squared(table: np.ndarray) -> float:
    n = table.sum()
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / n
    filled = expected > 0
    return float(np.sum((table[filled] - expected[filled]) ** 2 / expected[filled]))


_SCORERS: Dict[str, Callable[[np.ndarray], float]] = {
    INFO_GAIN: information_gain,
    CHI_SQUARED: chi_squared,
}


def rank_features(ds: Dataset, method: str = INFO_GAIN, bins: int = 10) -> FeatureRanking:
    """Score every feature against the class after equal-frequency discretization.

    Ties keep the dataset's feature order.
    """
    if method not in _SCORERS:
        raise InputError(f"unknown ranking method {method!r}, expected one of {RANKING_METHODS}")
    if bins < 2:
        raise InputError(f"bins must be at least 2, got {bins}")
    if len(ds) == 0:
        raise InputError("cannot rank features of an empty dataset")
    scorer = _SCORERS[method]
    scores = [
        scorer(contingency(discretize(ds.X[:, j], bins), ds.y, bins))
        for j in range(len(ds.feature_names))
    ]
    order = sorted(range(len(scores)), key=lambda j: (-scores[j], j))
    return FeatureRanking(method, tuple((ds.feature_names[j], scores[j]) for j in order))


def pearson(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation; 0 when either column is constant."""
    if np.ptp(a) == 0 or np.ptp(b) == 0:
        return 0.0
    return float(np.corrcoef(a, b)[0, 1])


def select_features(
    ds: Dataset, top_k: int = 20, corr_threshold: float = 0.9, bins: int = 10
) -> List[str]:
    """Top ``top_k`` features by information gain, minus those strongly
    correlated with a better-ranked kept feature."""
    if not 1 <= top_k <= len(ds.feature_names):
        raise InputError(f"top_k must be in [1, {len(ds.feature_names)}], got {top_k}")
    if not 0 < corr_threshold <= 1:
        raise InputError(f"corr_threshold must be in (0, 1], got {corr_threshold}")
    kept: List[str] = []
    for name in rank_features(ds, INFO_GAIN, bins).top(top_k):
        column = ds.column(name)
        twin = next(
            (k for k in kept if abs(pearson(column, ds.column(k))) > corr_threshold), None
        )
        if twin is None:
            kept.append(name)
        else:
            logger.debug("dropping %s, correlated with %s", name, twin)
    logger.info("selected %d of the top %d features", len(kept), top_k)
    return kept


PRESETS: Dict[str, Callable[[], List[str]]] = dict()


def register_preset(name: str):
    def wrapper(fn):
        if name in PRESETS:
            raise ValueError(f"Preset {name} does already exist")
        PRESETS[name] = fn
        return fn

    return wrapper


@register_preset("full")
def _full() -> List[str]:
    return list(catalog_names())


@register_preset("paper-selected")
def _selected() -> List[str]:
    # "tweeting frequency per day" is the lifetime rate; "nb. mentions" counts occurrences
    return [
        "tweeting_freq_global",
        "rate_reply",
        "nb_replicates",
        "frac_tweets_with_mention",
        "adjusted_uses_url",
        "per_day_hashtag",
        "adjusted_uses_hashtag",
        "nb_mention",
        "per_day_mention",
        "adjusted_uses_mention",
        "words_per_tweet_min",
        "mention_per_tweet_max",
        "mention_per_word_avg",
        "retweets_per_tweet_avg",
    ]


def feature_set_preset(name: str) -> List[str]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise PresetNotFoundError(name) from None


def load_feature_list(path) -> List[str]:
    with open(require_file(path, "feature list"), "r", encoding="utf-8") as f:
        names = [line.strip() for line in f if line.strip() and not line.startswith("#")]
    unknown = [n for n in names if n not in catalog_names()]
    if unknown:
        raise InputError(f"{path}: features not in the catalog: {unknown}")
    return names
