from collections import OrderedDict
from typing import List, Optional, Sequence
import math

import Levenshtein

from spamhunter.features.base import require_tweets
from spamhunter.preprocessing.structures import AccountSnapshot, normalize_text

DUPLICATE_THRESHOLD = 0.90


def levenshtein(a: str, b: str, cutoff: Optional[int] = None) -> int:
    """Edit distance; with ``cutoff`` any distance above it is reported as ``cutoff + 1``."""
    if cutoff is None:
        return Levenshtein.distance(a, b)
    return Levenshtein.distance(a, b, score_cutoff=cutoff)


def similarity(a: str, b: str) -> float:
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def duplicate_band(a: str, b: str, threshold: float = DUPLICATE_THRESHOLD) -> int:
    """Largest distance that can still make ``a`` and ``b`` duplicates."""
    return math.floor(max(len(a), len(b)) * (1.0 - threshold)) + 1


def is_duplicate(a: str, b: str, threshold: float = DUPLICATE_THRESHOLD) -> bool:
    """similarity(a, b) > threshold, aborting the edit distance outside the band."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0 > threshold
    band = duplicate_band(a, b, threshold)
    distance = levenshtein(a, b, cutoff=band)
    if distance > band:
        return False
    return 1.0 - distance / longest > threshold


def count_replicates(
    texts: Sequence[str],
    threshold: float = DUPLICATE_THRESHOLD,
    sims: Optional[Sequence[Sequence[float]]] = None,
) -> int:
    """Number of texts duplicating at least one earlier text (texts in chronological order).

    With ``sims``, the pairwise similarities of ``texts``, no edit distance is recomputed.
    """

    def duplicate(i: int, j: int) -> bool:
        if sims is None:
            return is_duplicate(texts[i], texts[j], threshold)
        return sims[i][j] > threshold

    return sum(1 for j in range(1, len(texts)) if any(duplicate(i, j) for i in range(j)))


def pairwise_similarities(texts: Sequence[str]) -> List[List[float]]:
    n = len(texts)
    sims = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            sims[i][j] = sims[j][i] = similarity(texts[i], texts[j])
    return sims


def replication_features(
    acc: AccountSnapshot, threshold: float = DUPLICATE_THRESHOLD
) -> "OrderedDict[str, float]":
    tweets = require_tweets(acc)
    texts = [normalize_text(t.text) for t in reversed(tweets)]
    n = len(texts)
    sims = pairwise_similarities(texts)
    pairs = n * (n - 1) // 2
    total = sum(sims[i][j] for i in range(n) for j in range(i + 1, n))
    return OrderedDict(
        [
            ("avg_similarity", total / pairs if pairs else 0.0),
            ("nb_replicates", count_replicates(texts, threshold, sims)),
        ]
    )
