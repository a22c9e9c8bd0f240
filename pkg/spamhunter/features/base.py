from collections import OrderedDict
from typing import Dict, Iterable, List, Mapping, Sequence
import math

import numpy as np

from spamhunter.exceptions import InputError
from spamhunter.preprocessing.structures import SECONDS_PER_DAY, AccountSnapshot

EPSILON_DAYS = 1 / SECONDS_PER_DAY
STATISTICS = ("min", "max", "median", "avg")


class FeatureVector(Mapping):
    """Named, ordered feature values of one account."""

    def __init__(self, account_id: str, values: Mapping[str, float]):
        self.account_id = account_id
        self._values = OrderedDict((k, float(v)) for k, v in values.items())
        bad = [k for k, v in self._values.items() if not math.isfinite(v)]
        if bad:
            raise InputError(f"account {account_id}: non-finite features {bad}")

    def __getitem__(self, name):
        return self._values[name]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        if not isinstance(other, FeatureVector):
            return NotImplemented
        return self.account_id == other.account_id and list(self._values.items()) == list(
            other._values.items()
        )

    def __repr__(self):
        return f"FeatureVector({self.account_id!r}, {len(self)} features)"

    def project(self, names: Sequence[str]) -> "FeatureVector":
        missing = [n for n in names if n not in self._values]
        if missing:
            raise InputError(f"account {self.account_id}: missing features {missing}")
        return FeatureVector(self.account_id, OrderedDict((n, self._values[n]) for n in names))

    def as_array(self, names: Sequence[str]) -> np.ndarray:
        return np.array(list(self.project(names).values()), dtype=float)

    def to_dict(self) -> dict:
        d = OrderedDict(account_id=self.account_id)
        d.update(self._values)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureVector":
        d = dict(d)
        account_id = str(d.pop("account_id"))
        return cls(account_id, d)


def safe_div(numerator, denominator) -> float:
    """Ratios with a zero denominator are 0."""
    if denominator == 0:
        return 0.0
    return numerator / denominator


def describe(values: Iterable[float], prefix: str) -> Dict[str, float]:
    """min/max/median/avg of ``values`` under ``prefix``; an empty sample gives zeros."""
    values = np.asarray(list(values), dtype=float)
    if values.size == 0:
        return OrderedDict((f"{prefix}_{s}", 0.0) for s in STATISTICS)
    return OrderedDict(
        [
            (f"{prefix}_min", float(values.min())),
            (f"{prefix}_max", float(values.max())),
            (f"{prefix}_median", float(np.median(values))),
            (f"{prefix}_avg", float(values.mean())),
        ]
    )


def window_days(acc: AccountSnapshot) -> float:
    """Days between the oldest and newest recent tweet, at least one second."""
    tweets = acc.recent_tweets
    if not tweets:
        return EPSILON_DAYS
    span = (tweets[0].created_at - tweets[-1].created_at) / SECONDS_PER_DAY
    return max(EPSILON_DAYS, span)


def require_tweets(acc: AccountSnapshot) -> List:
    if not acc.recent_tweets:
        raise InputError(f"account {acc.account_id}: no recent tweets")
    return list(acc.recent_tweets)
