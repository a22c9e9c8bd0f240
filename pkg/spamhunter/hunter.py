"""Breadth-first expansion of detected spammers into their social neighborhood.

Every detected spammer contributes its followers and retweeters to a FIFO
queue; each queued account is classified in turn and only spammers expand
further.
"""
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, Dict, Iterable, List, Mapping, Optional, Sequence, Set
import abc
import logging

import networkx as nx
import pandas as pd

from spamhunter.exceptions import InputError, ProviderError
from spamhunter.features.catalog import extract
from spamhunter.features.dictionary import SpamDictionary
from spamhunter.models.base import SpamModel, predict
from spamhunter.preprocessing.store import require_file
from spamhunter.preprocessing.structures import AccountClass, AccountSnapshot, TweetRecord

logger = logging.getLogger(__name__)

UNRESOLVED = "unresolved"


class Provenance(str, Enum):
    SEED = "seed"
    FOLLOWER_OF = "follower_of"
    RETWEETER_OF = "retweeter_of"


@dataclass(frozen=True)
class HuntLimits:
    max_depth: int = 2
    max_accounts: int = 1000

    def __post_init__(self):
        if self.max_depth < 0:
            raise InputError(f"max_depth must not be negative, got {self.max_depth}")
        if self.max_accounts < 1:
            raise InputError(f"max_accounts must be positive, got {self.max_accounts}")


@dataclass(frozen=True)
class QueueEntry:
    account_id: str
    provenance: Provenance
    source_id: Optional[str]
    depth: int


class HuntQueue:
    """FIFO of accounts to classify; an account id is admitted at most once,
    never deeper than ``max_depth`` and never beyond ``max_accounts`` ids."""

    def __init__(self, limits: HuntLimits = HuntLimits()):
        self.limits = limits
        self._queue: Deque[QueueEntry] = deque()
        self.seen: Set[str] = set()

    def __len__(self):
        return len(self._queue)

    def __bool__(self):
        return bool(self._queue)

    @property
    def full(self) -> bool:
        return len(self.seen) >= self.limits.max_accounts

    def push(
        self, account_id: str, provenance: Provenance, source_id: Optional[str], depth: int
    ) -> bool:
        if account_id in self.seen or self.full or depth > self.limits.max_depth:
            return False
        self.seen.add(account_id)
        self._queue.append(QueueEntry(account_id, Provenance(provenance), source_id, depth))
        return True

    def pop(self) -> QueueEntry:
        return self._queue.popleft()


class SocialEdgeProvider(abc.ABC):
    """Source of the accounts around a detected spammer; lists are deterministic."""

    @abc.abstractmethod
    def followers_of(self, account_id: str) -> List[str]:
        raise NotImplementedError

    @abc.abstractmethod
    def retweeters_of(
        self, account_id: str, recent_tweets: Sequence[TweetRecord] = ()
    ) -> List[str]:
        raise NotImplementedError


class MockEdgeProvider(SocialEdgeProvider):
    def __init__(
        self,
        followers: Optional[Mapping[str, Sequence[str]]] = None,
        retweeters: Optional[Mapping[str, Sequence[str]]] = None,
        failing: Iterable[str] = (),
    ):
        self.followers = {k: list(v) for k, v in (followers or dict()).items()}
        self.retweeters = {k: list(v) for k, v in (retweeters or dict()).items()}
        self.failing = set(failing)
        self.queried: List[str] = []

    def _check(self, account_id):
        self.queried.append(account_id)
        if account_id in self.failing:
            raise ProviderError(f"edges of {account_id} are unavailable")

    def followers_of(self, account_id):
        self._check(account_id)
        return list(self.followers.get(account_id, ()))

    def retweeters_of(self, account_id, recent_tweets=()):
        self._check(account_id)
        return list(self.retweeters.get(account_id, ()))


class CorpusEdgeProvider(SocialEdgeProvider):
    """Retweeters come from the retweet records of the corpus, followers from an
    optional ``follower_id,followee_id`` edges file."""

    def __init__(self, follows: nx.DiGraph = None, retweets: nx.DiGraph = None):
        self.follows = follows if follows is not None else nx.DiGraph()
        self.retweets = retweets if retweets is not None else nx.DiGraph()

    @classmethod
    def from_snapshots(
        cls, snapshots: Iterable[AccountSnapshot], edges_path=None
    ) -> "CorpusEdgeProvider":
        retweets = nx.DiGraph()
        for acc in snapshots:
            for t in acc.recent_tweets:
                if t.is_retweet and t.retweeted_author_id != acc.account_id:
                    retweets.add_edge(acc.account_id, t.retweeted_author_id)
        follows = nx.DiGraph()
        if edges_path is not None:
            frame = pd.read_csv(
                require_file(edges_path, "edges file"), dtype=str, keep_default_na=False
            )
            if list(frame.columns) != ["follower_id", "followee_id"]:
                raise InputError(f"{edges_path}: expected header follower_id,followee_id")
            follows.add_edges_from(zip(frame["follower_id"], frame["followee_id"]))
        logger.info(
            "social graph: %d follow edges, %d retweet edges",
            follows.number_of_edges(),
            retweets.number_of_edges(),
        )
        return cls(follows, retweets)

    @staticmethod
    def _incoming(graph: nx.DiGraph, account_id: str) -> List[str]:
        if account_id not in graph:
            return []
        return sorted(graph.predecessors(account_id))

    def followers_of(self, account_id):
        return self._incoming(self.follows, account_id)

    def retweeters_of(self, account_id, recent_tweets=()):
        return self._incoming(self.retweets, account_id)


def expand(
    q: HuntQueue,
    provider: SocialEdgeProvider,
    detected: str,
    depth: int,
    recent_tweets: Sequence[TweetRecord] = (),
) -> int:
    """Enqueue followers, then retweeters, of ``detected`` one level deeper.

    Both lists are fetched before anything is enqueued, so a provider failure
    leaves the queue untouched.
    """
    if depth >= q.limits.max_depth:
        return 0
    followers = list(provider.followers_of(detected))
    retweeters = list(provider.retweeters_of(detected, recent_tweets))
    added = 0
    for provenance, neighbors in (
        (Provenance.FOLLOWER_OF, followers),
        (Provenance.RETWEETER_OF, retweeters),
    ):
        for account_id in neighbors:
            added += q.push(account_id, provenance, detected, depth + 1)
    return added


@dataclass(frozen=True)
class HuntResult:
    account_id: str
    account_class: str
    score: Optional[float]
    provenance: Provenance
    source_id: Optional[str]
    depth: int

    @property
    def is_spammer(self) -> bool:
        return self.account_class == AccountClass.SPAMMER.value

    def to_dict(self) -> dict:
        return {
            "account_id": self.account_id,
            "class": self.account_class,
            "score": "" if self.score is None else self.score,
            "provenance": self.provenance.value,
            "source_id": self.source_id or "",
            "depth": self.depth,
        }


def hunt(
    seeds: Sequence[str],
    provider: SocialEdgeProvider,
    model: SpamModel,
    snapshots: Mapping[str, AccountSnapshot],
    dictionary: SpamDictionary,
    limits: HuntLimits = HuntLimits(),
) -> List[HuntResult]:
    """Classify seeds and their spam neighborhood breadth-first, in dequeue order."""
    q = HuntQueue(limits)
    for seed in seeds:
        q.push(seed, Provenance.SEED, None, 0)
    results: List[HuntResult] = []
    while q:
        entry = q.pop()
        acc = snapshots.get(entry.account_id)
        if acc is None:
            logger.warning("no snapshot for %s, leaving it unresolved", entry.account_id)
            results.append(_result(entry, UNRESOLVED, None))
            continue
        try:
            label, score = predict(model, extract(acc, dictionary))
        except InputError as e:
            logger.warning("cannot classify %s: %s", entry.account_id, e)
            results.append(_result(entry, UNRESOLVED, None))
            continue
        results.append(_result(entry, label.value, score))
        if label is AccountClass.SPAMMER:
            try:
                added = expand(q, provider, entry.account_id, entry.depth, acc.recent_tweets)
            except ProviderError as e:
                logger.error("expansion of %s skipped: %s", entry.account_id, e)
                continue
            logger.debug("%s expanded into %d accounts", entry.account_id, added)
    detected = sum(r.is_spammer for r in results)
    logger.info("hunt classified %d accounts, %d spammers", len(results), detected)
    return results


def _result(entry: QueueEntry, account_class: str, score: Optional[float]) -> HuntResult:
    return HuntResult(
        entry.account_id, account_class, score, entry.provenance, entry.source_id, entry.depth
    )


def snapshot_index(snapshots: Iterable[AccountSnapshot]) -> Dict[str, AccountSnapshot]:
    return {acc.account_id: acc for acc in snapshots}


def load_seeds(path) -> List[str]:
    with open(require_file(path, "seeds file"), "r", encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip() and not line.startswith("#")]
