from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple
import logging
import os

import numpy as np

from spamhunter.exceptions import InputError
from spamhunter.features.dictionary import fold_token
from spamhunter.labeling.oracle import (
    AUTOMATED_ADVERTISING,
    TOPIC_RELEVANCE,
    URL_RELEVANCE,
    HumanVerdictProvider,
)
from spamhunter.preprocessing.resolver import Blacklist
from spamhunter.preprocessing.store import read_jsonl, write_jsonl
from spamhunter.preprocessing.structures import AccountSnapshot, TweetRecord

logger = logging.getLogger(__name__)


class TweetVerdict(str, Enum):
    SPAM = "spam"
    LEGITIMATE = "legitimate"


class Clause(str, Enum):
    TOPIC_UNRELATED = "topic_unrelated"
    URL_UNRELATED = "url_unrelated"
    URL_MALICIOUS = "url_malicious"
    AUTOMATED_ADVERTISING = "automated_advertising"
    FOLLOWER_SELLING = "follower_selling"


@dataclass(frozen=True)
class TweetLabel:
    verdict: TweetVerdict
    clauses: Tuple[Clause, ...] = ()
    tweet_id: str = ""
    account_id: str = ""
    text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "verdict", TweetVerdict(self.verdict))
        object.__setattr__(self, "clauses", tuple(Clause(c) for c in self.clauses))
        if (self.verdict is TweetVerdict.SPAM) != bool(self.clauses):
            raise InputError(
                f"tweet {self.tweet_id}: spam verdicts need a fired clause, legitimate ones none"
            )

    @property
    def is_spam(self) -> bool:
        return self.verdict is TweetVerdict.SPAM

    def to_dict(self) -> dict:
        return dict(
            account_id=self.account_id,
            tweet_id=self.tweet_id,
            label=self.verdict.value,
            clauses=[c.value for c in self.clauses],
            text=self.text,
        )

    @classmethod
    def from_dict(cls, d: dict) -> "TweetLabel":
        return cls(
            TweetVerdict(d["label"]),
            tuple(d.get("clauses", ())),
            str(d.get("tweet_id", "")),
            str(d["account_id"]),
            d.get("text", ""),
        )


def load_selling_terms(path=None) -> List[Tuple[str, ...]]:
    """Follower/retweet-selling phrases, each as a tuple of folded tokens."""
    if path is None:
        return list(_shipped_selling_terms())
    return _read_selling_terms(path)


@lru_cache(maxsize=None)
def _shipped_selling_terms() -> Tuple[Tuple[str, ...], ...]:
    return tuple(
        _read_selling_terms(os.path.join(os.path.dirname(__file__), "bin", "selling_terms.txt"))
    )


def _read_selling_terms(path) -> List[Tuple[str, ...]]:
    with open(path, "r", encoding="utf-8") as f:
        phrases = [tuple(fold_token(w) for w in line.split()) for line in f]
    return [p for p in phrases if p]


def mentions_phrase(text: str, phrases: Iterable[Tuple[str, ...]]) -> bool:
    tokens = [fold_token(w) for w in text.split()]
    for phrase in phrases:
        n = len(phrase)
        if any(tuple(tokens[i : i + n]) == phrase for i in range(len(tokens) - n + 1)):
            return True
    return False


def spam_tweet_rule(
    t: TweetRecord,
    context_hashtag: Optional[str],
    oracle: HumanVerdictProvider,
    selling_terms: Optional[List[Tuple[str, ...]]] = None,
    blacklist: Optional[Blacklist] = None,
) -> TweetLabel:
    """Spam iff the tweet sells followers/retweets, or carries an entity and is out of context.

    Only the out-of-context judgments go to the oracle, one question at a
    time until a clause fires.
    """

    def label(*clauses):
        verdict = TweetVerdict.SPAM if clauses else TweetVerdict.LEGITIMATE
        return TweetLabel(verdict, clauses, t.tweet_id, t.author_id, t.text)

    if selling_terms is None:
        selling_terms = load_selling_terms()
    if mentions_phrase(t.text, selling_terms):
        return label(Clause.FOLLOWER_SELLING)
    if not t.has_entity:
        return label()
    if blacklist is not None and any(blacklist.is_blacklisted(u) for u in t.urls):
        return label(Clause.URL_MALICIOUS)

    context = t.text if context_hashtag is None else f"{t.text}  [trend: #{context_hashtag}]"
    if t.hashtags or context_hashtag:
        if oracle.ask(t.author_id, TOPIC_RELEVANCE, t.tweet_id, context) == "unrelated":
            return label(Clause.TOPIC_UNRELATED)
    if t.urls:
        answer = oracle.ask(t.author_id, URL_RELEVANCE, t.tweet_id, context)
        if answer == "unrelated":
            return label(Clause.URL_UNRELATED)
        if answer == "malicious":
            return label(Clause.URL_MALICIOUS)
    if t.hashtags or t.mentions:
        if oracle.ask(t.author_id, AUTOMATED_ADVERTISING, t.tweet_id, context) == "yes":
            return label(Clause.AUTOMATED_ADVERTISING)
    return label()


def load_evidence(path) -> Dict[str, TweetLabel]:
    """Evidence tweet label per account; the first record of an account wins."""
    evidence = dict()
    for d in read_jsonl(path):
        evidence.setdefault(str(d["account_id"]), TweetLabel.from_dict(d))
    return evidence


def save_evidence(labels: Iterable[TweetLabel], path):
    write_jsonl((label.to_dict() for label in labels), path)


def carries_hashtag(t: TweetRecord, hashtag: str) -> bool:
    wanted = hashtag.lstrip("#").casefold()
    return any(h.lstrip("#").casefold() == wanted for h in t.hashtags)


def sample_trend_tweets(
    snapshots: Iterable[AccountSnapshot], hashtag: str, fraction: float = 0.1, seed: int = 0
) -> List[Tuple[str, TweetRecord]]:
    """Random share of the tweets carrying ``hashtag`` as ``(account_id, tweet)``
    pairs in timeline order; at least one tweet when any carries it."""
    if not 0.0 < fraction <= 1.0:
        raise InputError(f"sample fraction must be in (0, 1], got {fraction}")
    pool = []
    seen = set()
    for acc in snapshots:
        for t in acc.recent_tweets:
            if t.tweet_id not in seen and carries_hashtag(t, hashtag):
                seen.add(t.tweet_id)
                pool.append((acc.account_id, t))
    pool.sort(key=lambda pair: (pair[1].created_at, pair[1].tweet_id))
    if not pool:
        logger.warning("no tweet carries #%s", hashtag.lstrip("#"))
        return []
    n = max(1, int(round(fraction * len(pool))))
    picked = np.sort(np.random.default_rng(seed).choice(len(pool), size=n, replace=False))
    logger.info("sampled %d of %d tweets with #%s", n, len(pool), hashtag.lstrip("#"))
    return [pool[i] for i in picked]


def label_evidence_tweets(
    sample: Iterable[Tuple[str, TweetRecord]],
    hashtag: Optional[str],
    oracle: HumanVerdictProvider,
    selling_terms: Optional[List[Tuple[str, ...]]] = None,
    blacklist: Optional[Blacklist] = None,
) -> List[TweetLabel]:
    """Label every tweet for its account and, for a retweet, also for the author
    of the original tweet. Without ``hashtag`` a tweet's first hashtag is its trend."""
    if selling_terms is None:
        selling_terms = load_selling_terms()
    labels = []
    for account_id, t in sample:
        if hashtag:
            context = hashtag.lstrip("#")
        else:
            context = t.hashtags[0] if t.hashtags else None
        label = replace(
            spam_tweet_rule(t, context, oracle, selling_terms, blacklist), account_id=account_id
        )
        labels.append(label)
        if t.is_retweet and t.retweeted_author_id != account_id:
            labels.append(replace(label, account_id=t.retweeted_author_id))
    return labels
