"""Seeded generator of spammer, legitimate and compromised account archetypes.

Spammers reuse a couple of long advertising templates padded with short random
words, hijack trending hashtags, mass-mention strangers, point to a few reused
URLs and post densely through automation tools, occasionally masking the
replication with machine-made filler. Legitimate users write varied text
through official clients, reply to friends and retweet. Compromised accounts
are legitimate histories whose newest tweets are an automated spam burst.
"""
from collections import OrderedDict
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging
import os
import string

import numpy as np
import pandas as pd

from spamhunter.exceptions import InputError
from spamhunter.features.dictionary import SpamDictionary
from spamhunter.labeling.oracle import RECENT_SPAM, SPAM_PATTERN
from spamhunter.labeling.rules import (
    Clause,
    TweetLabel,
    TweetVerdict,
    load_selling_terms,
    mentions_phrase,
    save_evidence,
)
from spamhunter.labeling.workflow import LabeledAccount, automation_index, save_labels
from spamhunter.preprocessing.datasets.base import Dataset
from spamhunter.preprocessing.reader import PROFILE_KIND, TWEET_KIND
from spamhunter.preprocessing.sources import SourceCatalog
from spamhunter.preprocessing.store import atomic_writer, save_snapshots, write_jsonl
from spamhunter.preprocessing.structures import (
    PROFILE_FIELDS,
    SECONDS_PER_DAY,
    AccountClass,
    AccountSnapshot,
    SourceCategory,
    TweetRecord,
)

logger = logging.getLogger(__name__)

SNAPSHOT_AT = 1388534400  # 2014-01-01T00:00:00Z
MIN_TWEETS = 10

SPAMMER = "spammer"
LEGIT = "legit"
COMPROMISED = "compromised"

OFFICIAL_SOURCES = ("Twitter Web Client", "Twitter for iPhone", "Twitter for Android")
TRUSTED_SOURCES = ("Echofon", "TweetDeck")
AUTOMATED_SOURCES = ("twitterfeed", "dlvr.it", "IFTTT", "Auto Tweet Pro")

VOCABULARY = (
    "today", "morning", "coffee", "friends", "weekend", "match", "goal", "team", "city",
    "rain", "sunny", "family", "dinner", "book", "reading", "movie", "music", "song",
    "work", "meeting", "project", "class", "exam", "study", "travel", "flight", "beach",
    "photo", "happy", "birthday", "thanks", "everyone", "great", "news", "story", "love",
    "long", "day", "night", "sleep", "tired", "finally", "home", "road", "traffic",
    "lunch", "tea", "garden", "walk", "park", "game", "win", "lost", "season", "new",
    "phone", "update", "school", "kids", "weather", "cold", "hot", "summer", "winter",
    "اليوم", "صباح", "مساء", "قهوة", "أصدقاء", "العائلة", "مباراة", "هدف", "الفريق",
    "كتاب", "سفر", "الجمعة", "الحمد", "لله", "جميل", "شكرا", "للجميع", "أخبار", "مدينة",
    "الطقس", "البحر", "عشاء", "رمضان", "كريم", "عيد", "مبارك", "دراسة", "امتحان", "عمل",
)

SPAM_TEMPLATES = (
    "Get thousands of real active followers today for only ten dollars, limited offer",
    "Huge discount on designer watches and bags this week, free shipping worldwide now",
    "Win a brand new phone right now, just follow us and retweet to enter the giveaway",
    "Lose weight fast with this natural herbal tea, doctors cannot explain this trick",
    "Earn money from home with our proven system, thousands already joined this month",
    "buy followers cheap and fast with instant delivery, the best service on the market",
    "زيادة متابعين عرب حقيقيين بأسعار رخيصة جدا تواصل معنا الآن للحصول على العرض الخاص",
    "عرض خاص لفترة محدودة خصم كبير على جميع المنتجات والتوصيل مجاني لكل المدن اطلب الآن",
)

SPAM_TERMS = (
    "followers", "offer", "discount", "free", "giveaway", "cheap", "delivery",
    "متابعين", "عرض", "خصم", "مجاني", "اطلب",
)

TRENDS = (
    "WorldCup", "Oscars", "iPhone", "Ramadan", "Elections", "Champions", "Eid",
    "Riyadh", "Dubai", "Cairo", "Breaking", "FridayFeeling",
)

SPAM_DOMAINS = ("bit.ly", "goo.gl", "tinyurl.com", "deals-now.example", "free-gift.example")
NEWS_DOMAINS = ("news.example.com", "sport.example.org", "blog.example.net", "photos.example.com")

_SUFFIX_ALPHABET = string.ascii_lowercase + string.digits

# Catalog features whose spammer and legitimate ranges the archetypes below draw apart.
PLANTED_FEATURES = (
    "age_days",
    "tweeting_freq_global",
    "tweeting_freq_recent",
    "rate_reply",
    "rate_original",
    "words_per_tweet_min",
    "words_per_tweet_max",
    "words_per_tweet_median",
    "words_per_tweet_avg",
    "frac_tweets_with_url",
    "nb_url",
    "avg_uses_url",
    "frac_tweets_with_hashtag",
    "frac_tweets_with_mention",
    "retweets_per_tweet_avg",
    "favorites_per_tweet_avg",
)


class SyntheticCorpus(NamedTuple):
    snapshots: List[AccountSnapshot]
    labels: List[LabeledAccount]
    evidence: List[TweetLabel]
    oracle: List[dict]
    edges: List[Tuple[str, str]]


def synthetic_catalog() -> SourceCatalog:
    catalog = SourceCatalog()
    for names, category in (
        (OFFICIAL_SOURCES, SourceCategory.OFFICIAL),
        (TRUSTED_SOURCES, SourceCategory.TRUSTED),
        (AUTOMATED_SOURCES, SourceCategory.AUTOMATED),
    ):
        for name in names:
            catalog.add(name, category, "synthetic")
    return catalog


def screen_name(account_id: str) -> str:
    return f"user{account_id}"


class CorpusGenerator:
    """Draws every account from a single ``numpy`` generator in a fixed order."""

    def __init__(self, seed: int = 0, n_tweets: Optional[int] = None):
        if n_tweets is not None and n_tweets < MIN_TWEETS:
            raise InputError(f"n_tweets must be at least {MIN_TWEETS}, got {n_tweets}")
        self.rng = np.random.default_rng(seed)
        self.n_tweets = n_tweets
        self.selling_terms = load_selling_terms()

    def _pick(self, seq: Sequence):
        return seq[int(self.rng.integers(len(seq)))]

    def _sample(self, seq: Sequence, k: int) -> List:
        return [seq[i] for i in self.rng.choice(len(seq), size=min(k, len(seq)), replace=False)]

    def _words(self, low: int, high: int) -> str:
        return " ".join(self._pick(VOCABULARY) for _ in range(int(self.rng.integers(low, high))))

    def _token(self, low: int, high: int) -> str:
        size = int(self.rng.integers(low, high + 1))
        return "".join(self._pick(_SUFFIX_ALPHABET) for _ in range(size))

    def _count(self) -> int:
        if self.n_tweets is not None:
            return self.n_tweets
        return int(self.rng.integers(120, 201))

    def _timeline(self, n: int, per_day: float) -> List[int]:
        """Newest-first creation times of ``n`` tweets posted ``per_day`` on average."""
        newest = SNAPSHOT_AT - int(self.rng.integers(60, 3600))
        gaps = self.rng.exponential(SECONDS_PER_DAY / per_day, n - 1)
        gaps = np.maximum(1, gaps).astype(int)
        return [newest] + list(newest - np.cumsum(gaps))

    @staticmethod
    def _tweet(account_id, k, created_at, text, source, **fields) -> TweetRecord:
        return TweetRecord(
            tweet_id=f"{account_id}-{k:03d}",
            author_id=account_id,
            text=text,
            created_at=int(created_at),
            source_name=source,
            **fields,
        )

    def _legit_tweet(self, account_id, k, created_at, friends, others) -> TweetRecord:
        official = self.rng.random() < 0.85
        source = self._pick(OFFICIAL_SOURCES if official else TRUSTED_SOURCES)
        words = self._words(4, 18)
        roll = self.rng.random()
        counters = dict(
            retweet_count=int(self.rng.poisson(2.5)), favorite_count=int(self.rng.poisson(3.0))
        )
        if roll < 0.15 and others:
            author = self._pick(others)
            return self._tweet(
                account_id,
                k,
                created_at,
                f"RT @{screen_name(author)} {words}",
                source,
                is_retweet=True,
                retweeted_author_id=author,
                mentions=(screen_name(author),),
                **counters,
            )
        if roll < 0.45 and friends:
            friend = self._pick(friends)
            text = f"@{friend} {words}"
            return self._tweet(
                account_id, k, created_at, text, source, mentions=(friend,), **counters
            )
        tokens, hashtags, urls = [words], [], []
        if self.rng.random() < 0.2:
            hashtags.append(f"topic{int(self.rng.integers(1000))}")
        if self.rng.random() < 0.15:
            urls.append(f"http://{self._pick(NEWS_DOMAINS)}/{self._token(6, 10)}")
        tokens += [f"#{h}" for h in hashtags] + urls
        return self._tweet(
            account_id,
            k,
            created_at,
            " ".join(tokens),
            source,
            hashtags=tuple(hashtags),
            urls=tuple(urls),
            **counters,
        )

    def _spam_plan(self) -> dict:
        return dict(
            templates=self._sample(SPAM_TEMPLATES, 2),
            trends=self._sample(TRENDS, 2),
            urls=[f"http://{self._pick(SPAM_DOMAINS)}/{self._token(5, 7)}" for _ in range(2)],
        )

    def _spam_tweet(
        self, account_id, k, created_at, plan, accomplices, forced=False
    ) -> TweetRecord:
        source = self._pick(AUTOMATED_SOURCES)
        counters = dict(
            retweet_count=int(self.rng.poisson(0.1)), favorite_count=int(self.rng.poisson(0.1))
        )
        roll = self.rng.random()
        if not forced and roll < 0.15:
            # machine-made filler masking the replication
            return self._tweet(account_id, k, created_at, self._words(8, 15), source, **counters)
        if not forced and roll < 0.22 and accomplices:
            author = self._pick(accomplices)
            text = f"RT @{screen_name(author)} {self._pick(plan['templates'])}"
            return self._tweet(
                account_id,
                k,
                created_at,
                text,
                source,
                is_retweet=True,
                retweeted_author_id=author,
                mentions=(screen_name(author),),
                **counters,
            )
        template = plan["templates"][0] if forced else self._pick(plan["templates"])
        hashtags = [plan["trends"][0]]
        if self.rng.random() < 0.5:
            hashtags.append(plan["trends"][1])
        if forced or self.rng.random() < 0.3:
            hashtags.append(f"{self._token(4, 6)}")
        n_mentions = int(self.rng.integers(1, 5))
        mentions = [f"user{int(self.rng.integers(10**6))}" for _ in range(n_mentions)]
        url = self._pick(plan["urls"])
        text = " ".join(
            [template, self._token(2, 3), url]
            + [f"#{h}" for h in hashtags]
            + [f"@{m}" for m in mentions]
        )
        return self._tweet(
            account_id,
            k,
            created_at,
            text,
            source,
            hashtags=tuple(hashtags),
            mentions=tuple(mentions),
            urls=(url,),
            **counters,
        )

    def _snapshot(
        self, account_id, tweets, per_day, min_age, max_age, followers, friends, **counters
    ):
        span_days = (tweets[0].created_at - tweets[-1].created_at) / SECONDS_PER_DAY
        age_days = max(float(self.rng.uniform(min_age, max_age)), span_days + 1.0)
        return AccountSnapshot(
            account_id=account_id,
            screen_name=screen_name(account_id),
            created_at=int(SNAPSHOT_AT - age_days * SECONDS_PER_DAY),
            followers_count=followers,
            friends_count=friends,
            statuses_count=max(len(tweets), int(per_day * age_days)),
            recent_tweets=tuple(tweets),
            snapshot_at=SNAPSHOT_AT,
            **counters,
        )

    def legit(self, account_id, friends, others) -> AccountSnapshot:
        n, per_day = self._count(), float(self.rng.uniform(0.3, 12.0))
        times = self._timeline(n, per_day)
        tweets = [self._legit_tweet(account_id, k, t, friends, others) for k, t in enumerate(times)]
        return self._snapshot(
            account_id,
            tweets,
            per_day,
            200,
            2500,
            int(self.rng.integers(20, 2000)),
            int(self.rng.integers(20, 1000)),
            listed_count=int(self.rng.integers(0, 50)),
            favourites_count=int(self.rng.integers(0, 5000)),
        )

    def spammer(self, account_id, accomplices) -> AccountSnapshot:
        n, per_day = self._count(), float(self.rng.uniform(40.0, 300.0))
        plan = self._spam_plan()
        times = self._timeline(n, per_day)
        tweets = [
            self._spam_tweet(account_id, k, t, plan, accomplices, forced=k < 2)
            for k, t in enumerate(times)
        ]
        return self._snapshot(
            account_id,
            tweets,
            per_day,
            5,
            120,
            int(self.rng.integers(10, 800)),
            int(self.rng.integers(500, 3000)),
            listed_count=int(self.rng.integers(0, 3)),
            favourites_count=int(self.rng.integers(0, 20)),
        )

    def compromised(self, account_id, friends, others) -> AccountSnapshot:
        n, per_day = self._count(), float(self.rng.uniform(0.3, 12.0))
        burst = max(2, int(n * float(self.rng.uniform(0.2, 0.4))))
        plan = self._spam_plan()
        times = self._timeline(n, per_day)
        tweets = [
            self._spam_tweet(account_id, k, t, plan, (), forced=k < 2)
            if k < burst
            else self._legit_tweet(account_id, k, t, friends, others)
            for k, t in enumerate(times)
        ]
        return self._snapshot(
            account_id,
            tweets,
            per_day,
            200,
            2500,
            int(self.rng.integers(20, 2000)),
            int(self.rng.integers(20, 1000)),
            listed_count=int(self.rng.integers(0, 50)),
            favourites_count=int(self.rng.integers(0, 5000)),
        )

    def _evidence(self, acc: AccountSnapshot, kind: str) -> TweetLabel:
        tweet = acc.recent_tweets[0]
        if kind == LEGIT:
            verdict, clauses = TweetVerdict.LEGITIMATE, ()
        elif mentions_phrase(tweet.text, self.selling_terms):
            verdict, clauses = TweetVerdict.SPAM, (Clause.FOLLOWER_SELLING,)
        else:
            verdict, clauses = TweetVerdict.SPAM, (Clause.TOPIC_UNRELATED,)
        return TweetLabel(verdict, clauses, tweet.tweet_id, acc.account_id, tweet.text)

    def generate(self, n_spammers: int, n_legit: int, n_compromised: int) -> SyntheticCorpus:
        if min(n_spammers, n_legit, n_compromised) < 0:
            raise InputError("account counts must not be negative")
        kinds = [SPAMMER] * n_spammers + [LEGIT] * n_legit + [COMPROMISED] * n_compromised
        kinds = [kinds[i] for i in self.rng.permutation(len(kinds))]
        ids = [str(100000 + i) for i in range(len(kinds))]
        by_kind = {
            kind: [a for a, k in zip(ids, kinds) if k == kind] for kind in (SPAMMER, LEGIT)
        }
        catalog = synthetic_catalog()

        snapshots, labels, evidence, oracle, edges = [], [], [], [], []
        for account_id, kind in zip(ids, kinds):
            if kind == SPAMMER:
                accomplices = [a for a in by_kind[SPAMMER] if a != account_id]
                acc = self.spammer(account_id, accomplices)
                followers = self._sample(accomplices, int(self.rng.integers(1, 4)))
                if by_kind[LEGIT] and self.rng.random() < 0.3:
                    followers += self._sample(by_kind[LEGIT], 1)
            else:
                others = [a for a in by_kind[LEGIT] if a != account_id]
                friends = [screen_name(a) for a in self._sample(others, 30)]
                if kind == LEGIT:
                    acc = self.legit(account_id, friends, others)
                else:
                    acc = self.compromised(account_id, friends, others)
                followers = self._sample(others, int(self.rng.integers(2, 6)))
            edges += [(f, account_id) for f in followers]

            tweet_label = self._evidence(acc, kind)
            status = automation_index(acc, catalog)
            if kind == SPAMMER:
                account_class = AccountClass.SPAMMER
                trace = ("a",) if status.is_automated else ("d", "d:constant")
            elif kind == LEGIT:
                account_class = AccountClass.NON_SPAMMER
                trace = ("b", "b:no") if status.is_automated else ("c",)
            else:
                account_class = AccountClass.COMPROMISED
                trace = ("d", "d:subscribed_app")
            if len(trace) == 2:
                question = RECENT_SPAM if trace[0] == "b" else SPAM_PATTERN
                oracle.append(
                    dict(account_id=account_id, question_id=question.id, answer=trace[1][2:])
                )
            snapshots.append(acc)
            evidence.append(tweet_label)
            labels.append(
                LabeledAccount(
                    account_id, account_class, status, tweet_label.tweet_id, trace, "synthetic"
                )
            )
        logger.info(
            "generated %d spammers, %d legitimate and %d compromised accounts",
            n_spammers,
            n_legit,
            n_compromised,
        )
        return SyntheticCorpus(snapshots, labels, evidence, oracle, edges)


def generate_corpus(
    n_spammers: int,
    n_legit: int,
    n_compromised: int = 0,
    seed: int = 0,
    n_tweets: Optional[int] = None,
) -> SyntheticCorpus:
    return CorpusGenerator(seed, n_tweets).generate(n_spammers, n_legit, n_compromised)


def gen_synthetic_corpus(
    n_spammers: int,
    n_legit: int,
    n_compromised: int = 0,
    seed: int = 0,
    n_tweets: Optional[int] = None,
) -> Tuple[List[AccountSnapshot], Dict[str, AccountClass]]:
    corpus = generate_corpus(n_spammers, n_legit, n_compromised, seed, n_tweets)
    return corpus.snapshots, OrderedDict((l.account_id, l.account_class) for l in corpus.labels)


def corpus_records(snapshots: Sequence[AccountSnapshot]):
    """Raw line records as read by the corpus reader: a profile, then its tweets."""
    for acc in snapshots:
        profile = {k: getattr(acc, k) for k in PROFILE_FIELDS}
        yield dict(kind=PROFILE_KIND, **profile)
        for tweet in acc.chronological_tweets:
            yield dict(kind=TWEET_KIND, **tweet.to_dict())


def write_synthetic_corpus(corpus: SyntheticCorpus, out_dir) -> Dict[str, str]:
    """Write every artifact of ``corpus`` below ``out_dir``; returns the paths by role."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        name: os.path.join(out_dir, filename)
        for name, filename in (
            ("corpus", "corpus.jsonl"),
            ("snapshots", "snapshots.jsonl"),
            ("labels", "labels.jsonl"),
            ("evidence", "evidence.jsonl"),
            ("oracle", "oracle.jsonl"),
            ("catalog", "sources.csv"),
            ("dictionary", "spam_terms.txt"),
            ("edges", "edges.csv"),
            ("seeds", "seeds.txt"),
        )
    }
    write_jsonl(corpus_records(corpus.snapshots), paths["corpus"])
    save_snapshots(corpus.snapshots, paths["snapshots"])
    save_labels(corpus.labels, paths["labels"])
    save_evidence(corpus.evidence, paths["evidence"])
    write_jsonl(corpus.oracle, paths["oracle"])
    synthetic_catalog().save(paths["catalog"])
    SpamDictionary(SPAM_TERMS).save(paths["dictionary"])
    with atomic_writer(paths["edges"]) as fout:
        pd.DataFrame(corpus.edges, columns=["follower_id", "followee_id"]).to_csv(
            fout, index=False, lineterminator="\n"
        )
    with atomic_writer(paths["seeds"]) as fout:
        fout.writelines(
            f"{l.account_id}\n" for l in corpus.labels if l.account_class is AccountClass.SPAMMER
        )
    return paths


def gen_planted_dataset(
    n_accounts: int = 400,
    n_informative: int = 10,
    n_noise: int = 30,
    seed: int = 0,
) -> Dataset:
    """Balanced dataset whose ``informative_*`` columns shift with the class and
    whose ``noise_*`` columns do not."""
    rng = np.random.default_rng(seed)
    y = np.arange(n_accounts) % 2
    shifts = np.linspace(1.5, 3.0, n_informative)
    informative = rng.normal(size=(n_accounts, n_informative)) + np.outer(y, shifts)
    noise = rng.normal(size=(n_accounts, n_noise))
    names = [f"informative_{i}" for i in range(n_informative)] + [
        f"noise_{i}" for i in range(n_noise)
    ]
    return Dataset(np.hstack([informative, noise]), y, names)
