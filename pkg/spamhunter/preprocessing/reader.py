from collections import OrderedDict
from dataclasses import dataclass
from datetime import timezone
from typing import Dict, List, Tuple
import json
import logging
import math

from dateutil import parser as date_parser
import tqdm

from spamhunter.exceptions import CorpusError, InputError
from spamhunter.preprocessing.structures import (
    MAX_RECENT_TWEETS,
    PROFILE_FIELDS,
    TWEET_FIELDS,
    AccountSnapshot,
    TweetRecord,
)

logger = logging.getLogger(__name__)

PROFILE_KIND = "profile"
TWEET_KIND = "tweet"
PROFILE_COUNTERS = (
    "followers_count",
    "friends_count",
    "statuses_count",
    "listed_count",
    "favourites_count",
)


def to_epoch(value) -> int:
    """Accept epoch seconds or an ISO-8601 string; naive times are UTC."""
    if isinstance(value, bool):
        raise InputError(f"invalid timestamp {value!r}")
    if isinstance(value, (int, float)):
        return int(value)
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError:
            pass
        try:
            parsed = date_parser.isoparse(value)
        except ValueError as e:
            raise InputError(f"invalid timestamp {value!r}") from e
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        return int(parsed.timestamp())
    raise InputError(f"invalid timestamp {value!r}")


def to_count(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value) or value < 0 or value != int(value):
        raise InputError(f"{name} must be a non-negative integer, got {value!r}")
    return int(value)


@dataclass
class ParseStats:
    lines: int = 0
    malformed: int = 0
    duplicate_tweets: int = 0
    duplicate_profiles: int = 0
    orphan_tweets: int = 0
    dropped_accounts: int = 0
    truncated_accounts: int = 0

    @property
    def warnings(self) -> int:
        return (
            self.malformed
            + self.duplicate_tweets
            + self.duplicate_profiles
            + self.dropped_accounts
        )


class CorpusReader:
    """Reads line-delimited profile and tweet records into account snapshots."""

    def __init__(self, strict=False, max_tweets=MAX_RECENT_TWEETS, progress=True):
        self.strict = strict
        self.max_tweets = max_tweets
        self.progress = progress

    def _get_kind(self, row):
        return row.get("kind")

    def _read_profile(self, row) -> dict:
        profile = {k: row[k] for k in PROFILE_FIELDS if k in row}
        missing = {"account_id", "created_at"} - set(profile)
        if missing:
            raise InputError(f"profile record misses {sorted(missing)}")
        profile["account_id"] = str(profile["account_id"])
        profile.setdefault("screen_name", profile["account_id"])
        profile["created_at"] = to_epoch(profile["created_at"])
        for k in PROFILE_COUNTERS:
            if k in profile:
                profile[k] = to_count(profile[k], k)
        if "snapshot_at" in profile:
            profile["snapshot_at"] = to_epoch(profile["snapshot_at"])
        return profile

    def _read_tweet(self, row) -> TweetRecord:
        fields = {k: row[k] for k in TWEET_FIELDS if k in row}
        missing = {"tweet_id", "author_id", "text", "created_at"} - set(fields)
        if missing:
            raise InputError(f"tweet record misses {sorted(missing)}")
        fields["tweet_id"] = str(fields["tweet_id"])
        fields["author_id"] = str(fields["author_id"])
        fields["created_at"] = to_epoch(fields["created_at"])
        if fields.get("retweeted_author_id") is not None:
            fields["retweeted_author_id"] = str(fields["retweeted_author_id"])
        return TweetRecord(**fields)

    def _malformed(self, stats, line_number, reason):
        if self.strict:
            raise CorpusError(line_number, reason)
        stats.malformed += 1
        logger.debug("skipping line %d: %s", line_number, reason)

    def _iter_rows(self, path):
        with open(path, "r", encoding="utf-8") as corpus:
            for line_number, line in enumerate(
                tqdm.tqdm(corpus, disable=not self.progress, desc="corpus"), start=1
            ):
                yield line_number, line.strip()

    def read(self, path) -> Tuple[List[AccountSnapshot], ParseStats]:
        stats = ParseStats()
        profiles: Dict[str, dict] = OrderedDict()
        tweets: Dict[str, List[TweetRecord]] = dict()
        seen_tweets = set()
        for line_number, line in self._iter_rows(path):
            if not line:
                continue
            stats.lines += 1
            try:
                row = json.loads(line)
                if not isinstance(row, dict):
                    raise InputError("record is not an object")
                kind = self._get_kind(row)
                if kind == PROFILE_KIND:
                    profile = self._read_profile(row)
                elif kind == TWEET_KIND:
                    tweet = self._read_tweet(row)
                else:
                    raise InputError(f"unknown record kind {kind!r}")
            except (ValueError, TypeError) as e:
                self._malformed(stats, line_number, str(e))
                continue
            if kind == PROFILE_KIND:
                if profile["account_id"] in profiles:
                    stats.duplicate_profiles += 1
                else:
                    profiles[profile["account_id"]] = profile
            elif tweet.tweet_id in seen_tweets:
                stats.duplicate_tweets += 1
            else:
                seen_tweets.add(tweet.tweet_id)
                tweets.setdefault(tweet.author_id, []).append(tweet)

        orphans = [a for a in tweets if a not in profiles]
        stats.dropped_accounts = len(orphans)
        stats.orphan_tweets = sum(len(tweets[a]) for a in orphans)
        if orphans:
            logger.warning(
                "dropped %d accounts (%d tweets) without profile record",
                len(orphans),
                stats.orphan_tweets,
            )

        snapshots = []
        for account_id, profile in profiles.items():
            own = sorted(
                tweets.get(account_id, []),
                key=lambda t: (t.created_at, t.tweet_id),
                reverse=True,
            )
            if len(own) > self.max_tweets:
                stats.truncated_accounts += 1
                own = own[: self.max_tweets]
            if "snapshot_at" not in profile:
                newest = own[0].created_at if own else profile["created_at"]
                profile = dict(profile, snapshot_at=max(newest, profile["created_at"]))
            try:
                snapshots.append(AccountSnapshot(recent_tweets=tuple(own), **profile))
            except (InputError, TypeError) as e:
                if self.strict:
                    raise
                stats.malformed += 1
                logger.warning("dropping account %s: %s", account_id, e)
        logger.info(
            "parsed %d accounts from %d records (%d warnings)",
            len(snapshots),
            stats.lines,
            stats.warnings,
        )
        return snapshots, stats


def parse_corpus(path, strict=False, progress=True):
    return CorpusReader(strict=strict, progress=progress).read(path)
