from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional, Tuple
import re

from spamhunter.exceptions import InputError

MAX_RECENT_TWEETS = 200
SECONDS_PER_DAY = 86400
RETWEET_MARKER = "RT"
AUTOMATION_THRESHOLD = 0.80

_URL_PREFIX = re.compile(r"^(https?://|www\.)", re.IGNORECASE)


class SourceCategory(str, Enum):
    OFFICIAL = "official"
    TRUSTED = "trusted"
    AUTOMATED = "automated"
    UNKNOWN = "unknown"


class AccountClass(str, Enum):
    SPAMMER = "spammer"
    NON_SPAMMER = "non_spammer"
    COMPROMISED = "compromised"

    @property
    def binary(self) -> "AccountClass":
        """Compromised accounts train and evaluate as non-spammers."""
        if self is AccountClass.SPAMMER:
            return AccountClass.SPAMMER
        return AccountClass.NON_SPAMMER


class Automation(str, Enum):
    AUTOMATED = "automated"
    HUMAN_OPERATED = "human_operated"


def is_url_token(token: str) -> bool:
    return bool(_URL_PREFIX.match(token))


def normalize_text(text: str) -> str:
    """Strip hashtags, mentions, URLs and the leading retweet marker.

    The result is the core text used for near-duplicate detection; surviving
    tokens are kept verbatim and joined by single spaces.
    """
    tokens = [
        t
        for t in text.split()
        if not (t.startswith("#") or t.startswith("@") or is_url_token(t))
    ]
    while tokens and tokens[0] == RETWEET_MARKER:
        tokens.pop(0)
    return " ".join(tokens)


def word_count(text: str) -> int:
    return len(text.split())


@dataclass(frozen=True)
class TweetRecord:
    tweet_id: str
    author_id: str
    text: str
    created_at: int
    source_name: str = ""
    source_url: Optional[str] = None
    is_retweet: bool = False
    retweeted_author_id: Optional[str] = None
    retweet_count: int = 0
    favorite_count: int = 0
    hashtags: Tuple[str, ...] = ()
    mentions: Tuple[str, ...] = ()
    urls: Tuple[str, ...] = ()
    image_count: int = 0

    def __post_init__(self):
        for name in ("hashtags", "mentions", "urls"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "created_at", int(self.created_at))
        if not self.tweet_id:
            raise InputError("tweet_id must be non-empty")
        if self.is_retweet != (self.retweeted_author_id is not None):
            raise InputError(
                f"tweet {self.tweet_id}: is_retweet requires retweeted_author_id and vice versa"
            )
        if min(self.retweet_count, self.favorite_count, self.image_count) < 0:
            raise InputError(f"tweet {self.tweet_id}: negative counter")

    @property
    def is_reply(self) -> bool:
        tokens = self.text.split()
        return bool(tokens) and tokens[0].startswith("@")

    @property
    def has_entity(self) -> bool:
        return bool(self.hashtags or self.mentions or self.urls or self.image_count)

    def to_dict(self) -> dict:
        d = asdict(self)
        for name in ("hashtags", "mentions", "urls"):
            d[name] = list(d[name])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TweetRecord":
        return cls(**{k: d[k] for k in TWEET_FIELDS if k in d})


TWEET_FIELDS = tuple(TweetRecord.__dataclass_fields__)


@dataclass(frozen=True)
class AccountSnapshot:
    account_id: str
    screen_name: str
    created_at: int
    followers_count: int = 0
    friends_count: int = 0
    statuses_count: int = 0
    listed_count: int = 0
    favourites_count: int = 0
    recent_tweets: Tuple[TweetRecord, ...] = ()
    snapshot_at: int = 0

    def __post_init__(self):
        tweets = tuple(
            sorted(
                self.recent_tweets,
                key=lambda t: (t.created_at, t.tweet_id),
                reverse=True,
            )
        )
        object.__setattr__(self, "recent_tweets", tweets)
        object.__setattr__(self, "created_at", int(self.created_at))
        object.__setattr__(self, "snapshot_at", int(self.snapshot_at))
        if len(tweets) > MAX_RECENT_TWEETS:
            raise InputError(
                f"account {self.account_id}: {len(tweets)} recent tweets exceed {MAX_RECENT_TWEETS}"
            )
        if self.snapshot_at < self.created_at:
            raise InputError(f"account {self.account_id}: snapshot precedes creation")
        counters = (
            self.followers_count,
            self.friends_count,
            self.statuses_count,
            self.listed_count,
            self.favourites_count,
        )
        if min(counters) < 0:
            raise InputError(f"account {self.account_id}: negative counter")
        for t in tweets:
            if t.author_id != self.account_id and not t.is_retweet:
                raise InputError(
                    f"account {self.account_id}: tweet {t.tweet_id} belongs to {t.author_id}"
                )

    @property
    def age_days(self) -> float:
        return (self.snapshot_at - self.created_at) / SECONDS_PER_DAY

    @property
    def chronological_tweets(self) -> Tuple[TweetRecord, ...]:
        return tuple(reversed(self.recent_tweets))

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in PROFILE_FIELDS}
        d["recent_tweets"] = [t.to_dict() for t in self.recent_tweets]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AccountSnapshot":
        kwargs = {k: d[k] for k in PROFILE_FIELDS if k in d}
        kwargs["recent_tweets"] = tuple(
            TweetRecord.from_dict(t) for t in d.get("recent_tweets", ())
        )
        return cls(**kwargs)


PROFILE_FIELDS = tuple(
    f for f in AccountSnapshot.__dataclass_fields__ if f != "recent_tweets"
)


@dataclass(frozen=True)
class AutomationStatus:
    status: Automation
    automation_index: float = field(default=0.0)

    def __post_init__(self):
        if not 0.0 <= self.automation_index <= 1.0:
            raise InputError(f"automation index {self.automation_index} outside [0, 1]")

    @classmethod
    def from_index(cls, index: float, threshold: float = AUTOMATION_THRESHOLD):
        status = Automation.AUTOMATED if index > threshold else Automation.HUMAN_OPERATED
        return cls(status, index)

    @property
    def is_automated(self) -> bool:
        return self.status is Automation.AUTOMATED
