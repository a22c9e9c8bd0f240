from collections import OrderedDict

from spamhunter.features.base import describe, require_tweets
from spamhunter.preprocessing.structures import AccountSnapshot, word_count


def content_rates(acc: AccountSnapshot) -> "OrderedDict[str, float]":
    tweets = require_tweets(acc)
    retweets = sum(1 for t in tweets if t.is_retweet)
    replies = sum(1 for t in tweets if not t.is_retweet and t.is_reply)
    n = len(tweets)
    features = OrderedDict(
        [
            ("rate_retweet", retweets / n),
            ("rate_reply", replies / n),
            ("rate_original", (n - retweets - replies) / n),
        ]
    )
    features.update(describe((word_count(t.text) for t in tweets), "words_per_tweet"))
    return features


def reputation_features(acc: AccountSnapshot) -> "OrderedDict[str, float]":
    tweets = require_tweets(acc)
    features = describe((t.retweet_count for t in tweets), "retweets_per_tweet")
    features.update(describe((t.favorite_count for t in tweets), "favorites_per_tweet"))
    return features
