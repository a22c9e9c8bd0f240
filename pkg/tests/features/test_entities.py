import pytest

from spamhunter.features.entities import diversity_index, entity_features
from tests.builders import T0, account, tweet


def _tagged(tags_per_tweet, **fields):
    return [
        tweet(i, " ".join(f"w #{h}" for h in tags), at=T0 + 60 * i, hashtags=tags, **fields)
        for i, tags in enumerate(tags_per_tweet)
    ]


def test_diversity_of_one_dominant_hashtag():
    tags = [("h1",)] * 147 + [(f"other{i}",) for i in range(20)]
    f = entity_features(account(tweets=_tagged(tags)))
    assert f["nb_hashtag"] == 167
    assert f["nb_unique_hashtag"] == 21
    assert f["diversity_hashtag"] == pytest.approx(1.2894, abs=5e-3)
    assert f["adjusted_uses_hashtag"] == pytest.approx(167 / f["diversity_hashtag"])


def test_diversity_of_singletons():
    assert diversity_index([1] * 9) == 9.0
    urls = [
        tweet(i, f"link http://u{i}.example", at=T0 + i, urls=(f"http://u{i}.example",))
        for i in range(9)
    ]
    f = entity_features(account(tweets=urls))
    assert f["diversity_url"] == 9.0
    assert f["avg_uses_url"] == 1.0
    assert f["frac_tweets_with_url"] == 1.0


def test_diversity_without_uses():
    assert diversity_index([]) == 0.0
    f = entity_features(account(tweets=[tweet(1, "no entities here")]))
    assert f["diversity_mention"] == 0.0
    assert f["adjusted_uses_mention"] == 0.0


def test_hashtags_and_mentions_ignore_case():
    tweets = [
        tweet(1, "#Deal @Bob", at=T0, hashtags=("Deal",), mentions=("Bob",)),
        tweet(2, "#deal @bob", at=T0 + 1, hashtags=("deal",), mentions=("bob",)),
    ]
    f = entity_features(account(tweets=tweets))
    assert f["nb_unique_hashtag"] == 1
    assert f["nb_unique_mention"] == 1
    assert f["nb_mention"] == 2


def test_per_tweet_and_per_word_statistics():
    tweets = [
        tweet(1, "hi @a @b @c", at=T0, mentions=("a", "b", "c")),
        tweet(2, "hello there", at=T0 + 3600),
    ]
    f = entity_features(account(tweets=tweets))
    assert f["mention_per_tweet_max"] == 3
    assert f["mention_per_tweet_avg"] == 1.5
    assert f["mention_per_word_max"] == 0.75
    assert f["frac_tweets_with_mention"] == 0.5
    assert f["per_day_mention"] == pytest.approx(3 * 24)
