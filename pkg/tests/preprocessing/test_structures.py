import pytest

from spamhunter.exceptions import InputError
from spamhunter.preprocessing.structures import (
    MAX_RECENT_TWEETS,
    AccountClass,
    AccountSnapshot,
    AutomationStatus,
    TweetRecord,
    normalize_text,
    word_count,
)
from tests.builders import T0, account, timeline, tweet


def test_normalize_text_strips_entities_and_retweet_markers():
    text = "RT RT @bob check this #deal http://x.co/1 out www.example.com"
    assert normalize_text(text) == "check this out"


def test_normalize_text_keeps_inner_rt():
    assert normalize_text("so RT this  please") == "so RT this please"


@pytest.mark.parametrize(
    "text",
    ["RT RT @a hi #x", "RT @a RT", "  spaced\tout  text ", "", "www.example.com", "plain"],
)
def test_normalize_text_is_idempotent_and_never_longer(text):
    once = normalize_text(text)
    assert normalize_text(once) == once
    assert len(once) <= len(text)


def test_word_count():
    assert word_count("  a\t b ") == 2
    assert word_count("") == 0
    for text in ("", " ", "\t\n ", "x", " x ", "a b"):
        assert (word_count(text) == 0) == (text.strip() == "")


def test_retweet_needs_original_author():
    with pytest.raises(InputError):
        TweetRecord("t1", "1", "RT @a hi", T0, is_retweet=True)
    with pytest.raises(InputError):
        TweetRecord("t1", "1", "hi", T0, retweeted_author_id="2")


def test_reply_is_leading_mention():
    assert tweet(1, "@bob see you").is_reply
    assert not tweet(1, "see you @bob").is_reply
    assert not tweet(1, "").is_reply


def test_snapshot_orders_tweets_newest_first():
    acc = account(tweets=timeline(["a", "b", "c"]))
    assert [t.text for t in acc.recent_tweets] == ["c", "b", "a"]
    assert [t.text for t in acc.chronological_tweets] == ["a", "b", "c"]


def test_snapshot_rejects_foreign_tweets():
    with pytest.raises(InputError):
        account("1", [tweet(1, author_id="2")])


def test_snapshot_limits():
    with pytest.raises(InputError):
        account(tweets=timeline(["x"] * (MAX_RECENT_TWEETS + 1)))
    with pytest.raises(InputError):
        AccountSnapshot("1", "a", created_at=T0, snapshot_at=T0 - 1)
    with pytest.raises(InputError):
        account(tweets=timeline(["x"]), followers_count=-1)


def test_snapshot_dict_round_trip():
    acc = account(
        tweets=timeline(["a #x", "b"], hashtags=("x",)), followers_count=3, friends_count=4
    )
    assert AccountSnapshot.from_dict(acc.to_dict()) == acc
    assert acc.age_days == pytest.approx(100.0)


@pytest.mark.parametrize(
    "index,automated", [(0.0, False), (0.79, False), (0.80, False), (0.81, True), (1.0, True)]
)
def test_automation_is_strictly_above_threshold(index, automated):
    assert AutomationStatus.from_index(index).is_automated is automated


def test_automation_index_range():
    with pytest.raises(InputError):
        AutomationStatus.from_index(1.5)


def test_compromised_trains_as_non_spammer():
    assert AccountClass.COMPROMISED.binary is AccountClass.NON_SPAMMER
    assert AccountClass.SPAMMER.binary is AccountClass.SPAMMER
