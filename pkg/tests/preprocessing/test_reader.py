import json

import pytest

from spamhunter.exceptions import CorpusError, InputError
from spamhunter.preprocessing.reader import CorpusReader, parse_corpus, to_epoch


def _write(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write((row if isinstance(row, str) else json.dumps(row)) + "\n")
    return path


def _profile(account_id, **fields):
    return dict(kind="profile", account_id=account_id, created_at="2013-01-01T00:00:00Z", **fields)


def _tweet(tweet_id, author_id, created_at, text="hello", **fields):
    return dict(
        kind="tweet",
        tweet_id=tweet_id,
        author_id=author_id,
        text=text,
        created_at=created_at,
        **fields,
    )


def test_to_epoch():
    assert to_epoch("2013-01-01T00:00:00Z") == 1356998400
    assert to_epoch("2013-01-01T00:00:00") == 1356998400
    assert to_epoch("2013-01-01T02:00:00+02:00") == 1356998400
    assert to_epoch(1356998400) == 1356998400
    assert to_epoch("1356998400") == 1356998400
    with pytest.raises(InputError):
        to_epoch(True)
    with pytest.raises(InputError):
        to_epoch("yesterday-ish")


def test_parse_corpus_groups_tweets_by_author(tmp_path):
    path = _write(
        tmp_path / "corpus.jsonl",
        [
            _profile(1, screen_name="alice", followers_count=5),
            _tweet("t1", 1, 1357000000, hashtags=["a"]),
            _tweet("t2", "1", 1357100000),
            _tweet("t3", 2, 1357000000),
            _profile(3),
        ],
    )
    snapshots, stats = parse_corpus(path, progress=False)
    assert [s.account_id for s in snapshots] == ["1", "3"]
    alice = snapshots[0]
    assert alice.screen_name == "alice"
    assert [t.tweet_id for t in alice.recent_tweets] == ["t2", "t1"]
    assert alice.recent_tweets[1].hashtags == ("a",)
    assert alice.snapshot_at == 1357100000
    assert snapshots[1].screen_name == "3"
    assert stats.dropped_accounts == 1
    assert stats.orphan_tweets == 1


def test_malformed_and_duplicate_lines_are_counted(tmp_path):
    path = _write(
        tmp_path / "corpus.jsonl",
        [
            _profile(1),
            "{not json",
            _tweet("t1", 1, 1357000000),
            _tweet("t1", 1, 1357000001),
            _profile(1),
            dict(kind="like", account_id=1),
            _tweet("t2", 1, "not a date"),
            "",
        ],
    )
    snapshots, stats = parse_corpus(path, progress=False)
    assert len(snapshots[0].recent_tweets) == 1
    assert stats.lines == 7
    assert stats.malformed == 3
    assert stats.duplicate_tweets == 1
    assert stats.duplicate_profiles == 1
    assert stats.warnings == 5


def test_strict_mode_reports_the_line(tmp_path):
    path = _write(tmp_path / "corpus.jsonl", [_profile(1), _tweet("t1", 1, 1357000000), "[1, 2]"])
    with pytest.raises(CorpusError) as e:
        CorpusReader(strict=True, progress=False).read(path)
    assert e.value.line_number == 3


def test_recent_tweets_are_truncated_to_the_newest(tmp_path):
    rows = [_profile(1)] + [_tweet(f"t{i}", 1, 1357000000 + i) for i in range(5)]
    path = _write(tmp_path / "corpus.jsonl", rows)
    snapshots, stats = CorpusReader(max_tweets=2, progress=False).read(path)
    assert [t.tweet_id for t in snapshots[0].recent_tweets] == ["t4", "t3"]
    assert stats.truncated_accounts == 1


@pytest.mark.parametrize("followers", ["300", None, -1, 2.5, True])
def test_profile_with_bad_counter_is_skipped(tmp_path, followers):
    path = _write(
        tmp_path / "corpus.jsonl",
        [_profile("a", followers_count=followers), _profile("b", followers_count=300.0)],
    )
    snapshots, stats = parse_corpus(path, progress=False)
    assert [s.account_id for s in snapshots] == ["b"]
    assert snapshots[0].followers_count == 300
    assert stats.malformed == 1
    with pytest.raises(CorpusError) as e:
        CorpusReader(strict=True, progress=False).read(path)
    assert e.value.line_number == 1
