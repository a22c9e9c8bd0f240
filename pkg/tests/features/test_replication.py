from functools import lru_cache
from itertools import product

import pytest

from spamhunter.features import replication
from spamhunter.features.replication import (
    count_replicates,
    duplicate_band,
    is_duplicate,
    levenshtein,
    pairwise_similarities,
    replication_features,
    similarity,
)
from tests.builders import account, timeline


@lru_cache(maxsize=None)
def naive_distance(a, b):
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        naive_distance(a[1:], b) + 1,
        naive_distance(a, b[1:]) + 1,
        naive_distance(a[1:], b[1:]) + (a[0] != b[0]),
    )


def _strings(max_len, alphabet="abc"):
    return ["".join(p) for n in range(max_len + 1) for p in product(alphabet, repeat=n)]


def _check_against_naive(max_len):
    strings = _strings(max_len)
    for a in strings:
        for b in strings:
            d = naive_distance(a, b)
            assert levenshtein(a, b) == d, (a, b)
            banded = levenshtein(a, b, cutoff=2)
            assert banded == (d if d <= 2 else 3), (a, b)


def test_levenshtein_matches_naive_oracle():
    _check_against_naive(4)


@pytest.mark.slow
def test_levenshtein_matches_naive_oracle_exhaustively():
    _check_against_naive(6)


def test_levenshtein_examples():
    assert levenshtein("kitten", "sitting") == 3
    assert levenshtein("", "abc") == 3
    assert levenshtein("متابعين", "متابعون") == 1


def test_similarity():
    assert similarity("", "") == 1.0
    assert similarity("abcd", "abcf") == 0.75
    assert similarity("abc", "xyz") == 0.0


def test_banded_duplicate_check_agrees_with_similarity():
    for a, b in product(_strings(3, "ab"), repeat=2):
        for threshold in (0.5, 0.6, 0.9):
            assert is_duplicate(a, b, threshold) == (similarity(a, b) > threshold), (a, b)
    text = "Get thousands of real active followers"
    assert duplicate_band(text, text) == 4
    assert is_duplicate(text, text + " ok")
    assert not is_duplicate(text, "something else entirely")


def test_count_replicates():
    texts = ["buy followers now please", "buy followers now pleas", "hello", "hallo", "x"]
    assert count_replicates(texts) == 1
    assert count_replicates(texts, threshold=0.7) == 2
    assert count_replicates([]) == 0


def test_replicates_from_similarities_match_banded_count():
    texts = ["buy followers now please", "buy followers now pleas", "hello", "hallo", "x", ""]
    sims = pairwise_similarities(texts)
    for threshold in (0.5, 0.7, 0.9):
        assert count_replicates(texts, threshold, sims) == count_replicates(texts, threshold)


def test_replication_features_reuse_the_similarities(monkeypatch):
    def recomputed(*args):
        raise AssertionError("edit distances recomputed")

    monkeypatch.setattr(replication, "is_duplicate", recomputed)
    f = replication_features(account(tweets=timeline(["buy gold now 17", "buy gold now 18"])))
    assert f["nb_replicates"] == 1


def test_replication_features_use_core_text():
    acc = account(
        tweets=timeline(
            ["Great deal today #a http://x.co/1", "RT Great deal today #b @c", "nothing alike"]
        )
    )
    f = replication_features(acc)
    assert f["nb_replicates"] == 1
    other = similarity("Great deal today", "nothing alike")
    assert f["avg_similarity"] == pytest.approx((1.0 + 2 * other) / 3)
    single = replication_features(account(tweets=timeline(["alone"])))
    assert (single["avg_similarity"], single["nb_replicates"]) == (0.0, 0)
