from pathlib import Path
import json

import pytest

from spamhunter.exceptions import InputError
from spamhunter.features.base import FeatureVector
from spamhunter.features.catalog import (
    FEATURE_GROUPS,
    catalog_names,
    extract,
    extract_all,
    load_features,
    save_features,
)
from spamhunter.features.dictionary import SpamDictionary
from spamhunter.preprocessing.structures import AccountSnapshot
from tests.builders import account, timeline

DATA = Path(__file__).parent / "data"


def _load(name):
    return json.loads((DATA / name).read_text(encoding="utf-8"))


def test_catalog_is_ordered_and_complete():
    names = catalog_names()
    assert len(names) == 76
    assert len(set(names)) == 76
    assert names[0] == "followers"
    assert names[-1] == "frac_tweets_spamterm"
    assert list(FEATURE_GROUPS)[0] == "profile"
    with pytest.raises(InputError):
        catalog_names("v0")


def test_extract_follows_catalog(spam_dictionary):
    acc = account(tweets=timeline(["free followers #x", "hello @bob"], hashtags=("x",)))
    v = extract(acc, spam_dictionary)
    assert tuple(v) == catalog_names()
    assert v.account_id == "1"
    assert v["frac_tweets_spamterm"] == 0.5


def test_golden_account_matches_stored_vector():
    acc = AccountSnapshot.from_dict(_load("golden_account.json"))
    golden = FeatureVector.from_dict(_load("golden_vector.json"))
    v = extract(acc, SpamDictionary(["cheap"]))
    assert v.account_id == golden.account_id
    assert list(v) == list(golden)
    for name, value in golden.items():
        assert v[name] == pytest.approx(value, rel=1e-12, abs=1e-15), name


def test_duplicate_threshold_is_configurable(spam_dictionary):
    acc = account(tweets=timeline(["hello", "hallo"]))
    assert extract(acc, spam_dictionary)["nb_replicates"] == 0
    assert extract(acc, spam_dictionary, duplicate_threshold=0.7)["nb_replicates"] == 1


def test_extract_all_skips_unextractable(spam_dictionary, tmp_path):
    snapshots = [
        account("1", timeline(["a b"], "1")),
        account("2"),
        account("3", timeline(["c d"], "3")),
    ]
    vectors = extract_all(snapshots, spam_dictionary, progress=False)
    assert [v.account_id for v in vectors] == ["1", "3"]
    save_features(vectors, tmp_path / "features.jsonl")
    assert load_features(tmp_path / "features.jsonl") == vectors
    with pytest.raises(InputError):
        extract_all(snapshots, SpamDictionary(), progress=False)


def test_extraction_is_independent_of_jobs(small_corpus, spam_dictionary):
    serial = extract_all(small_corpus.snapshots, spam_dictionary, jobs=1, progress=False)
    parallel = extract_all(small_corpus.snapshots, spam_dictionary, jobs=2, progress=False)
    assert serial == parallel
