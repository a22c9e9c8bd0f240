import numpy as np
import pytest

from spamhunter.exceptions import InputError, TrainingError
from spamhunter.features.base import FeatureVector
from spamhunter.labeling.workflow import is_valid_trace
from spamhunter.preprocessing.datasets.base import Dataset
from spamhunter.preprocessing.datasets.synthetic import (
    generate_corpus,
    gen_planted_dataset,
    gen_synthetic_corpus,
    synthetic_catalog,
    write_synthetic_corpus,
)
from spamhunter.preprocessing.reader import parse_corpus
from spamhunter.preprocessing.structures import AccountClass


def _vectors():
    return [
        FeatureVector("a", {"f": 1.0, "g": 2.0}),
        FeatureVector("b", {"f": 3.0, "g": 4.0}),
        FeatureVector("c", {"f": 5.0, "g": 6.0}),
    ]


def test_from_vectors_joins_labels():
    labels = {"a": AccountClass.SPAMMER, "c": AccountClass.COMPROMISED}
    ds = Dataset.from_vectors(_vectors(), labels, ["g", "f"])
    assert ds.account_ids == ("a", "c")
    assert ds.y.tolist() == [1, 0]
    assert ds.classes == (AccountClass.SPAMMER, AccountClass.COMPROMISED)
    assert ds.X.tolist() == [[2.0, 1.0], [6.0, 5.0]]
    with pytest.raises(InputError):
        Dataset.from_vectors(_vectors(), {})


def test_dataset_validation():
    with pytest.raises(InputError):
        Dataset([[np.nan]], [1], ["f"])
    with pytest.raises(InputError):
        Dataset([[1.0]], [2], ["f"])
    ds = Dataset([[1.0, 2.0], [3.0, 4.0]], [1, 0], ["f", "g"])
    with pytest.raises(InputError):
        ds.project(["h"])
    assert ds.project(["g"]).X.tolist() == [[2.0], [4.0]]
    assert ds.subset([1]).account_ids == ("1",)
    with pytest.raises(TrainingError):
        ds.subset([0]).check_trainable()


def test_generated_corpus_is_consistent(small_corpus):
    assert len(small_corpus.snapshots) == 28
    classes = [label.account_class for label in small_corpus.labels]
    assert classes.count(AccountClass.SPAMMER) == 12
    assert classes.count(AccountClass.COMPROMISED) == 4
    for acc, label, evidence in zip(
        small_corpus.snapshots, small_corpus.labels, small_corpus.evidence
    ):
        assert len(acc.recent_tweets) == 20
        assert label.account_id == acc.account_id == evidence.account_id
        assert evidence.tweet_id == acc.recent_tweets[0].tweet_id
        assert evidence.is_spam is (label.account_class is not AccountClass.NON_SPAMMER)
        assert is_valid_trace(label.verdict_trace, label.account_class)
        if label.account_class is AccountClass.SPAMMER:
            assert label.automation.is_automated
        else:
            assert not label.automation.is_automated


def test_generation_is_seeded():
    first = gen_synthetic_corpus(3, 3, seed=11, n_tweets=12)
    assert gen_synthetic_corpus(3, 3, seed=11, n_tweets=12) == first
    assert gen_synthetic_corpus(3, 3, seed=12, n_tweets=12)[0] != first[0]
    with pytest.raises(InputError):
        generate_corpus(1, 1, n_tweets=5)


def test_written_corpus_parses_back(small_corpus, tmp_path):
    paths = write_synthetic_corpus(small_corpus, tmp_path)
    snapshots, stats = parse_corpus(paths["corpus"], strict=True, progress=False)
    assert snapshots == small_corpus.snapshots
    assert stats.warnings == 0
    seeds = (tmp_path / "seeds.txt").read_text(encoding="utf-8").split()
    assert len(seeds) == 12
    assert synthetic_catalog().classify("IFTTT").value == "automated"


def test_planted_dataset():
    ds = gen_planted_dataset(n_accounts=100, n_informative=4, n_noise=6, seed=3)
    assert ds.X.shape == (100, 10)
    assert int(ds.y.sum()) == 50
    assert ds.feature_names[:4] == tuple(f"informative_{i}" for i in range(4))
