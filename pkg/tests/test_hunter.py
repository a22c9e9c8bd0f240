import numpy as np
import pytest

from spamhunter.exceptions import InputError
from spamhunter.hunter import (
    UNRESOLVED,
    CorpusEdgeProvider,
    HuntLimits,
    HuntQueue,
    MockEdgeProvider,
    Provenance,
    expand,
    hunt,
    load_seeds,
    snapshot_index,
)
from spamhunter.models.base import train
from spamhunter.preprocessing.datasets.base import Dataset
from tests.builders import account, timeline, tweet

SPAMMERS = [f"n{i}" for i in range(20)]
LEGIT = [f"n{i}" for i in range(20, 50)]


@pytest.fixture(scope="module")
def model():
    ds = Dataset(np.array([[100.0], [80.0], [1.0], [0.5]]), [1, 1, 0, 0], ["tweeting_freq_global"])
    return train(ds, "decision_tree")


def _snapshot(account_id, spammer):
    return account(
        account_id,
        timeline(["hello there", "another day"], account_id),
        statuses_count=10000 if spammer else 10,
    )


@pytest.fixture(scope="module")
def snapshots():
    return snapshot_index(
        [_snapshot(a, True) for a in SPAMMERS] + [_snapshot(a, False) for a in LEGIT]
    )


def _graph():
    """n0 is followed by spammers n1-n5 and two humans; n1-n5 lead to n6-n19."""
    followers = {"n0": ["n1", "n2", "n3", "n20", "n21"], "n20": ["n40", "n41"]}
    retweeters = {"n0": ["n4", "n5", "n22"]}
    for k, source in enumerate(["n1", "n2", "n3", "n4", "n5"]):
        followers[source] = SPAMMERS[6 + 3 * k : 9 + 3 * k] + [LEGIT[3 + k]]
    retweeters["n5"] = ["n18", "n19", "n1"]
    return followers, retweeters


def test_queue_admits_each_account_once():
    q = HuntQueue(HuntLimits(max_depth=1, max_accounts=3))
    assert q.push("a", Provenance.SEED, None, 0)
    assert not q.push("a", Provenance.FOLLOWER_OF, "x", 1)
    assert not q.push("b", Provenance.FOLLOWER_OF, "a", 2)
    assert q.push("b", Provenance.FOLLOWER_OF, "a", 1)
    assert q.push("c", Provenance.RETWEETER_OF, "a", 1)
    assert q.full
    assert not q.push("d", Provenance.FOLLOWER_OF, "a", 1)
    assert [q.pop().account_id for _ in range(len(q))] == ["a", "b", "c"]
    with pytest.raises(InputError):
        HuntLimits(max_accounts=0)


def test_expand_merges_followers_and_retweeters():
    q = HuntQueue()
    q.push("s", Provenance.SEED, None, 0)
    provider = MockEdgeProvider({"s": ["a", "b", "c"]}, {"s": ["c", "d"]})
    assert expand(q, provider, "s", 0) == 4
    entries = [q.pop() for _ in range(len(q))][1:]
    assert [(e.account_id, e.provenance, e.depth) for e in entries] == [
        ("a", Provenance.FOLLOWER_OF, 1),
        ("b", Provenance.FOLLOWER_OF, 1),
        ("c", Provenance.FOLLOWER_OF, 1),
        ("d", Provenance.RETWEETER_OF, 1),
    ]
    assert expand(q, provider, "s", 2) == 0


def test_hunt_finds_the_spam_neighborhood(model, snapshots, spam_dictionary):
    provider = MockEdgeProvider(*_graph())
    results = hunt(["n0"], provider, model, snapshots, spam_dictionary, HuntLimits(2, 1000))
    found = {r.account_id for r in results if r.is_spammer}
    assert found == set(SPAMMERS)
    assert set(provider.queried) == {"n0", "n1", "n2", "n3", "n4", "n5"}
    assert len({r.account_id for r in results}) == len(results)
    assert max(r.depth for r in results) == 2
    assert results[0].provenance is Provenance.SEED
    n18 = next(r for r in results if r.account_id == "n18")
    assert (n18.source_id, n18.depth) == ("n5", 2)


def test_hunt_respects_max_accounts(model, snapshots, spam_dictionary):
    provider = MockEdgeProvider(*_graph())
    results = hunt(["n0"], provider, model, snapshots, spam_dictionary, HuntLimits(2, 10))
    assert len(results) == 10


def test_hunt_survives_cycles_and_failures(model, snapshots, spam_dictionary, caplog):
    provider = MockEdgeProvider(
        {"n0": ["n1", "ghost"], "n1": ["n0", "n2"], "n2": ["n1"]}, failing={"n2"}
    )
    results = hunt(["n0", "n20"], provider, model, snapshots, spam_dictionary, HuntLimits(5, 100))
    assert [r.account_id for r in results] == ["n0", "n20", "n1", "ghost", "n2"]
    ghost = results[3]
    assert (ghost.account_class, ghost.score) == (UNRESOLVED, None)
    assert results[1].account_class == "non_spammer"
    assert "expansion of n2 skipped" in caplog.text


def test_hunt_marks_unextractable_accounts(model, spam_dictionary):
    empty = account("e")
    results = hunt(["e"], MockEdgeProvider(), model, {"e": empty}, spam_dictionary)
    assert results[0].account_class == UNRESOLVED


def test_corpus_edge_provider(tmp_path):
    edges = tmp_path / "edges.csv"
    edges.write_text("follower_id,followee_id\nb,a\nc,a\nc,b\n", encoding="utf-8")
    retweet = tweet("r1", "RT @a hi", "c", is_retweet=True, retweeted_author_id="a")
    snapshots = [account("a", timeline(["x"], "a")), account("c", [retweet])]
    provider = CorpusEdgeProvider.from_snapshots(snapshots, edges)
    assert provider.followers_of("a") == ["b", "c"]
    assert provider.retweeters_of("a") == ["c"]
    assert provider.followers_of("z") == []
    edges.write_text("src,dst\nb,a\n", encoding="utf-8")
    with pytest.raises(InputError):
        CorpusEdgeProvider.from_snapshots(snapshots, edges)


def test_load_seeds(tmp_path):
    path = tmp_path / "seeds.txt"
    path.write_text("# seeds\n 42 \n\n7\n", encoding="utf-8")
    assert load_seeds(path) == ["42", "7"]
