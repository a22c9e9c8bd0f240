import pytest

from spamhunter.config import CONFIG_ENV
from spamhunter.features.dictionary import SpamDictionary
from spamhunter.labeling.oracle import HumanVerdictProvider
from spamhunter.preprocessing.datasets.synthetic import SPAM_TERMS, generate_corpus


class FailingOracle(HumanVerdictProvider):
    labeler = "failing"

    def _answer(self, subject, question, item, context):
        raise AssertionError(f"unexpected question {question.id} about {subject}")


@pytest.fixture(autouse=True)
def no_config_env(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV, raising=False)


@pytest.fixture
def failing_oracle():
    return FailingOracle()


@pytest.fixture
def spam_dictionary():
    return SpamDictionary(SPAM_TERMS)


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(12, 12, 4, seed=7, n_tweets=20)
