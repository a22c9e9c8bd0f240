from collections import OrderedDict
from typing import FrozenSet, Iterable
import logging
import string

from spamhunter.exceptions import InputError
from spamhunter.features.base import require_tweets
from spamhunter.preprocessing.store import atomic_writer
from spamhunter.preprocessing.structures import AccountSnapshot

logger = logging.getLogger(__name__)

# ASCII punctuation plus Arabic comma, semicolon and question mark
TOKEN_PUNCTUATION = string.punctuation + "،؛؟"


def fold_token(token: str) -> str:
    return token.strip(TOKEN_PUNCTUATION).casefold()


class SpamDictionary:
    """Case-folded spam terms matched against whole tweet tokens."""

    def __init__(self, terms: Iterable[str] = ()):
        self.terms: FrozenSet[str] = frozenset(
            t for t in (fold_token(term) for term in terms) if t
        )

    def __len__(self):
        return len(self.terms)

    def __contains__(self, token):
        return fold_token(token) in self.terms

    def __iter__(self):
        return iter(sorted(self.terms))

    def __eq__(self, other):
        return isinstance(other, SpamDictionary) and self.terms == other.terms

    def matches(self, text: str) -> bool:
        return any(fold_token(token) in self.terms for token in text.split())

    @classmethod
    def load(cls, path) -> "SpamDictionary":
        with open(path, "r", encoding="utf-8") as f:
            dictionary = cls(line.strip() for line in f)
        logger.info("loaded %d spam terms from %s", len(dictionary), path)
        return dictionary

    def save(self, path):
        with atomic_writer(path) as f:
            f.writelines(f"{term}\n" for term in self)


def dictionary_feature(
    acc: AccountSnapshot, dictionary: SpamDictionary
) -> "OrderedDict[str, float]":
    if not len(dictionary):
        raise InputError("spam dictionary is empty")
    tweets = require_tweets(acc)
    hits = sum(1 for t in tweets if dictionary.matches(t.text))
    return OrderedDict(frac_tweets_spamterm=hits / len(tweets))
