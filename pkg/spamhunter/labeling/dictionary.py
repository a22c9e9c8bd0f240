from collections import Counter
from typing import List, Sequence
import logging

from spamhunter.exceptions import InputError
from spamhunter.features.dictionary import SpamDictionary, fold_token
from spamhunter.labeling.oracle import ACCEPT_TERM, HumanVerdictProvider
from spamhunter.preprocessing.structures import normalize_text

logger = logging.getLogger(__name__)

REVIEW_SUBJECT = "dictionary"


def term_frequencies(spam_texts: Sequence[str]) -> Counter:
    return Counter(
        token
        for text in spam_texts
        for token in (fold_token(w) for w in normalize_text(text).split())
        if token
    )


def build_spam_dictionary(
    spam_texts: Sequence[str], min_freq: int, review: HumanVerdictProvider
) -> SpamDictionary:
    """Frequent tokens of spam texts, kept only when the reviewer accepts them."""
    if not spam_texts:
        raise InputError("no spam texts to build a dictionary from")
    if min_freq < 1:
        raise InputError(f"min_freq must be positive, got {min_freq}")
    frequencies = term_frequencies(spam_texts)
    candidates: List[str] = [
        term
        for term, n in sorted(frequencies.items(), key=lambda item: (-item[1], item[0]))
        if n >= min_freq
    ]
    logger.info("%d candidate terms with frequency >= %d", len(candidates), min_freq)
    accepted = [
        term
        for term in candidates
        if review.ask(REVIEW_SUBJECT, ACCEPT_TERM, term, f"{term} ({frequencies[term]}x)")
        == "accept"
    ]
    if not accepted:
        raise InputError("every candidate term was rejected; the spam dictionary would be empty")
    return SpamDictionary(accepted)
