from collections import Counter, OrderedDict
from typing import Callable, Dict, Sequence

from spamhunter.features.base import describe, require_tweets, safe_div, window_days
from spamhunter.preprocessing.structures import AccountSnapshot, TweetRecord, word_count

# Hashtags and mentions are case-insensitive handles; URLs are compared in their
# final (expanded) form exactly as stored.
ENTITY_KINDS: Dict[str, Callable[[TweetRecord], Sequence[str]]] = OrderedDict(
    [
        ("url", lambda t: t.urls),
        ("hashtag", lambda t: [h.casefold() for h in t.hashtags]),
        ("mention", lambda t: [m.casefold() for m in t.mentions]),
    ]
)


def diversity_index(counts: Sequence[int]) -> float:
    """True diversity 1 / sum(p_i^2), computed as N^2 / sum(c_i^2); 0 without uses."""
    total = sum(counts)
    if total == 0:
        return 0.0
    return total * total / sum(c * c for c in counts)


def entity_features(acc: AccountSnapshot) -> "OrderedDict[str, float]":
    tweets = require_tweets(acc)
    days = window_days(acc)
    words = [max(1, word_count(t.text)) for t in tweets]
    features = OrderedDict()
    for kind, entities_of in ENTITY_KINDS.items():
        per_tweet = [list(entities_of(t)) for t in tweets]
        uses = Counter(e for entities in per_tweet for e in entities)
        total = sum(uses.values())
        diversity = diversity_index(list(uses.values()))
        features[f"frac_tweets_with_{kind}"] = sum(1 for e in per_tweet if e) / len(tweets)
        features[f"nb_{kind}"] = total
        features[f"nb_unique_{kind}"] = len(uses)
        features[f"avg_uses_{kind}"] = safe_div(total, len(uses))
        features[f"diversity_{kind}"] = diversity
        features[f"adjusted_uses_{kind}"] = safe_div(total, diversity)
        features[f"per_day_{kind}"] = total / days
        counts = [len(e) for e in per_tweet]
        features.update(describe(counts, f"{kind}_per_tweet"))
        features.update(describe((c / w for c, w in zip(counts, words)), f"{kind}_per_word"))
    return features
