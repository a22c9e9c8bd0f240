from collections import OrderedDict

from spamhunter.exceptions import InputError
from spamhunter.features.base import safe_div, window_days
from spamhunter.preprocessing.structures import AccountSnapshot


def profile_features(acc: AccountSnapshot) -> "OrderedDict[str, float]":
    """Social-graph counters, their ratios and the global/recent tweeting rates."""
    age = acc.age_days
    if age <= 0:
        raise InputError(f"account {acc.account_id}: non-positive age {age}")
    followers = acc.followers_count
    friends = acc.friends_count
    return OrderedDict(
        [
            ("followers", followers),
            ("friends", friends),
            ("ratio_fpf", safe_div(followers, friends)),
            ("ratio_alt", safe_div(friends, followers**2)),
            ("reputation", safe_div(followers, friends + followers)),
            ("followers_per_day", followers / age),
            ("friends_per_day", friends / age),
            ("statuses_count", acc.statuses_count),
            ("listed_count", acc.listed_count),
            ("favourites_count", acc.favourites_count),
            ("age_days", age),
            ("tweeting_freq_global", acc.statuses_count / age),
            ("tweeting_freq_recent", len(acc.recent_tweets) / window_days(acc)),
        ]
    )
