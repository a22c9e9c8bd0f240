from collections import OrderedDict
from functools import lru_cache
from typing import Iterable, List, Tuple
import logging
import os

from joblib import Parallel, delayed
import tqdm

from spamhunter.exceptions import InputError
from spamhunter.features.base import FeatureVector
from spamhunter.features.content import content_rates, reputation_features
from spamhunter.features.dictionary import SpamDictionary, dictionary_feature
from spamhunter.features.entities import entity_features
from spamhunter.features.profile import profile_features
from spamhunter.features.replication import DUPLICATE_THRESHOLD, replication_features
from spamhunter.preprocessing.store import read_jsonl, write_jsonl
from spamhunter.preprocessing.structures import AccountSnapshot

logger = logging.getLogger(__name__)

CATALOG_VERSION = "v1"

# Feature groups in catalog order; the dictionary group also needs the spam dictionary.
FEATURE_GROUPS = OrderedDict(
    [
        ("profile", profile_features),
        ("content", content_rates),
        ("entities", entity_features),
        ("replication", replication_features),
        ("reputation", reputation_features),
        ("dictionary", dictionary_feature),
    ]
)


@lru_cache(maxsize=None)
def catalog_names(version: str = CATALOG_VERSION) -> Tuple[str, ...]:
    path = os.path.join(os.path.dirname(__file__), "bin", f"catalog_{version}.txt")
    if not os.path.isfile(path):
        raise InputError(f"unknown feature catalog version {version!r}")
    with open(path, "r", encoding="utf-8") as f:
        return tuple(
            line.strip() for line in f if line.strip() and not line.startswith("#")
        )


def extract(
    acc: AccountSnapshot,
    dictionary: SpamDictionary,
    duplicate_threshold: float = DUPLICATE_THRESHOLD,
) -> FeatureVector:
    values = OrderedDict()
    for name, group in FEATURE_GROUPS.items():
        if name == "dictionary":
            values.update(group(acc, dictionary))
        elif name == "replication":
            values.update(group(acc, duplicate_threshold))
        else:
            values.update(group(acc))
    names = catalog_names()
    if tuple(values) != names:
        raise InputError(
            f"extracted feature set diverges from catalog {CATALOG_VERSION}: "
            f"{sorted(set(values) ^ set(names))}"
        )
    return FeatureVector(acc.account_id, values)


def _try_extract(acc, dictionary, duplicate_threshold):
    try:
        return extract(acc, dictionary, duplicate_threshold)
    except InputError as e:
        logger.warning("skipping account %s: %s", acc.account_id, e)
        return None


def extract_all(
    snapshots: List[AccountSnapshot],
    dictionary: SpamDictionary,
    jobs: int = 1,
    progress: bool = True,
    duplicate_threshold: float = DUPLICATE_THRESHOLD,
) -> List[FeatureVector]:
    """Extract every extractable snapshot, keeping input order."""
    if not len(dictionary):
        raise InputError("spam dictionary is empty")
    vectors = Parallel(n_jobs=jobs)(
        delayed(_try_extract)(acc, dictionary, duplicate_threshold)
        for acc in tqdm.tqdm(snapshots, disable=not progress, desc="extract")
    )
    kept = [v for v in vectors if v is not None]
    if len(kept) < len(snapshots):
        logger.warning("extracted %d of %d accounts", len(kept), len(snapshots))
    return kept


def save_features(vectors: Iterable[FeatureVector], path):
    write_jsonl((v.to_dict() for v in vectors), path)


def load_features(path) -> List[FeatureVector]:
    return [FeatureVector.from_dict(d) for d in read_jsonl(path)]
