from collections import Counter
from typing import Dict, Iterable, List, Optional, Tuple
import logging

import pandas as pd

from spamhunter.exceptions import InputError
from spamhunter.preprocessing.store import atomic_writer
from spamhunter.preprocessing.structures import AccountSnapshot, SourceCategory

logger = logging.getLogger(__name__)

CATALOG_COLUMNS = ["source_name", "category", "notes"]


class SourceCatalog:
    """Curated map from tweet source name to its category.

    Lookups are exact-name matches; names missing from the catalog are
    ``SourceCategory.UNKNOWN``.
    """

    def __init__(self, entries: Optional[Dict[str, SourceCategory]] = None, notes=None):
        self._entries = dict(entries or dict())
        self._notes = dict(notes or dict())

    def __len__(self):
        return len(self._entries)

    def __contains__(self, source_name):
        return source_name in self._entries

    def __iter__(self):
        return iter(self._entries)

    def classify(self, source_name: str) -> SourceCategory:
        return self._entries.get(source_name, SourceCategory.UNKNOWN)

    def notes(self, source_name: str) -> str:
        return self._notes.get(source_name, "")

    def add(self, source_name: str, category: SourceCategory, notes: str = ""):
        self._entries[source_name] = SourceCategory(category)
        self._notes[source_name] = notes

    @classmethod
    def load(cls, path) -> "SourceCatalog":
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
        if list(frame.columns) != CATALOG_COLUMNS:
            raise InputError(
                f"{path}: expected header {','.join(CATALOG_COLUMNS)}, "
                f"got {','.join(frame.columns)}"
            )
        catalog = cls()
        for row in frame.itertuples(index=False):
            try:
                category = SourceCategory(row.category.strip().lower())
            except ValueError as e:
                raise InputError(f"{path}: unknown category {row.category!r}") from e
            if row.source_name in catalog:
                logger.warning("duplicate catalog entry %r, keeping first", row.source_name)
                continue
            catalog.add(row.source_name, category, row.notes)
        logger.info("loaded %d sources from %s", len(catalog), path)
        return catalog

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(n, c.value, self._notes.get(n, "")) for n, c in self._entries.items()],
            columns=CATALOG_COLUMNS,
        )

    def save(self, path):
        with atomic_writer(path) as fout:
            self.to_frame().to_csv(fout, index=False, lineterminator="\n")


def classify_source(catalog: SourceCatalog, source_name: str) -> SourceCategory:
    return catalog.classify(source_name)


def source_activity_report(
    snapshots: Iterable[AccountSnapshot], catalog: Optional[SourceCatalog] = None
) -> List[Tuple[str, int, float]]:
    """Tweet count and share per source over all snapshots, most active first.

    With a catalog, sources it does not list are logged as curation candidates.
    """
    counts = Counter(t.source_name for s in snapshots for t in s.recent_tweets)
    total = sum(counts.values())
    if not total:
        return []
    if catalog is not None:
        missing = sorted(n for n in counts if n not in catalog)
        if missing:
            logger.warning("%d sources missing from the catalog: %s", len(missing), missing[:10])
    rows = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return [(name, n, n / total) for name, n in rows]


def activity_frame(report, catalog: Optional[SourceCatalog] = None) -> pd.DataFrame:
    frame = pd.DataFrame(report, columns=["source_name", "tweet_count", "share"])
    if catalog is not None:
        frame["category"] = [catalog.classify(n).value for n in frame["source_name"]]
    return frame
