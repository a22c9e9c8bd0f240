from typing import Iterable, List
import abc

import pandas as pd

from spamhunter.preprocessing.store import atomic_writer
from spamhunter.result.evaluation import ALL_FOLDS, metrics

PROCESSORS = dict()


class ResultProcessor(abc.ABC):
    """Collects result rows and writes them as one CSV file on close."""

    COLUMNS: List[str] = []

    @classmethod
    def _identifier(cls) -> str:
        raise NotImplementedError

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        assert (
            cls._identifier() not in PROCESSORS
        ), f"ResultProcessor {cls.__name__} does not have a unique identifier"
        PROCESSORS[cls._identifier()] = cls

    def __init__(self, path):
        self.path = path
        self._rows = []

    def start(self):
        self._rows = []

    def close(self):
        frame = pd.DataFrame(self._rows, columns=self.COLUMNS)
        with atomic_writer(self.path) as fout:
            frame.to_csv(fout, index=False, lineterminator="\n")

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            self.close()

    @abc.abstractmethod
    def process(self, item):
        raise NotImplementedError


class EvaluationProcessor(ResultProcessor):
    """Per-fold rows followed by one aggregate row per report."""

    COLUMNS = [
        "algo",
        "feature_set",
        "fold",
        "tp",
        "fp",
        "tn",
        "fn",
        "fp_rate",
        "recall",
        "precision",
        "f1",
        "compromised_flagged",
        "seed",
        "status",
    ]

    @classmethod
    def _identifier(cls):
        return "evaluation"

    def _row(self, report, fold, counts, flagged, status):
        if counts is None:
            values = dict(tp="", fp="", tn="", fn="", fp_rate="", recall="", precision="", f1="")
        else:
            values = dict(
                tp=counts.tp, fp=counts.fp, tn=counts.tn, fn=counts.fn, **metrics(counts)._asdict()
            )
        return dict(
            algo=report.algorithm,
            feature_set=report.feature_set,
            fold=fold,
            compromised_flagged=flagged,
            seed=report.seed,
            status=status,
            **values,
        )

    def process(self, report):
        for f in report.folds:
            status = f"failed: {f.error}" if f.failed else "ok"
            self._rows.append(
                self._row(report, f.fold, f.counts, f.compromised_flagged, status)
            )
        status = "partial" if report.partial else "ok"
        self._rows.append(
            self._row(report, ALL_FOLDS, report.counts, report.compromised_flagged, status)
        )


class PredictionProcessor(ResultProcessor):
    COLUMNS = ["account_id", "class", "score"]

    @classmethod
    def _identifier(cls):
        return "predictions"

    def process(self, item):
        account_id, label, score = item
        self._rows.append({"account_id": account_id, "class": label.value, "score": score})


class HuntProcessor(ResultProcessor):
    COLUMNS = ["account_id", "class", "score", "provenance", "source_id", "depth"]

    @classmethod
    def _identifier(cls):
        return "hunt"

    def process(self, entry):
        self._rows.append(entry.to_dict())


class RankingProcessor(ResultProcessor):
    COLUMNS = ["rank", "feature", "score", "method"]

    @classmethod
    def _identifier(cls):
        return "ranking"

    def process(self, ranking):
        self._rows.extend(ranking.to_rows())


def write_results(kind: str, items: Iterable, path):
    with PROCESSORS[kind](path) as processor:
        for item in items:
            processor.process(item)


def write_report(reports, path):
    write_results("evaluation", reports, path)
