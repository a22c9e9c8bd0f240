from typing import Any, Dict, Optional, Sequence, Tuple
import abc
import json
import logging

import numpy as np

from spamhunter.exceptions import InputError
from spamhunter.features.base import FeatureVector
from spamhunter.preprocessing.datasets.base import Dataset
from spamhunter.preprocessing.store import atomic_writer, require_file
from spamhunter.preprocessing.structures import AccountClass

logger = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = 1
DECISION_THRESHOLD = 0.5

_MODEL_REGISTRY = dict()


class SpamModel(abc.ABC):
    """Binary spammer classifier over a fixed, ordered list of features.

    Subclasses register under ``NAME``; ``DEFAULTS`` lists every accepted
    hyperparameter.
    """

    NAME = None
    DEFAULTS: Dict[str, Any] = dict()

    def __init__(self, feature_names: Sequence[str] = (), seed: int = 0, jobs: int = 1, **config):
        unknown = set(config) - set(self.DEFAULTS)
        if unknown:
            raise InputError(f"{self.NAME}: unknown hyperparameters {sorted(unknown)}")
        self.feature_names = tuple(feature_names)
        self.seed = int(seed)
        self.jobs = jobs
        self.config = {k: config.get(k, v) for k, v in self.DEFAULTS.items()}

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.NAME in _MODEL_REGISTRY:
            raise ValueError(f"Model {cls.NAME} does already exist")
        _MODEL_REGISTRY[cls.NAME] = cls

    def fit(self, ds: Dataset) -> "SpamModel":
        ds.check_trainable()
        self.feature_names = ds.feature_names
        logger.debug("fitting %s on %r", self.NAME, ds)
        self._fit(ds.X, ds.y)
        return self

    @abc.abstractmethod
    def _fit(self, X: np.ndarray, y: np.ndarray):
        raise NotImplementedError

    @abc.abstractmethod
    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        """Spammer score in [0, 1] for every row of ``X``."""
        raise NotImplementedError

    def predict_classes(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba(X) > DECISION_THRESHOLD).astype(int)

    @abc.abstractmethod
    def _params(self) -> dict:
        raise NotImplementedError

    @abc.abstractmethod
    def _load_params(self, params: dict):
        raise NotImplementedError

    def to_dict(self) -> dict:
        return dict(
            format_version=MODEL_FORMAT_VERSION,
            algorithm=self.NAME,
            feature_names=list(self.feature_names),
            config=self.config,
            seed=self.seed,
            params=self._params(),
        )

    @classmethod
    def from_dict(cls, d: dict) -> "SpamModel":
        if d.get("format_version") != MODEL_FORMAT_VERSION:
            raise InputError(f"unsupported model format {d.get('format_version')!r}")
        model = get_model_class(d["algorithm"])(d["feature_names"], d["seed"], **d["config"])
        model._load_params(d["params"])
        return model


ALGORITHMS = ("naive_bayes", "decision_tree", "random_forest", "adaboost")


def get_model_class(name: str):
    # model modules register themselves on import
    from spamhunter.models import boost, forest, naive_bayes, tree  # noqa: F401

    try:
        return _MODEL_REGISTRY[name]
    except KeyError:
        raise InputError(f"unknown algorithm {name!r}, expected one of {ALGORITHMS}") from None


def train(
    ds: Dataset,
    algorithm: str,
    config: Optional[dict] = None,
    seed: int = 0,
    jobs: int = 1,
) -> SpamModel:
    model = get_model_class(algorithm)(ds.feature_names, seed, jobs=jobs, **(config or dict()))
    return model.fit(ds)


def predict(model: SpamModel, v: FeatureVector) -> Tuple[AccountClass, float]:
    score = float(model.predict_proba(v.as_array(model.feature_names)[None, :])[0])
    label = AccountClass.SPAMMER if score > DECISION_THRESHOLD else AccountClass.NON_SPAMMER
    return label, score


def dumps_model(model: SpamModel) -> str:
    return json.dumps(model.to_dict(), indent=1) + "\n"


def save_model(model: SpamModel, path):
    with atomic_writer(path) as f:
        f.write(dumps_model(model))


def load_model(path) -> SpamModel:
    with open(require_file(path, "model file"), "r", encoding="utf-8") as f:
        try:
            return SpamModel.from_dict(json.load(f))
        except (KeyError, ValueError, TypeError) as e:
            raise InputError(f"{path}: invalid model file ({e})") from e
