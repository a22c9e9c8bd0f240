from dataclasses import dataclass, field
from typing import Optional
import logging
import os

from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException

from spamhunter.exceptions import InputError

logger = logging.getLogger(__name__)

CONFIG_ENV = "SPAMHUNTER_CONFIG"


@dataclass
class PathsConfig:
    corpus: Optional[str] = None
    catalog: Optional[str] = None
    blacklist: Optional[str] = None
    dictionary: Optional[str] = None
    snapshots: Optional[str] = None
    features: Optional[str] = None
    evidence: Optional[str] = None
    labels: Optional[str] = None
    model: Optional[str] = None
    edges: Optional[str] = None


@dataclass
class ThresholdsConfig:
    automation: float = 0.80
    duplicate: float = 0.90
    corr: float = 0.9
    top_k: int = 20

    def __post_init__(self):
        for name in ("automation", "duplicate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InputError(f"thresholds.{name} must be in [0, 1], got {getattr(self, name)}")
        if not 0.0 < self.corr <= 1.0:
            raise InputError(f"thresholds.corr must be in (0, 1], got {self.corr}")
        if self.top_k < 1:
            raise InputError(f"thresholds.top_k must be positive, got {self.top_k}")


@dataclass
class LearnConfig:
    n_trees: int = 100
    max_depth: Optional[int] = None
    min_leaf: int = 1
    boost_rounds: int = 50
    bins: int = 10
    k: int = 10

    def __post_init__(self):
        if self.n_trees < 1 or self.min_leaf < 1 or self.boost_rounds < 1:
            raise InputError(
                "learn.n_trees, learn.min_leaf and learn.boost_rounds must be positive"
            )
        if self.max_depth is not None and self.max_depth < 0:
            raise InputError(f"learn.max_depth must not be negative, got {self.max_depth}")
        if self.bins < 2:
            raise InputError(f"learn.bins must be at least 2, got {self.bins}")
        if self.k < 2:
            raise InputError(f"learn.k must be at least 2, got {self.k}")

    def algorithm_config(self, algorithm: str) -> dict:
        """Hyperparameters accepted by ``algorithm``."""
        if algorithm == "random_forest":
            return dict(n_trees=self.n_trees, max_depth=self.max_depth, min_leaf=self.min_leaf)
        if algorithm == "decision_tree":
            return dict(max_depth=self.max_depth, min_leaf=self.min_leaf)
        if algorithm == "adaboost":
            return dict(boost_rounds=self.boost_rounds)
        return dict()


@dataclass
class HunterConfig:
    max_depth: int = 2
    max_accounts: int = 1000


@dataclass
class PipelineConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    thresholds: ThresholdsConfig = field(default_factory=ThresholdsConfig)
    learn: LearnConfig = field(default_factory=LearnConfig)
    hunter: HunterConfig = field(default_factory=HunterConfig)
    seed: int = 0
    # joblib convention: -1 uses every available core
    jobs: int = -1

    def __post_init__(self):
        if self.jobs == 0:
            raise InputError("jobs must be non-zero")


def config_path(flag: Optional[str] = None) -> Optional[str]:
    return flag or os.environ.get(CONFIG_ENV) or None


def load_config(path: Optional[str] = None) -> PipelineConfig:
    """Defaults merged with the YAML file at ``path``; unknown keys are rejected."""
    schema = OmegaConf.structured(PipelineConfig)
    if path is None:
        return OmegaConf.to_object(schema)
    if not os.path.isfile(path):
        raise InputError(f"missing config file: {path}")
    try:
        merged = OmegaConf.merge(schema, OmegaConf.load(path))
        config = OmegaConf.to_object(merged)
    except OmegaConfBaseException as e:
        raise InputError(f"{path}: {e}") from e
    logger.info("loaded configuration from %s", path)
    return config
