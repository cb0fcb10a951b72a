import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional, Type, TypeVar

from grembed.cluster.kmeans import DEFAULT_K_MAX, DEFAULT_K_MIN, DEFAULT_MAX_ITER, DEFAULT_N_INIT
from grembed.embed.hope import DEFAULT_BETA_RATIO
from grembed.embed.spectral import DEFAULT_DIFFUSION_TIME
from grembed.embed.types import DEFAULT_DIMENSIONS, METHODS, Node2VecParams
from grembed.errors import ConfigValidationError
from grembed.hybrid.blend import DEFAULT_BLEND_EPOCHS, DEFAULT_BLEND_LR
from grembed.hybrid.mlp import DEFAULT_EPOCHS, DEFAULT_LR, DEFAULT_SPLIT_RATIO, FUSION_SUPPORT, FUSIONS
from grembed.hybrid.types import DEFAULT_HIDDEN
from grembed.ingest.activity import DEFAULT_MIN_REVIEWS
from grembed.ingest.ratings import DEFAULT_HIGH_THRESHOLD, DEFAULT_LOW_THRESHOLD
from grembed.recommend.recommender import DEFAULT_LOWER_BOUND, DEFAULT_NEIGHBORS, DEFAULT_UPPER_BOUND
from grembed.socialgraph.graph import DEFAULT_EPSILON

T = TypeVar("T")


@dataclass
class IngestConfig:
    reviews_path: str = "reviews.json"
    friends_path: str = "users.json"
    min_reviews: int = DEFAULT_MIN_REVIEWS
    high_threshold: int = DEFAULT_HIGH_THRESHOLD
    low_threshold: int = DEFAULT_LOW_THRESHOLD
    holdout_fraction: float = 0.3

    def validate(self) -> List[str]:
        errors = []
        if self.min_reviews < 1:
            errors.append("ingest.min_reviews must be >= 1")
        if not 1 <= self.low_threshold < self.high_threshold <= 5:
            errors.append("ingest thresholds must satisfy 1 <= low_threshold < high_threshold <= 5")
        if not 0.0 <= self.holdout_fraction < 1.0:
            errors.append("ingest.holdout_fraction must lie in [0, 1)")
        return errors


@dataclass
class GraphConfig:
    epsilon: float = DEFAULT_EPSILON

    def validate(self) -> List[str]:
        return ["graph.epsilon must be >= 0"] if self.epsilon < 0 else []


@dataclass
class Node2VecConfig:
    p: float = 1.0
    q: float = 1.0
    walks_per_node: int = 10
    walk_length: int = 80
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    lr: float = 0.025

    def params(self) -> Node2VecParams:
        return Node2VecParams(**asdict(self))

    def validate(self) -> List[str]:
        errors = []
        if self.p <= 0 or self.q <= 0:
            errors.append("node2vec.p and node2vec.q must be > 0")
        if self.walk_length < 2:
            errors.append("node2vec.walk_length must be >= 2")
        for name in ("walks_per_node", "window", "negatives"):
            if getattr(self, name) < 1:
                errors.append(f"node2vec.{name} must be >= 1")
        if self.epochs < 0:
            errors.append("node2vec.epochs must be >= 0")
        if self.lr <= 0:
            errors.append("node2vec.lr must be > 0")
        return errors


@dataclass
class SpectralConfig:
    strict: bool = False
    diffusion_time: float = DEFAULT_DIFFUSION_TIME

    def validate(self) -> List[str]:
        return ["spectral.diffusion_time must be >= 0"] if self.diffusion_time < 0 else []


@dataclass
class HopeConfig:
    beta: Optional[float] = None
    beta_ratio: float = DEFAULT_BETA_RATIO

    def validate(self) -> List[str]:
        errors = []
        if self.beta is not None and self.beta <= 0:
            errors.append("hope.beta must be > 0 when given")
        if not 0.0 < self.beta_ratio < 1.0:
            errors.append("hope.beta_ratio must lie in (0, 1)")
        return errors


@dataclass
class ClusterConfig:
    k_min: int = DEFAULT_K_MIN
    k_max: int = DEFAULT_K_MAX
    max_iter: int = DEFAULT_MAX_ITER
    n_init: int = DEFAULT_N_INIT

    def validate(self) -> List[str]:
        errors = []
        if self.k_min < 2 or self.k_max <= self.k_min:
            errors.append("cluster scan range must satisfy 2 <= k_min < k_max")
        if self.max_iter < 1 or self.n_init < 1:
            errors.append("cluster.max_iter and cluster.n_init must be >= 1")
        return errors


@dataclass
class RecommendConfig:
    lower_bound: int = DEFAULT_LOWER_BOUND
    upper_bound: int = DEFAULT_UPPER_BOUND
    n_neighbors: int = DEFAULT_NEIGHBORS
    cohort_size: int = 100
    max_items: int = 200

    def validate(self) -> List[str]:
        errors = []
        if not 1 <= self.lower_bound <= self.upper_bound:
            errors.append("recommend bounds must satisfy 1 <= lower_bound <= upper_bound")
        for name in ("n_neighbors", "cohort_size", "max_items"):
            if getattr(self, name) < 1:
                errors.append(f"recommend.{name} must be >= 1")
        return errors


@dataclass
class HybridConfig:
    split_ratio: float = DEFAULT_SPLIT_RATIO
    epochs: int = DEFAULT_EPOCHS
    lr: float = DEFAULT_LR
    hidden: List[int] = field(default_factory=lambda: list(DEFAULT_HIDDEN))
    weighted: bool = False
    blend_epochs: int = DEFAULT_BLEND_EPOCHS
    blend_lr: float = DEFAULT_BLEND_LR
    fusion: str = FUSION_SUPPORT

    def validate(self) -> List[str]:
        errors = []
        if self.fusion not in FUSIONS:
            errors.append(f"hybrid.fusion must be one of {list(FUSIONS)}")
        if not 0.0 < self.split_ratio < 1.0:
            errors.append("hybrid.split_ratio must lie in (0, 1)")
        if self.epochs < 0 or self.blend_epochs < 0:
            errors.append("hybrid.epochs and hybrid.blend_epochs must be >= 0")
        if self.lr <= 0 or self.blend_lr <= 0:
            errors.append("hybrid.lr and hybrid.blend_lr must be > 0")
        if not self.hidden or any(h < 1 for h in self.hidden):
            errors.append("hybrid.hidden must list positive layer widths")
        return errors


@dataclass
class EvaluateConfig:
    k_values: List[int] = field(default_factory=lambda: [20, 100, 200])
    sweep_k: List[int] = field(default_factory=lambda: [10, 20, 50, 100, 200])

    def validate(self) -> List[str]:
        errors = []
        if not self.k_values or any(k < 1 for k in self.k_values):
            errors.append("evaluate.k_values must list positive counts")
        if any(k < 1 for k in self.sweep_k):
            errors.append("evaluate.sweep_k must list positive counts")
        return errors


SECTIONS: Dict[str, Type] = {
    "ingest": IngestConfig,
    "graph": GraphConfig,
    "node2vec": Node2VecConfig,
    "spectral": SpectralConfig,
    "hope": HopeConfig,
    "cluster": ClusterConfig,
    "recommend": RecommendConfig,
    "hybrid": HybridConfig,
    "evaluate": EvaluateConfig,
}


@dataclass
class PipelineConfig:
    """
    Every knob of a pipeline run, one section per stage.

    Attributes:
    -----------
    seed : int
        Master seed; stage seeds are derived from it by name.
    output_dir : str
        Directory holding every artifact.
    dimensions : int
        Embedding dimension D shared by the three methods.
    methods : List[str]
        Embedding methods to run, in hybrid axis order.
    workers : int
        Threads for walk generation and per-user recommendation.
    progress : bool
        Show progress bars in the long-running loops.
    """

    seed: int = 0
    output_dir: str = "out"
    dimensions: int = DEFAULT_DIMENSIONS
    methods: List[str] = field(default_factory=lambda: list(METHODS))
    workers: int = 1
    progress: bool = False
    ingest: IngestConfig = field(default_factory=IngestConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    node2vec: Node2VecConfig = field(default_factory=Node2VecConfig)
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    hope: HopeConfig = field(default_factory=HopeConfig)
    cluster: ClusterConfig = field(default_factory=ClusterConfig)
    recommend: RecommendConfig = field(default_factory=RecommendConfig)
    hybrid: HybridConfig = field(default_factory=HybridConfig)
    evaluate: EvaluateConfig = field(default_factory=EvaluateConfig)

    def validate(self) -> List[str]:
        """Returns every violated constraint, empty when the config is usable."""
        errors = []
        if self.dimensions < 1:
            errors.append("dimensions must be >= 1")
        if self.workers < 1:
            errors.append("workers must be >= 1")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown or not self.methods or len(set(self.methods)) != len(self.methods):
            errors.append(f"methods must be distinct entries of {list(METHODS)}, got {self.methods}")
        for name in SECTIONS:
            errors.extend(getattr(self, name).validate())
        return errors

    def check(self) -> "PipelineConfig":
        """Raises ConfigValidationError listing every violation."""
        errors = self.validate()
        if errors:
            raise ConfigValidationError(errors)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PipelineConfig":
        """Builds a config from a (partial) mapping; missing keys keep their defaults.

        Raises:
            ConfigValidationError: On unknown keys, a non-object section, or violated constraints.
        """
        errors: List[str] = []
        kwargs: Dict[str, Any] = {}
        top_level = {f.name for f in fields(cls)}
        for key, value in data.items():
            if key not in top_level:
                errors.append(f"unknown key '{key}'")
            elif key in SECTIONS:
                section = _section_from_dict(SECTIONS[key], key, value, errors)
                if section is not None:
                    kwargs[key] = section
            else:
                kwargs[key] = value
        if errors:
            raise ConfigValidationError(errors)
        return cls(**kwargs).check()

    @classmethod
    def load(cls, path: str) -> "PipelineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as e:
                raise ConfigValidationError([f"{path} is not valid JSON: {e}"]) from e
        if not isinstance(data, dict):
            raise ConfigValidationError([f"{path} must hold a JSON object"])
        return cls.from_dict(data)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def _section_from_dict(section: Type[T], name: str, value: Any, errors: List[str]) -> Optional[T]:
    if not isinstance(value, dict):
        errors.append(f"section '{name}' must be a JSON object")
        return None
    known = {f.name for f in fields(section)}
    unknown = sorted(set(value) - known)
    errors.extend(f"unknown key '{name}.{key}'" for key in unknown)
    return section(**{k: v for k, v in value.items() if k in known})
