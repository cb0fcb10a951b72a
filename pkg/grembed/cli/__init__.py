from .config import (
    ClusterConfig,
    EvaluateConfig,
    GraphConfig,
    HopeConfig,
    HybridConfig,
    IngestConfig,
    Node2VecConfig,
    PipelineConfig,
    RecommendConfig,
    SpectralConfig,
)
from .pipeline import ALL, STAGES, Pipeline, run_stage
from .synthetic import SyntheticDataset, SyntheticSpec, generate_synthetic, sample_synthetic, write_synthetic
from .types import OnStageCompleteCallable, OnStageErrorCallable


__all__ = [
    "ALL",
    "STAGES",
    "ClusterConfig",
    "EvaluateConfig",
    "GraphConfig",
    "HopeConfig",
    "HybridConfig",
    "IngestConfig",
    "Node2VecConfig",
    "OnStageCompleteCallable",
    "OnStageErrorCallable",
    "Pipeline",
    "PipelineConfig",
    "RecommendConfig",
    "SpectralConfig",
    "SyntheticDataset",
    "SyntheticSpec",
    "generate_synthetic",
    "run_stage",
    "sample_synthetic",
    "write_synthetic",
]
