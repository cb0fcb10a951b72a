from .blend import (
    DEFAULT_BLEND_EPOCHS,
    DEFAULT_BLEND_LR,
    blend_loss_and_grad,
    blend_scores,
    fit_linear_blend,
    predict_blend,
)
from .dataset import build_hybrid_dataset
from .mlp import (
    DEFAULT_EPOCHS,
    DEFAULT_LR,
    DEFAULT_SPLIT_RATIO,
    FUSION_NETWORK,
    FUSION_SUPPORT,
    FUSIONS,
    init_mlp,
    loss_and_grads,
    mlp_forward,
    mse,
    predict_fused,
    predict_hybrid,
    rank_scores,
    split_users,
    train_mlp,
)
from .storage import load_mlp, save_blend, save_mlp
from .types import DEFAULT_HIDDEN, HybridDataset, MLPModel, TrainingResult


__all__ = [
    "DEFAULT_BLEND_EPOCHS",
    "DEFAULT_BLEND_LR",
    "DEFAULT_EPOCHS",
    "DEFAULT_HIDDEN",
    "DEFAULT_LR",
    "DEFAULT_SPLIT_RATIO",
    "FUSION_NETWORK",
    "FUSION_SUPPORT",
    "FUSIONS",
    "HybridDataset",
    "MLPModel",
    "TrainingResult",
    "blend_loss_and_grad",
    "blend_scores",
    "build_hybrid_dataset",
    "fit_linear_blend",
    "init_mlp",
    "load_mlp",
    "loss_and_grads",
    "mlp_forward",
    "mse",
    "predict_blend",
    "predict_fused",
    "predict_hybrid",
    "rank_scores",
    "save_blend",
    "save_mlp",
    "split_users",
    "train_mlp",
]
