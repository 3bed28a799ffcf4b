"""
Learned trace embeddings: a small numpy network trained with cross-entropy
whose feature layer supplies the estimator inputs.
"""

from src.embedding.gradcheck import GradientCheckResult, gradient_check
from src.embedding.models import (
    ConvBlockConfig,
    EmbeddingConfig,
    EmbeddingModel,
    FeatureMatrix,
    FeatureProvenance,
)
from src.embedding.network import EmbeddingNetwork
from src.embedding.storage import load_model, save_model
from src.embedding.training import classification_error, embed, predict, train_embedding

__all__ = [
    "GradientCheckResult",
    "gradient_check",
    "ConvBlockConfig",
    "EmbeddingConfig",
    "EmbeddingModel",
    "FeatureMatrix",
    "FeatureProvenance",
    "EmbeddingNetwork",
    "load_model",
    "save_model",
    "classification_error",
    "embed",
    "predict",
    "train_embedding",
]
