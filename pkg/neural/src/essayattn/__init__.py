"""Toy neural co-attention essay scorer with attention-dump export."""

from .config import NeuralConfig
from .model import CoAttentionScorer, Trace, build_vocabulary, encode_sentences
from .train import TrainResult, score_essays, train_and_export, write_dump

__all__ = [
    "CoAttentionScorer",
    "NeuralConfig",
    "Trace",
    "TrainResult",
    "build_vocabulary",
    "encode_sentences",
    "score_essays",
    "train_and_export",
    "write_dump",
]
