"""Hyperparameters for the co-attention scorer."""

from dataclasses import dataclass


@dataclass(frozen=True)
class NeuralConfig:
    """Training and architecture settings.

    The defaults are the published configuration; tests and demos override
    only what a smaller corpus forces (batch size, epoch count).
    """

    embedding_dim: int = 50
    cnn_kernel: int = 5
    cnn_filters: int = 100
    lstm_hidden: int = 100
    modeling_hidden: int = 100
    dropout: float = 0.5
    epochs: int = 100
    batch: int = 100
    lr: float = 0.001
    momentum: float = 0.9

    def __post_init__(self):
        for name in ("embedding_dim", "cnn_kernel", "cnn_filters",
                     "lstm_hidden", "modeling_hidden", "epochs", "batch"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.lr <= 0 or self.momentum <= 0:
            raise ValueError("lr and momentum must be positive")
        # dropout is a drop probability, not a rate knob
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
