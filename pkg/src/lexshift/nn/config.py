"""Training hyperparameters shared by both classifiers."""

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    learning_rate: float = 0.001
    dropout_rate: float = 0.5
    recurrent_dropout_rate: float = 0.2
    max_pool_size: int = 2
    hidden_units: int = 256
    embedding_dim: int = 100
    conv_filters: int = 32
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if not 0.0 <= self.recurrent_dropout_rate < 1.0:
            raise ValueError(
                f"recurrent_dropout_rate must be in [0, 1), got {self.recurrent_dropout_rate}"
            )
        if self.max_pool_size < 1:
            raise ValueError(f"max_pool_size must be >= 1, got {self.max_pool_size}")
        if self.hidden_units < 1 or self.embedding_dim < 1 or self.conv_filters < 1:
            raise ValueError("layer sizes must be positive")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        return cls(**data)
