from .config import TrainConfig
from .gradcheck import max_relative_error, numerical_gradient
from .layers import (
    ConvLayerParams,
    LstmCellParams,
    conv1d_backward,
    conv1d_forward,
    dense_backward,
    dense_forward,
    dropout_backward,
    dropout_forward,
    embedding_backward,
    embedding_forward,
    init_uniform,
    lstm_backward,
    lstm_forward,
    lstm_step,
    maxpool1d_backward,
    maxpool1d_forward,
    one_hot,
    relu_backward,
    relu_forward,
    sigmoid,
)
from .losses import bce_loss
from .optim import AdamState, adam_update
from .serialize import load_model, save_model

__all__ = [
    "AdamState",
    "ConvLayerParams",
    "LstmCellParams",
    "TrainConfig",
    "adam_update",
    "bce_loss",
    "conv1d_backward",
    "conv1d_forward",
    "dense_backward",
    "dense_forward",
    "dropout_backward",
    "dropout_forward",
    "embedding_backward",
    "embedding_forward",
    "init_uniform",
    "load_model",
    "lstm_backward",
    "lstm_forward",
    "lstm_step",
    "max_relative_error",
    "maxpool1d_backward",
    "maxpool1d_forward",
    "numerical_gradient",
    "one_hot",
    "relu_backward",
    "relu_forward",
    "save_model",
    "sigmoid",
]
