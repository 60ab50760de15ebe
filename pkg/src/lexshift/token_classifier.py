"""Character-level token gender classifier.

Tokens are sequences of one-hot character rows (unknown characters share a
dedicated UNK column, padding rows are all-zero), fed through a single
conv -> max-pool -> LSTM -> sigmoid stack. Total over any non-empty Unicode
string, which is what lets it judge embedding suggestions that are rare,
misspelled, or absent from the word-vector vocabulary.
"""

from dataclasses import dataclass, field

import numpy as np

from .corpus import GenderLabel, Split
from .errors import TrainingError, ValidationError
from .nn import (
    AdamState,
    ConvLayerParams,
    LstmCellParams,
    TrainConfig,
    adam_update,
    bce_loss,
    conv1d_backward,
    conv1d_forward,
    dense_backward,
    dense_forward,
    dropout_backward,
    dropout_forward,
    init_uniform,
    lstm_backward,
    lstm_forward,
    maxpool1d_backward,
    maxpool1d_forward,
    one_hot,
    relu_backward,
    relu_forward,
)
from .nn.serialize import load_model, save_model
from .tagging import TagScope, Tagger, detect_representatives, tag

MODEL_KIND = "char-token-classifier"

MAX_TOKEN_CHARS = 30

DEFAULT_KERNEL_SIZE = 8


def default_config(seed: int = 0) -> TrainConfig:
    # No dropout for the token model; conv 32 filters, LSTM 125 hidden.
    return TrainConfig(
        dropout_rate=0.0,
        recurrent_dropout_rate=0.0,
        hidden_units=125,
        conv_filters=32,
        seed=seed,
    )


def desk_config(seed: int = 0) -> TrainConfig:
    return TrainConfig(
        dropout_rate=0.0,
        recurrent_dropout_rate=0.0,
        hidden_units=16,
        conv_filters=8,
        batch_size=16,
        seed=seed,
    )


@dataclass
class TokenTrainingSet:
    """(token, label) pairs; duplicates are kept, frequency is signal."""

    pairs: list

    def __post_init__(self):
        for token, _ in self.pairs:
            if not token:
                raise ValidationError("training tokens must be non-empty")

    def __len__(self):
        return len(self.pairs)


def build_training_set(docs, tagger: Tagger, scope: TagScope) -> TokenTrainingSet:
    """Every in-scope token from the train split, paired with its doc label."""
    pairs = []
    for doc in docs:
        if doc.split is not Split.TRAIN:
            raise ValidationError(f"document {doc.id!r} is not from the train split")
        tags = tag(tagger, doc.tokens)
        for pos in detect_representatives(tags, scope):
            pairs.append((doc.tokens[pos], doc.label))
    if not pairs:
        raise ValidationError("no tokens matched the tag scope; scope too narrow for corpus")
    return TokenTrainingSet(pairs=pairs)


@dataclass
class CharTokenModel:
    char_vocab: dict
    kernel_size: int
    config: TrainConfig
    params: dict
    training_losses: list = field(default_factory=list)

    @property
    def onehot_dim(self):
        # one column per known character plus a shared UNK column
        return len(self.char_vocab) + 1

    @property
    def min_length(self):
        return self.kernel_size + self.config.max_pool_size - 1

    @classmethod
    def initialize(cls, char_vocab, config, kernel_size=DEFAULT_KERNEL_SIZE, rng=None):
        if rng is None:
            rng = np.random.default_rng(config.seed)
        dim = len(char_vocab) + 1
        params = {}
        conv = ConvLayerParams.init(rng, config.conv_filters, kernel_size, dim)
        params.update(conv.as_dict("conv."))
        lstm = LstmCellParams.init(rng, config.conv_filters, config.hidden_units)
        params.update(lstm.as_dict("lstm."))
        params["head.W"] = init_uniform(rng, (1, config.hidden_units), config.hidden_units, 1)
        params["head.b"] = np.zeros(1)
        return cls(
            char_vocab=dict(char_vocab),
            kernel_size=kernel_size,
            config=config,
            params=params,
        )

    def encode(self, token):
        """One-hot rows, truncated to 30 chars, zero-padded to the conv minimum."""
        unk = len(self.char_vocab)
        ids = [self.char_vocab.get(ch, unk) for ch in token[:MAX_TOKEN_CHARS]]
        while len(ids) < self.min_length:
            ids.append(-1)
        return one_hot(ids, self.onehot_dim)

    def forward(self, token, train=False, rng=None):
        rows = self.encode(token)
        conv = ConvLayerParams.from_dict(self.params, "conv.")
        conv_out, conv_cache = conv1d_forward(conv, rows)
        act, relu_cache = relu_forward(conv_out)
        if train:
            act, drop_mask = dropout_forward(act, self.config.dropout_rate, rng)
        else:
            drop_mask = None
        pooled, pool_cache = maxpool1d_forward(act, self.config.max_pool_size)
        lstm = LstmCellParams.from_dict(self.params, "lstm.")
        hs, lstm_cache = lstm_forward(lstm, pooled)
        z, head_cache = dense_forward(self.params["head.W"], self.params["head.b"], hs[-1])
        prob = float(1.0 / (1.0 + np.exp(-z[0])))
        return prob, (conv_cache, relu_cache, drop_mask, pool_cache, lstm_cache, hs.shape, head_cache, prob)

    def backward(self, cache, dloss_dp):
        conv_cache, relu_cache, drop_mask, pool_cache, lstm_cache, hs_shape, head_cache, prob = cache
        dz = np.array([dloss_dp * prob * (1.0 - prob)])
        head_grads, dh_last = dense_backward(head_cache, dz)
        grads = {"head.W": head_grads["W"], "head.b": head_grads["b"]}
        dhs = np.zeros(hs_shape)
        dhs[-1] = dh_last
        lstm_grads, dpooled = lstm_backward(lstm_cache, dhs)
        for name, g in lstm_grads.items():
            grads["lstm." + name] = g
        dact = maxpool1d_backward(pool_cache, dpooled)
        dact = dropout_backward(drop_mask, dact)
        dconv = relu_backward(relu_cache, dact)
        conv_grads, _ = conv1d_backward(conv_cache, dconv)
        grads["conv.W"] = conv_grads["W"]
        grads["conv.b"] = conv_grads["b"]
        return grads

    def predict_proba(self, token) -> float:
        prob, _ = self.forward(token, train=False)
        return prob


def train_token_model(
    training_set: TokenTrainingSet,
    config: TrainConfig,
    kernel_size: int = DEFAULT_KERNEL_SIZE,
) -> CharTokenModel:
    pairs = list(training_set.pairs)
    if not pairs:
        raise ValidationError("token training set is empty")
    labels = {label for _, label in pairs}
    if len(labels) < 2:
        only = next(iter(labels)).value
        raise ValidationError(f"token training set has a single label ({only})")
    rng = np.random.default_rng(config.seed)
    chars = sorted({ch for token, _ in pairs for ch in token[:MAX_TOKEN_CHARS]})
    char_vocab = {ch: i for i, ch in enumerate(chars)}
    model = CharTokenModel.initialize(char_vocab, config, kernel_size, rng)
    targets = [1 if label is GenderLabel.FEMALE else 0 for _, label in pairs]
    adam = AdamState.for_params(model.params, config.learning_rate)
    for _ in range(config.epochs):
        order = rng.permutation(len(pairs))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            grad_sum = None
            for idx in batch:
                prob, cache = model.forward(pairs[idx][0], train=True, rng=rng)
                loss, dloss = bce_loss(prob, targets[idx])
                epoch_loss += loss
                grads = model.backward(cache, dloss)
                if grad_sum is None:
                    grad_sum = grads
                else:
                    for name in grad_sum:
                        grad_sum[name] += grads[name]
            for name in grad_sum:
                grad_sum[name] /= len(batch)
            model.params = adam_update(adam, model.params, grad_sum)
        mean_loss = epoch_loss / len(pairs)
        if not np.isfinite(mean_loss):
            raise TrainingError(f"training loss became non-finite ({mean_loss})")
        model.training_losses.append(mean_loss)
    return model


def classify_token(model: CharTokenModel, token: str):
    """(label, female-class probability) for any non-empty string."""
    if not token:
        raise ValueError("cannot classify an empty token")
    prob = model.predict_proba(token)
    label = GenderLabel.FEMALE if prob >= 0.5 else GenderLabel.MALE
    return label, prob


def save_token_model(model: CharTokenModel, path):
    meta = {
        "char_vocab": model.char_vocab,
        "kernel_size": model.kernel_size,
        "training_losses": model.training_losses,
    }
    save_model(path, MODEL_KIND, model.config.to_dict(), meta, model.params)


def load_token_model(path) -> CharTokenModel:
    kind, config, meta, arrays = load_model(path)
    if kind != MODEL_KIND:
        raise ValidationError(f"expected a {MODEL_KIND} container, got {kind!r}")
    return CharTokenModel(
        char_vocab=meta["char_vocab"],
        kernel_size=int(meta["kernel_size"]),
        config=TrainConfig.from_dict(config),
        params=arrays,
        training_losses=list(meta.get("training_losses", [])),
    )
