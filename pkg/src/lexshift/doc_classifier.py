"""Document-level gender classifier: three conv+LSTM channels over token
embeddings, merged into one sigmoid head.

Each channel runs its own trainable embedding table and a different kernel
size so the convolutions see the document at different n-gram resolutions;
channel outputs (final LSTM states) are concatenated for the head. The
female-class probability is the head output; label is FEMALE iff p >= 0.5.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .corpus import Document, GenderLabel, Split, validate_corpus
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
    embedding_backward,
    embedding_forward,
    init_uniform,
    lstm_backward,
    lstm_forward,
    maxpool1d_backward,
    maxpool1d_forward,
    relu_backward,
    relu_forward,
)
from .nn.serialize import load_model, save_model

PAD_ID = 0
UNK_ID = 1

DEFAULT_KERNEL_SIZES = (4, 6, 8)

MODEL_KIND = "doc-gender-classifier"


def default_config(seed: int = 0) -> TrainConfig:
    return TrainConfig(seed=seed)


def desk_config(seed: int = 0) -> TrainConfig:
    """Small dimensions for fast, deterministic CI-scale training."""
    return TrainConfig(
        embedding_dim=16,
        hidden_units=32,
        conv_filters=8,
        batch_size=16,
        seed=seed,
    )


@dataclass
class DocClassifierModel:
    token_vocab: dict
    kernel_sizes: tuple
    config: TrainConfig
    params: dict
    training_losses: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.kernel_sizes) != 3:
            raise ValidationError("the document classifier uses exactly three channels")
        if len(set(self.kernel_sizes)) != 3:
            raise ValidationError("channel kernel sizes must be pairwise distinct")

    @property
    def min_length(self):
        return max(self.kernel_sizes) + self.config.max_pool_size - 1

    @classmethod
    def initialize(cls, token_vocab, config, kernel_sizes=DEFAULT_KERNEL_SIZES, rng=None):
        if rng is None:
            rng = np.random.default_rng(config.seed)
        vocab_rows = len(token_vocab) + 2  # PAD and UNK rows
        params = {}
        for ch, kernel in enumerate(kernel_sizes):
            prefix = f"ch{ch}."
            params[prefix + "embed"] = init_uniform(
                rng, (vocab_rows, config.embedding_dim), vocab_rows, config.embedding_dim
            )
            conv = ConvLayerParams.init(rng, config.conv_filters, kernel, config.embedding_dim)
            params.update(conv.as_dict(prefix + "conv."))
            lstm = LstmCellParams.init(rng, config.conv_filters, config.hidden_units)
            params.update(lstm.as_dict(prefix + "lstm."))
        merged = 3 * config.hidden_units
        params["head.W"] = init_uniform(rng, (1, merged), merged, 1)
        params["head.b"] = np.zeros(1)
        return cls(
            token_vocab=dict(token_vocab),
            kernel_sizes=tuple(kernel_sizes),
            config=config,
            params=params,
        )

    def token_ids(self, tokens):
        ids = [self.token_vocab.get(tok, UNK_ID) for tok in tokens]
        while len(ids) < self.min_length:
            ids.append(PAD_ID)
        return np.asarray(ids, dtype=np.intp)

    def forward(self, tokens, train=False, rng=None):
        """Female-class probability plus the caches needed for backward."""
        ids = self.token_ids(tokens)
        pool = self.config.max_pool_size
        finals = []
        caches = []
        for ch in range(3):
            prefix = f"ch{ch}."
            emb, emb_cache = embedding_forward(self.params[prefix + "embed"], ids)
            conv = ConvLayerParams.from_dict(self.params, prefix + "conv.")
            conv_out, conv_cache = conv1d_forward(conv, emb)
            act, relu_cache = relu_forward(conv_out)
            if train:
                act, drop_mask = dropout_forward(act, self.config.dropout_rate, rng)
            else:
                drop_mask = None
            pooled, pool_cache = maxpool1d_forward(act, pool)
            if train:
                pooled, rec_mask = dropout_forward(
                    pooled, self.config.recurrent_dropout_rate, rng
                )
            else:
                rec_mask = None
            lstm = LstmCellParams.from_dict(self.params, prefix + "lstm.")
            hs, lstm_cache = lstm_forward(lstm, pooled)
            finals.append(hs[-1])
            caches.append((emb_cache, conv_cache, relu_cache, drop_mask, pool_cache, rec_mask, lstm_cache, hs.shape))
        merged = np.concatenate(finals)
        z, head_cache = dense_forward(self.params["head.W"], self.params["head.b"], merged)
        prob = float(1.0 / (1.0 + np.exp(-z[0])))
        return prob, (caches, head_cache, prob)

    def backward(self, cache, dloss_dp):
        caches, head_cache, prob = cache
        hidden = self.config.hidden_units
        dz = np.array([dloss_dp * prob * (1.0 - prob)])
        head_grads, dmerged = dense_backward(head_cache, dz)
        grads = {"head.W": head_grads["W"], "head.b": head_grads["b"]}
        for ch in range(3):
            prefix = f"ch{ch}."
            emb_cache, conv_cache, relu_cache, drop_mask, pool_cache, rec_mask, lstm_cache, hs_shape = caches[ch]
            dhs = np.zeros(hs_shape)
            dhs[-1] = dmerged[ch * hidden : (ch + 1) * hidden]
            lstm_grads, dpooled = lstm_backward(lstm_cache, dhs)
            for name, g in lstm_grads.items():
                grads[prefix + "lstm." + name] = g
            dpooled = dropout_backward(rec_mask, dpooled)
            dact = maxpool1d_backward(pool_cache, dpooled)
            dact = dropout_backward(drop_mask, dact)
            dconv = relu_backward(relu_cache, dact)
            conv_grads, demb = conv1d_backward(conv_cache, dconv)
            grads[prefix + "conv.W"] = conv_grads["W"]
            grads[prefix + "conv.b"] = conv_grads["b"]
            grads[prefix + "embed"] = embedding_backward(emb_cache, demb)
        return grads

    def predict_proba(self, tokens) -> float:
        prob, _ = self.forward(tokens, train=False)
        return prob


def _build_vocab(docs):
    seen = sorted({tok for doc in docs for tok in doc.tokens})
    return {tok: i + 2 for i, tok in enumerate(seen)}


def train(docs, config: TrainConfig, kernel_sizes=DEFAULT_KERNEL_SIZES) -> DocClassifierModel:
    """Train on the labeled train split; deterministic under config.seed."""
    docs = list(docs)
    validate_corpus(docs, expect_split=Split.TRAIN)
    rng = np.random.default_rng(config.seed)
    model = DocClassifierModel.initialize(_build_vocab(docs), config, kernel_sizes, rng)
    targets = [1 if d.label is GenderLabel.FEMALE else 0 for d in docs]
    adam = AdamState.for_params(model.params, config.learning_rate)
    for _ in range(config.epochs):
        order = rng.permutation(len(docs))
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            grad_sum = None
            for idx in batch:
                prob, cache = model.forward(docs[idx].tokens, train=True, rng=rng)
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
        mean_loss = epoch_loss / len(docs)
        if not np.isfinite(mean_loss):
            raise TrainingError(f"training loss became non-finite ({mean_loss})")
        model.training_losses.append(mean_loss)
    return model


def predict(model: DocClassifierModel, doc: Document):
    """(label, female-class probability); label is FEMALE iff p >= 0.5."""
    prob = model.predict_proba(doc.tokens)
    label = GenderLabel.FEMALE if prob >= 0.5 else GenderLabel.MALE
    return label, prob


@dataclass
class EvalReport:
    accuracy: float
    confusion: dict

    @property
    def total(self):
        return sum(self.confusion.values())


def evaluate(model: DocClassifierModel, docs) -> EvalReport:
    docs = list(docs)
    if not docs:
        raise ValidationError("cannot evaluate an empty document list")
    confusion = Counter()
    correct = 0
    for doc in docs:
        predicted, _ = predict(model, doc)
        confusion[(doc.label, predicted)] += 1
        if predicted is doc.label:
            correct += 1
    return EvalReport(accuracy=correct / len(docs), confusion=dict(confusion))


def save_doc_model(model: DocClassifierModel, path):
    meta = {
        "token_vocab": model.token_vocab,
        "kernel_sizes": list(model.kernel_sizes),
        "training_losses": model.training_losses,
    }
    save_model(path, MODEL_KIND, model.config.to_dict(), meta, model.params)


def load_doc_model(path) -> DocClassifierModel:
    kind, config, meta, arrays = load_model(path)
    if kind != MODEL_KIND:
        raise ValidationError(f"expected a {MODEL_KIND} container, got {kind!r}")
    model = DocClassifierModel(
        token_vocab=meta["token_vocab"],
        kernel_sizes=tuple(meta["kernel_sizes"]),
        config=TrainConfig.from_dict(config),
        params=arrays,
        training_losses=list(meta.get("training_losses", [])),
    )
    return model
