"""Neural primitives with hand-written forward and backward passes.

Everything is float64 and single-sequence: vectors are 1-D arrays, sequences
are (time, channels) matrices. Each forward returns a cache consumed by the
matching backward; backward passes return parameter gradients keyed exactly
like the parameter dictionaries, so the optimizer and the finite-difference
checker can treat models as flat name->array maps.
"""

from dataclasses import dataclass

import numpy as np


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def init_uniform(rng, shape, fan_in, fan_out):
    """Glorot-style uniform init in +-sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


# ---------------------------------------------------------------------------
# LSTM cell
# ---------------------------------------------------------------------------

_GATES = ("f", "i", "o", "c")


@dataclass
class LstmCellParams:
    """Gate weights: W_* (hidden x input), U_* (hidden x hidden), b_* (hidden)."""

    W_f: np.ndarray
    W_i: np.ndarray
    W_o: np.ndarray
    W_c: np.ndarray
    U_f: np.ndarray
    U_i: np.ndarray
    U_o: np.ndarray
    U_c: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_o: np.ndarray
    b_c: np.ndarray

    def __post_init__(self):
        hidden, inp = self.W_f.shape
        for g in _GATES:
            if getattr(self, f"W_{g}").shape != (hidden, inp):
                raise ValueError(f"W_{g} shape mismatch")
            if getattr(self, f"U_{g}").shape != (hidden, hidden):
                raise ValueError(f"U_{g} shape mismatch")
            if getattr(self, f"b_{g}").shape != (hidden,):
                raise ValueError(f"b_{g} shape mismatch")

    @property
    def input_size(self):
        return self.W_f.shape[1]

    @property
    def hidden_size(self):
        return self.W_f.shape[0]

    @classmethod
    def init(cls, rng, input_size, hidden_size):
        kw = {}
        for g in _GATES:
            kw[f"W_{g}"] = init_uniform(rng, (hidden_size, input_size), input_size, hidden_size)
            kw[f"U_{g}"] = init_uniform(rng, (hidden_size, hidden_size), hidden_size, hidden_size)
            kw[f"b_{g}"] = np.zeros(hidden_size)
        return cls(**kw)

    def as_dict(self, prefix=""):
        out = {}
        for g in _GATES:
            for kind in ("W", "U", "b"):
                out[f"{prefix}{kind}_{g}"] = getattr(self, f"{kind}_{g}")
        return out

    @classmethod
    def from_dict(cls, params, prefix=""):
        kw = {}
        for g in _GATES:
            for kind in ("W", "U", "b"):
                kw[f"{kind}_{g}"] = params[f"{prefix}{kind}_{g}"]
        return cls(**kw)


def lstm_step(params: LstmCellParams, x_t, h_prev, c_prev):
    """One LSTM step: gates f/i/o (logistic), candidate cell tanh.

    c_t = f*c_prev + i*c_tilde, h_t = o*tanh(c_t).
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    h_prev = np.asarray(h_prev, dtype=np.float64)
    c_prev = np.asarray(c_prev, dtype=np.float64)
    if x_t.shape != (params.input_size,):
        raise ValueError(f"x_t must have shape ({params.input_size},), got {x_t.shape}")
    if h_prev.shape != (params.hidden_size,) or c_prev.shape != (params.hidden_size,):
        raise ValueError(f"state must have shape ({params.hidden_size},)")
    f = sigmoid(params.W_f @ x_t + params.U_f @ h_prev + params.b_f)
    i = sigmoid(params.W_i @ x_t + params.U_i @ h_prev + params.b_i)
    o = sigmoid(params.W_o @ x_t + params.U_o @ h_prev + params.b_o)
    c_tilde = np.tanh(params.W_c @ x_t + params.U_c @ h_prev + params.b_c)
    c_t = f * c_prev + i * c_tilde
    h_t = o * np.tanh(c_t)
    return h_t, c_t


def lstm_forward(params: LstmCellParams, xs):
    """Run the cell over a (T, input) sequence from zero initial state."""
    xs = np.asarray(xs, dtype=np.float64)
    hidden = params.hidden_size
    h = np.zeros(hidden)
    c = np.zeros(hidden)
    hs = np.zeros((len(xs), hidden))
    steps = []
    for t, x_t in enumerate(xs):
        f = sigmoid(params.W_f @ x_t + params.U_f @ h + params.b_f)
        i = sigmoid(params.W_i @ x_t + params.U_i @ h + params.b_i)
        o = sigmoid(params.W_o @ x_t + params.U_o @ h + params.b_o)
        c_tilde = np.tanh(params.W_c @ x_t + params.U_c @ h + params.b_c)
        c_new = f * c + i * c_tilde
        tanh_c = np.tanh(c_new)
        h_new = o * tanh_c
        steps.append((x_t, h, c, f, i, o, c_tilde, tanh_c))
        h, c = h_new, c_new
        hs[t] = h
    cache = (params, steps)
    return hs, cache


def lstm_backward(cache, dhs):
    """Backpropagate through time.

    dhs is (T, hidden): the loss gradient arriving at each step's output.
    Returns (param grads keyed like as_dict(), dxs of shape (T, input)).
    """
    params, steps = cache
    dhs = np.asarray(dhs, dtype=np.float64)
    grads = {k: np.zeros_like(v) for k, v in params.as_dict().items()}
    dxs = np.zeros((len(steps), params.input_size))
    dh_next = np.zeros(params.hidden_size)
    dc_next = np.zeros(params.hidden_size)
    for t in range(len(steps) - 1, -1, -1):
        x_t, h_prev, c_prev, f, i, o, c_tilde, tanh_c = steps[t]
        dh = dhs[t] + dh_next
        dc = dh * o * (1.0 - tanh_c**2) + dc_next
        dz = {
            "o": dh * tanh_c * o * (1.0 - o),
            "f": dc * c_prev * f * (1.0 - f),
            "i": dc * c_tilde * i * (1.0 - i),
            "c": dc * i * (1.0 - c_tilde**2),
        }
        dx = np.zeros(params.input_size)
        dh_prev = np.zeros(params.hidden_size)
        for g, d in dz.items():
            grads[f"W_{g}"] += np.outer(d, x_t)
            grads[f"U_{g}"] += np.outer(d, h_prev)
            grads[f"b_{g}"] += d
            dx += getattr(params, f"W_{g}").T @ d
            dh_prev += getattr(params, f"U_{g}").T @ d
        dxs[t] = dx
        dh_next = dh_prev
        dc_next = dc * f
    return grads, dxs


# ---------------------------------------------------------------------------
# 1-D convolution (valid cross-correlation), pooling, activations
# ---------------------------------------------------------------------------


@dataclass
class ConvLayerParams:
    """weights: (filters, kernel_size, in_channels); bias: (filters,)."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        if self.weights.ndim != 3:
            raise ValueError("conv weights must be (filters, kernel, channels)")
        if self.bias.shape != (self.weights.shape[0],):
            raise ValueError("conv bias must have one entry per filter")

    @property
    def filters(self):
        return self.weights.shape[0]

    @property
    def kernel_size(self):
        return self.weights.shape[1]

    @property
    def in_channels(self):
        return self.weights.shape[2]

    @classmethod
    def init(cls, rng, filters, kernel_size, in_channels):
        fan_in = kernel_size * in_channels
        weights = init_uniform(rng, (filters, kernel_size, in_channels), fan_in, filters)
        return cls(weights=weights, bias=np.zeros(filters))

    def as_dict(self, prefix=""):
        return {f"{prefix}W": self.weights, f"{prefix}b": self.bias}

    @classmethod
    def from_dict(cls, params, prefix=""):
        return cls(weights=params[f"{prefix}W"], bias=params[f"{prefix}b"])


def conv1d_forward(params: ConvLayerParams, seq):
    """Valid cross-correlation over a (T, channels) sequence -> (T-K+1, filters)."""
    seq = np.asarray(seq, dtype=np.float64)
    if seq.ndim != 2 or seq.shape[1] != params.in_channels:
        raise ValueError(f"sequence must be (T, {params.in_channels}), got {seq.shape}")
    kernel = params.kernel_size
    if seq.shape[0] < kernel:
        raise ValueError(
            f"sequence length {seq.shape[0]} is shorter than the kernel ({kernel}); "
            "pad the input to at least the kernel size"
        )
    windows = np.lib.stride_tricks.sliding_window_view(seq, kernel, axis=0)
    # windows: (L, channels, kernel) -> score each filter
    out = np.einsum("lck,fkc->lf", windows, params.weights) + params.bias
    return out, (params, seq)


def conv1d_backward(cache, dout):
    params, seq = cache
    kernel = params.kernel_size
    length = dout.shape[0]
    windows = np.lib.stride_tricks.sliding_window_view(seq, kernel, axis=0)
    dweights = np.einsum("lf,lck->fkc", dout, windows)
    dbias = dout.sum(axis=0)
    dseq = np.zeros_like(seq)
    for k in range(kernel):
        dseq[k : k + length] += dout @ params.weights[:, k, :]
    return {"W": dweights, "b": dbias}, dseq


def relu_forward(x):
    mask = x > 0
    return x * mask, mask


def relu_backward(mask, dout):
    return dout * mask


def maxpool1d_forward(x, size):
    """Non-overlapping max over windows of `size`; the remainder is dropped.

    Callers pad sequences so at least one full window exists.
    """
    if size < 1:
        raise ValueError(f"pool size must be >= 1, got {size}")
    length = x.shape[0]
    if length < size:
        raise ValueError(f"cannot pool length {length} with window {size}")
    windows = length // size
    trimmed = x[: windows * size].reshape(windows, size, x.shape[1])
    argmax = trimmed.argmax(axis=1)
    out = np.take_along_axis(trimmed, argmax[:, None, :], axis=1)[:, 0, :]
    return out, (x.shape, size, argmax)


def maxpool1d_backward(cache, dout):
    shape, size, argmax = cache
    dx = np.zeros(shape)
    windows = argmax.shape[0]
    view = dx[: windows * size].reshape(windows, size, shape[1])
    np.put_along_axis(view, argmax[:, None, :], dout[:, None, :], axis=1)
    return dx


def dropout_forward(x, rate, rng):
    """Inverted dropout; identity when rate == 0."""
    if rate == 0.0:
        return x, None
    mask = (rng.random(x.shape) >= rate) / (1.0 - rate)
    return x * mask, mask


def dropout_backward(mask, dout):
    if mask is None:
        return dout
    return dout * mask


# ---------------------------------------------------------------------------
# Dense head and embedding lookup
# ---------------------------------------------------------------------------


def dense_forward(weights, bias, x):
    """y = W x + b with W of shape (out, in)."""
    return weights @ x + bias, (weights, x)


def dense_backward(cache, dy):
    weights, x = cache
    return {"W": np.outer(dy, x), "b": dy.copy()}, weights.T @ dy


def embedding_forward(table, ids):
    """Row lookup; ids is a 1-D int array, output is (T, dim)."""
    ids = np.asarray(ids, dtype=np.intp)
    return table[ids], (table.shape, ids)


def embedding_backward(cache, dout):
    shape, ids = cache
    dtable = np.zeros(shape)
    np.add.at(dtable, ids, dout)
    return dtable


def one_hot(indices, dim):
    """(T, dim) one-hot rows; index -1 yields an all-zero (padding) row."""
    indices = np.asarray(indices, dtype=np.intp)
    out = np.zeros((len(indices), dim))
    valid = indices >= 0
    out[np.flatnonzero(valid), indices[valid]] = 1.0
    return out
