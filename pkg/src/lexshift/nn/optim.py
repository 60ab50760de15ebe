"""Adam with bias correction over flat name->array parameter bundles."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError


@dataclass
class AdamState:
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    step: int = 0

    @classmethod
    def for_params(cls, params: dict, learning_rate: float = 0.001) -> "AdamState":
        return cls(
            learning_rate=learning_rate,
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
        )


def adam_update(state: AdamState, params: dict, grads: dict) -> dict:
    """One optimizer step; mutates the moment accumulators, returns new params."""
    if set(params) != set(grads):
        missing = set(params) ^ set(grads)
        raise ValueError(f"parameter/gradient name mismatch: {sorted(missing)[:5]!r}")
    for name, g in grads.items():
        if g.shape != params[name].shape:
            raise ValueError(f"gradient shape mismatch for {name!r}")
        if not np.all(np.isfinite(g)):
            raise TrainingError(f"non-finite gradient for parameter {name!r}")
    state.step += 1
    t = state.step
    scale_m = 1.0 / (1.0 - state.beta1**t)
    scale_v = 1.0 / (1.0 - state.beta2**t)
    updated = {}
    for name, p in params.items():
        g = grads[name]
        state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * g
        state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * g**2
        m_hat = state.m[name] * scale_m
        v_hat = state.v[name] * scale_v
        updated[name] = p - state.learning_rate * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return updated
