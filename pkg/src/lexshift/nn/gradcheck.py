"""Central finite-difference gradient checking for every layer and model."""

import numpy as np


def numerical_gradient(loss_fn, params: dict, h: float = 1e-5) -> dict:
    """Central differences of loss_fn(params) w.r.t. every array component.

    loss_fn must be pure; parameters are perturbed in place and restored.
    """
    grads = {}
    for name, array in params.items():
        grad = np.zeros_like(array)
        flat = array.ravel()
        grad_flat = grad.ravel()
        for idx in range(flat.size):
            original = flat[idx]
            flat[idx] = original + h
            plus = loss_fn(params)
            flat[idx] = original - h
            minus = loss_fn(params)
            flat[idx] = original
            grad_flat[idx] = (plus - minus) / (2.0 * h)
        grads[name] = grad
    return grads


def max_relative_error(analytic: dict, numeric: dict) -> float:
    """Worst |a - n| / max(|a|, |n|, 1e-4) over every component.

    Components smaller than 1e-4 in both gradients are compared on an
    absolute scale, which keeps finite-difference noise out of the verdict.
    """
    worst = 0.0
    for name in analytic:
        a = analytic[name]
        n = numeric[name]
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), 1e-4)
        err = np.abs(a - n) / denom
        if err.size:
            worst = max(worst, float(err.max()))
    return worst
