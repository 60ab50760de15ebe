"""Binary cross-entropy, the objective of both two-label classifiers."""

import math

CLAMP_EPS = 1e-12


def bce_loss(p: float, y: int) -> tuple[float, float]:
    """-(y ln p + (1-y) ln(1-p)) with p clamped into (eps, 1-eps).

    Returns (loss, dloss/dp) evaluated at the clamped probability:
    the gradient is (p - y) / (p (1 - p)).
    """
    if y not in (0, 1):
        raise ValueError(f"target must be 0 or 1, got {y!r}")
    p = min(max(float(p), CLAMP_EPS), 1.0 - CLAMP_EPS)
    loss = -(y * math.log(p) + (1 - y) * math.log(1.0 - p))
    grad = (p - y) / (p * (1.0 - p))
    return loss, grad
