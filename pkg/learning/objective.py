"""First-to-spike softmax decoding, cross-entropy loss and class prediction."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

LOSS_FLOOR = 1e-10

# class index in [0, n_classes)
TargetLabel = int


@dataclass
class ActivationVector:
    a: np.ndarray
    nu: float
    null: bool = False


def softmax_activation(tau: np.ndarray, nu: float) -> ActivationVector:
    """
    a_i proportional to exp(-nu * tau_i). Silent outputs (tau = inf) get zero
    weight; when every output is silent the activation is uniform and flagged null.
    """
    if nu <= 0:
        raise ValueError(f"nu must be positive (got {nu})")
    tau = np.asarray(tau, dtype=float)
    finite = np.isfinite(tau)
    if not finite.any():
        return ActivationVector(a=np.full(tau.size, 1.0 / tau.size), nu=nu, null=True)

    shifted = np.where(finite, tau - tau[finite].min(), 0.0)
    weights = np.where(finite, np.exp(-nu * shifted), 0.0)
    return ActivationVector(a=weights / weights.sum(), nu=nu)


def one_hot(y: TargetLabel, n_classes: int) -> np.ndarray:
    if not 0 <= y < n_classes:
        raise ValueError(f"Label {y} outside [0, {n_classes})")
    target = np.zeros(n_classes)
    target[y] = 1.0
    return target


def cross_entropy(activation: ActivationVector, y: TargetLabel, floor: float = LOSS_FLOOR) -> float:
    return float(-np.log(max(activation.a[y], floor)))


def output_error_signals(activation: ActivationVector, y: TargetLabel) -> np.ndarray:
    return activation.a - one_hot(y, activation.a.size)


def predict(tau: np.ndarray, dt: float) -> Optional[TargetLabel]:
    """Index of the earliest output, or None when nothing fired or the earliest spikes tie within dt."""
    tau = np.asarray(tau, dtype=float)
    if not np.isfinite(tau).any():
        return None
    earliest = tau.min()
    # spikes sit on the dt grid, so half a step separates distinct times
    if np.count_nonzero(tau - earliest < 0.5 * dt) > 1:
        return None
    return int(np.argmin(tau))
