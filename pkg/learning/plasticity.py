"""Combined weight change, mini-batch accumulation and RMSProp."""

import logging
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from network.topology import NetworkParams, SpikeTrain
from .gradients import SampleGradientContext, weight_gradients

logger = logging.getLogger(__name__)

Counts = Union[int, float, np.ndarray, SpikeTrain]


@dataclass(frozen=True)
class OptimizerHyper:
    eta0: float
    lambda0: float = 0.0
    gamma0: float = 0.1
    beta: float = 0.9
    epsilon: float = 1e-8
    w_min: float = -np.inf
    w_max: float = np.inf

    def __post_init__(self):
        if self.eta0 <= 0:
            raise ValueError(f"eta0 must be positive (got {self.eta0})")
        if not 0 <= self.beta < 1:
            raise ValueError(f"beta must lie in [0, 1) (got {self.beta})")
        if self.w_min > self.w_max:
            raise ValueError(f"Weight limits are inverted: [{self.w_min}, {self.w_max}]")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _spike_counts(train: Counts, w: np.ndarray) -> np.ndarray:
    if isinstance(train, (list, tuple)):
        n = np.asarray(float(len(train)))
    else:
        n = np.asarray(train, dtype=float)
    # one count per postsynaptic neuron, i.e. per row
    if w.ndim == 2 and n.ndim == 1:
        n = n[:, None]
    return n


def regularization_term(w: Union[float, np.ndarray], train: Counts, lambda0: float) -> Union[float, np.ndarray]:
    """lambda0 * w * n^2 with n the postsynaptic spike count."""
    w_arr = np.asarray(w, dtype=float)
    value = lambda0 * w_arr * _spike_counts(train, w_arr) ** 2
    return float(value) if np.ndim(value) == 0 else value


def synaptic_scaling_term(w: Union[float, np.ndarray], train: Counts, gamma0: float) -> Union[float, np.ndarray]:
    """gamma0 * |w| onto neurons that stayed silent, else 0."""
    w_arr = np.asarray(w, dtype=float)
    value = gamma0 * np.abs(w_arr) * (_spike_counts(train, w_arr) == 0)
    return float(value) if np.ndim(value) == 0 else value


@dataclass
class GradientState:
    """Mini-batch accumulator of descent directions plus RMSProp averages."""

    grad: List[np.ndarray]
    m: List[np.ndarray]
    hyper: OptimizerHyper
    samples: int = 0
    updates: int = field(default=0)

    @classmethod
    def for_network(cls, params: NetworkParams, hyper: OptimizerHyper) -> "GradientState":
        return cls(grad=[np.zeros_like(w) for w in params.weights],
                   m=[np.zeros_like(w) for w in params.weights],
                   hyper=hyper)

    def zero_grad(self) -> None:
        for g in self.grad:
            g.fill(0.0)
        self.samples = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hyper": self.hyper.to_dict(),
            "m": [m.tolist() for m in self.m],
            "updates": self.updates,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], params: NetworkParams) -> "GradientState":
        hyper = OptimizerHyper(**{k: float(v) for k, v in data["hyper"].items()})
        state = cls.for_network(params, hyper)
        state.m = [np.array(m, dtype=float).reshape(w.shape) for m, w in zip(data["m"], params.weights)]
        state.updates = int(data.get("updates", 0))
        return state


def sample_weight_change(ctx: SampleGradientContext, hyper: OptimizerHyper) -> List[np.ndarray]:
    """Per-layer descent direction -(dC/dw + lambda(S) - gamma(S)) for one sample."""
    grads = weight_gradients(ctx)
    changes = []
    for l, (g, w) in enumerate(zip(grads, ctx.params.weights)):
        counts = ctx.record.spike_counts(l + 1)
        reg = regularization_term(w, counts, hyper.lambda0) if hyper.lambda0 else 0.0
        scale = synaptic_scaling_term(w, counts, hyper.gamma0) if hyper.gamma0 else 0.0
        changes.append(-(g + reg - scale))
    return changes


def add_changes(state: GradientState, changes: Sequence[np.ndarray]) -> None:
    for acc, dw in zip(state.grad, changes):
        acc += dw
    state.samples += 1


def accumulate_sample(state: GradientState, ctx: SampleGradientContext) -> None:
    add_changes(state, sample_weight_change(ctx, state.hyper))


def rmsprop_apply(state: GradientState, params: NetworkParams) -> None:
    """Apply the accumulated change with per-synapse step sizes, clip and reset the accumulator."""
    h = state.hyper
    for l, dw in enumerate(state.grad):
        # step with the previous average, then fold this change into it
        params.weights[l] += h.eta0 / np.sqrt(state.m[l] + h.epsilon) * dw
        state.m[l] = h.beta * state.m[l] + (1.0 - h.beta) * dw ** 2
        np.clip(params.weights[l], h.w_min, h.w_max, out=params.weights[l])
    state.updates += 1
    logger.debug("RMSProp update %d over %d samples", state.updates, state.samples)
    state.zero_grad()
