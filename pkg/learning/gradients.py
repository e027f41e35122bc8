"""
Loss gradients with respect to every weight matrix of a recorded presentation.

Credit is attached to individual spikes and pushed down the network: each
output neuron's first spike carries its error signal, and a spike of a hidden
neuron carries (1/delta_u) times the credit of every later spike it feeds,
weighted by the connecting weight and the PSP it produced there. The gradient
of a weight is then its postsynaptic neuron's spike credits correlated with
the PSPs of its presynaptic spikes. For the last three weight matrices this
reproduces the closed-form integrated sums; deeper matrices follow the same
pattern.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from network.topology import NetworkParams, SpikeRecord, SpikeTrain
from srm.kernels import psp_kernel


@dataclass
class SampleGradientContext:
    record: SpikeRecord
    delta: np.ndarray
    params: NetworkParams

    def __post_init__(self):
        self.delta = np.asarray(self.delta, dtype=float)
        if self.delta.size != self.params.n_classes:
            raise ValueError(f"Error vector has {self.delta.size} entries, network has {self.params.n_classes} outputs")


@dataclass
class SpikeCredits:
    """Credit carried by each spike of one layer."""

    neurons: np.ndarray
    times: np.ndarray
    credits: np.ndarray


def _flatten(trains: Sequence[SpikeTrain]) -> Tuple[np.ndarray, np.ndarray]:
    counts = [len(train) for train in trains]
    neurons = np.repeat(np.arange(len(trains)), counts).astype(int)
    times = np.array([t for train in trains for t in train], dtype=float)
    return neurons, times


def output_credits(ctx: SampleGradientContext) -> SpikeCredits:
    """First output spikes carry the error signals; silent outputs carry nothing."""
    tau = ctx.record.tau
    fired = np.flatnonzero(np.isfinite(tau))
    return SpikeCredits(neurons=fired, times=tau[fired], credits=ctx.delta[fired])


def _psp_between(post: SpikeCredits, pre_neurons: np.ndarray, pre_times: np.ndarray,
                 ctx: SampleGradientContext, layer: int) -> np.ndarray:
    """PSP at each postsynaptic credited spike from each presynaptic spike, shape (n_post, n_pre)."""
    lag = post.times[:, None] - pre_times[None, :]
    if layer == 0 and ctx.params.delays is not None:
        lag = lag - ctx.params.delays[np.ix_(post.neurons, pre_neurons)]
    return np.asarray(psp_kernel(lag, ctx.params.kernel), dtype=float).reshape(lag.shape)


def propagate_credits(post: SpikeCredits, ctx: SampleGradientContext, layer: int) -> SpikeCredits:
    """Credits of the spikes of layer `layer` given the credits of layer `layer + 1`."""
    neurons, times = _flatten(ctx.record.trains[layer])
    if post.credits.size == 0 or times.size == 0:
        return SpikeCredits(neurons=neurons, times=times, credits=np.zeros(times.size))
    psp = _psp_between(post, neurons, times, ctx, layer)
    w = ctx.params.weights[layer][np.ix_(post.neurons, neurons)]
    credits = (post.credits[:, None] * w * psp).sum(axis=0) / ctx.params.noise.delta_u
    return SpikeCredits(neurons=neurons, times=times, credits=credits)


def correlate(post: SpikeCredits, ctx: SampleGradientContext, layer: int) -> np.ndarray:
    """Gradient of weight matrix `layer` from the credits of its postsynaptic spikes."""
    w = ctx.params.weights[layer]
    grad = np.zeros_like(w)
    neurons, times = _flatten(ctx.record.trains[layer])
    if post.credits.size == 0 or times.size == 0:
        return grad
    contrib = post.credits[:, None] * _psp_between(post, neurons, times, ctx, layer)
    # scatter (post spike, pre spike) pairs onto (post neuron, pre neuron)
    post_onehot = np.zeros((post.neurons.size, w.shape[0]))
    post_onehot[np.arange(post.neurons.size), post.neurons] = 1.0
    pre_onehot = np.zeros((neurons.size, w.shape[1]))
    pre_onehot[np.arange(neurons.size), neurons] = 1.0
    return post_onehot.T @ contrib @ pre_onehot


def weight_gradients(ctx: SampleGradientContext, depth: Optional[int] = None) -> List[np.ndarray]:
    """
    dC/dw for the last `depth` weight matrices (all of them by default),
    returned in network order.
    """
    n_mats = len(ctx.params.weights)
    depth = n_mats if depth is None else depth
    if not 1 <= depth <= n_mats:
        raise ValueError(f"depth must be within [1, {n_mats}] (got {depth})")

    grads: List[np.ndarray] = []
    credits = output_credits(ctx)
    for layer in range(n_mats - 1, n_mats - 1 - depth, -1):
        grads.append(correlate(credits, ctx, layer))
        if layer > n_mats - depth:
            credits = propagate_credits(credits, ctx, layer)
    return grads[::-1]


def output_weight_gradient(ctx: SampleGradientContext) -> np.ndarray:
    return weight_gradients(ctx, depth=1)[-1]


def hidden_weight_gradient(ctx: SampleGradientContext) -> np.ndarray:
    return weight_gradients(ctx, depth=2)[0]


def deep_hidden_weight_gradient(ctx: SampleGradientContext) -> np.ndarray:
    if len(ctx.params.weights) < 3:
        raise ValueError("The third-last weight matrix needs at least two hidden layers")
    return weight_gradients(ctx, depth=3)[0]
