"""Population state of SRM neurons advanced on a fixed time grid."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .kernels import (
    DEFAULT_KERNEL, DEFAULT_NOISE, EscapeNoiseParams, KernelParams, spike_probability
)


@dataclass
class NeuronState:
    """
    Exponential-trace form of the SRM membrane potential for a layer of neurons.

    trace_m and trace_s hold the weighted exp(-s/tau_m) and exp(-s/tau_s)
    components of all PSPs received so far (already scaled by eps0), and
    reset_trace holds the summed reset kernels of the neuron's own spikes.
    The potential at the current time is trace_m - trace_s + reset_trace.
    """

    trace_m: np.ndarray
    trace_s: np.ndarray
    reset_trace: np.ndarray
    fired_times: List[List[float]]
    prev_u: np.ndarray
    t: float = 0.0
    kernel: KernelParams = field(default=DEFAULT_KERNEL)

    @classmethod
    def at_rest(cls, n: int, kernel: KernelParams = DEFAULT_KERNEL) -> "NeuronState":
        return cls(
            trace_m=np.zeros(n),
            trace_s=np.zeros(n),
            reset_trace=np.zeros(n),
            fired_times=[[] for _ in range(n)],
            prev_u=np.full(n, -np.inf),
            kernel=kernel,
        )

    @property
    def size(self) -> int:
        return len(self.fired_times)

    def inject(self, weights: np.ndarray, lag: float = 0.0) -> None:
        """Add one presynaptic spike per neuron with the given weights, emitted `lag` ms ago."""
        k = self.kernel
        w = np.asarray(weights, dtype=float)
        self.trace_m += k.eps0 * w * np.exp(-lag / k.tau_m)
        self.trace_s += k.eps0 * w * np.exp(-lag / k.tau_s)

    def set_input(self, trace_m: np.ndarray, trace_s: np.ndarray) -> None:
        """Overwrite the input traces with values computed elsewhere for the current time."""
        self.trace_m = np.array(trace_m, dtype=float)
        self.trace_s = np.array(trace_s, dtype=float)

    def advance(self, dt: float) -> None:
        k = self.kernel
        self.trace_m *= np.exp(-dt / k.tau_m)
        self.trace_s *= np.exp(-dt / k.tau_s)
        self.reset_trace *= np.exp(-dt / k.tau_m)
        self.t += dt

    def _fire(self, fired: np.ndarray, u: np.ndarray, t: float) -> None:
        self.reset_trace[fired] += self.kernel.kappa0
        for idx in np.flatnonzero(fired):
            self.fired_times[idx].append(float(t))
        # the reset is part of the potential from t onward
        self.prev_u = u + self.kernel.kappa0 * fired


def membrane_potential(state: NeuronState, t: Optional[float] = None) -> np.ndarray:
    """Potential of every neuron at the state's current time.

    `t` is accepted for symmetry with the step functions and must match the
    time the traces were advanced to.
    """
    if t is not None and not np.isclose(t, state.t):
        raise ValueError(f"State is at t={state.t} ms, not {t} ms")
    return state.trace_m - state.trace_s + state.reset_trace


def step_deterministic(state: NeuronState, t: float, dt: float) -> np.ndarray:
    """Fire neurons whose potential reaches threshold from below at grid time t."""
    u = membrane_potential(state)
    fired = (u >= state.kernel.theta) & (state.prev_u < state.kernel.theta)
    state._fire(fired, u, t)
    return fired


def step_stochastic(state: NeuronState, t: float, dt: float, rng: np.random.Generator,
                    noise: EscapeNoiseParams = DEFAULT_NOISE) -> np.ndarray:
    """Fire each neuron with probability 1 - exp(-rho(u) dt) at grid time t."""
    u = membrane_potential(state)
    p = spike_probability(u, dt, state.kernel, noise)
    # one draw per neuron per step keeps the stream aligned regardless of activity
    fired = rng.random(state.size) < p
    state._fire(fired, u, t)
    return fired
