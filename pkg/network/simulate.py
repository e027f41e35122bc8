"""Clock-driven forward pass of a layered SRM network over one sample."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from srm.kernels import KernelParams
from srm.neuron import NeuronState, step_deterministic, step_stochastic
from .topology import NetworkParams, SpikeRecord, SpikeTrain, STOCHASTIC, first_spike_times

logger = logging.getLogger(__name__)

DEFAULT_T = 40.0
DEFAULT_DT = 0.1

# spikes landing within this distance of a grid time count as arrived
_GRID_TOL = 1e-9


def time_grid(T: float, dt: float) -> np.ndarray:
    if dt <= 0 or T <= 0:
        raise ValueError(f"T and dt must be positive (got T={T}, dt={dt})")
    return np.arange(int(round(T / dt))) * dt


def _flatten(trains: Sequence[SpikeTrain]) -> Tuple[np.ndarray, np.ndarray]:
    counts = [len(train) for train in trains]
    neurons = np.repeat(np.arange(len(trains)), counts)
    times = np.array([t for train in trains for t in train], dtype=float)
    return neurons, times


def psp_traces(trains: Sequence[SpikeTrain], grid: np.ndarray, kernel: KernelParams,
               shift: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per presynaptic neuron, the summed exp(-s/tau_m) and exp(-s/tau_s) terms of
    its spikes (delayed by `shift` ms) sampled on the grid. Shapes (steps, n_pre).
    Exact for spike times that fall between grid points.
    """
    n_pre = len(trains)
    neurons, times = _flatten(trains)
    if times.size == 0:
        zeros = np.zeros((len(grid), n_pre))
        return zeros, zeros.copy()

    lag = grid[:, None] - (times[None, :] + shift)
    causal = lag >= -_GRID_TOL
    lag = np.where(causal, np.maximum(lag, 0.0), 0.0)
    e_m = np.where(causal, np.exp(-lag / kernel.tau_m), 0.0)
    e_s = np.where(causal, np.exp(-lag / kernel.tau_s), 0.0)

    owner = np.zeros((times.size, n_pre))
    owner[np.arange(times.size), neurons] = 1.0
    return e_m @ owner, e_s @ owner


def input_drive(trains: Sequence[SpikeTrain], weights: np.ndarray, grid: np.ndarray,
                kernel: KernelParams, delays: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted input traces (steps, n_post) for a postsynaptic layer."""
    if delays is None:
        p_m, p_s = psp_traces(trains, grid, kernel)
        return kernel.eps0 * p_m @ weights.T, kernel.eps0 * p_s @ weights.T

    drive_m = np.zeros((len(grid), weights.shape[0]))
    drive_s = np.zeros_like(drive_m)
    for d in np.unique(delays):
        w_d = np.where(delays == d, weights, 0.0)
        p_m, p_s = psp_traces(trains, grid, kernel, shift=float(d))
        drive_m += kernel.eps0 * p_m @ w_d.T
        drive_s += kernel.eps0 * p_s @ w_d.T
    return drive_m, drive_s


def _validate_input(params: NetworkParams, inputs: Sequence[SpikeTrain], T: float) -> None:
    if len(inputs) != params.layers[0].size:
        raise ValueError(f"Expected {params.layers[0].size} input trains, got {len(inputs)}")
    for j, train in enumerate(inputs):
        for t in train:
            if not 0.0 <= t < T:
                raise ValueError(f"Input spike {t} ms on neuron {j} lies outside [0, {T})")


def simulate(params: NetworkParams, inputs: Sequence[SpikeTrain], T: float = DEFAULT_T,
             dt: float = DEFAULT_DT, rng: Optional[np.random.Generator] = None) -> SpikeRecord:
    """
    Present one encoded sample and record every layer's spikes.

    Layers are simulated one after another: a neuron only sees spikes of the
    layer below and eps(0) = 0, so this equals the interleaved pass.
    """
    _validate_input(params, inputs, T)
    if rng is None:
        rng = np.random.default_rng(params.seed)
    grid = time_grid(T, dt)
    kernel = params.kernel

    trains: List[List[SpikeTrain]] = [[sorted(float(t) for t in train) for train in inputs]]
    for l, w in enumerate(params.weights):
        layer = params.layers[l + 1]
        delays = params.delays if l == 0 else None
        drive_m, drive_s = input_drive(trains[-1], w, grid, kernel, delays)

        state = NeuronState.at_rest(layer.size, kernel)
        for k, t in enumerate(grid):
            state.set_input(drive_m[k], drive_s[k])
            if layer.kind == STOCHASTIC:
                step_stochastic(state, t, dt, rng, params.noise)
            else:
                step_deterministic(state, t, dt)
            state.advance(dt)
        trains.append(state.fired_times)

    record = SpikeRecord(trains=trains, tau=np.empty(0), horizon=float(T))
    record.tau = first_spike_times(record)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("Spike counts per layer: %s", [sum(len(t) for t in layer) for layer in trains])
    return record
