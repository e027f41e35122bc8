"""Layered feedforward topology, weight initialisation and spike records."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from srm.kernels import DEFAULT_KERNEL, DEFAULT_NOISE, EscapeNoiseParams, KernelParams

logger = logging.getLogger(__name__)

INPUT = "input"
STOCHASTIC = "stochastic"
DETERMINISTIC = "deterministic"
LAYER_KINDS = (INPUT, STOCHASTIC, DETERMINISTIC)

DELAY_RANGE = (1, 10)

# per-neuron list of firing times in ms
SpikeTrain = List[float]


@dataclass(frozen=True)
class LayerSpec:
    size: int
    kind: str

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"Layer size must be positive (got {self.size})")
        if self.kind not in LAYER_KINDS:
            raise ValueError(f"Unknown layer kind '{self.kind}', expected one of {LAYER_KINDS}")


def build_layers(sizes: Sequence[int], hidden_kind: str = STOCHASTIC) -> List[LayerSpec]:
    """Input layer, hidden layers of `hidden_kind`, deterministic output layer."""
    if len(sizes) < 3:
        raise ValueError(f"Need input, at least one hidden and an output layer (got sizes {list(sizes)})")
    layers = [LayerSpec(int(sizes[0]), INPUT)]
    layers += [LayerSpec(int(n), hidden_kind) for n in sizes[1:-1]]
    layers.append(LayerSpec(int(sizes[-1]), DETERMINISTIC))
    validate_layers(layers)
    return layers


def validate_layers(layers: Sequence[LayerSpec]) -> None:
    if len(layers) < 3:
        raise ValueError("A network needs at least three layers")
    if layers[0].kind != INPUT:
        raise ValueError("The first layer must be the input layer")
    if any(layer.kind == INPUT for layer in layers[1:]):
        raise ValueError("Only the first layer may be an input layer")
    if layers[-1].kind != DETERMINISTIC:
        raise ValueError("The output layer must be deterministic")


@dataclass
class NetworkParams:
    """
    Weights w[l] map layer l to layer l+1 with shape (N_{l+1}, N_l).
    `delays` (ms, integers) applies to the input->hidden projection only.
    """

    layers: List[LayerSpec]
    weights: List[np.ndarray]
    delays: Optional[np.ndarray] = None
    kernel: KernelParams = field(default=DEFAULT_KERNEL)
    noise: EscapeNoiseParams = field(default=DEFAULT_NOISE)
    seed: int = 0

    def __post_init__(self):
        validate_layers(self.layers)
        if len(self.weights) != len(self.layers) - 1:
            raise ValueError(f"Expected {len(self.layers) - 1} weight matrices, got {len(self.weights)}")
        for l, w in enumerate(self.weights):
            expected = (self.layers[l + 1].size, self.layers[l].size)
            if w.shape != expected:
                raise ValueError(f"Weight matrix {l} has shape {w.shape}, expected {expected}")
        if self.delays is not None and self.delays.shape != self.weights[0].shape:
            raise ValueError(f"Delay matrix has shape {self.delays.shape}, expected {self.weights[0].shape}")

    @property
    def sizes(self) -> List[int]:
        return [layer.size for layer in self.layers]

    @property
    def n_classes(self) -> int:
        return self.layers[-1].size

    def copy(self) -> "NetworkParams":
        return NetworkParams(
            layers=list(self.layers),
            weights=[w.copy() for w in self.weights],
            delays=None if self.delays is None else self.delays.copy(),
            kernel=self.kernel,
            noise=self.noise,
            seed=self.seed,
        )


@dataclass
class SpikeRecord:
    """All spike trains of one sample presentation, input layer included."""

    trains: List[List[SpikeTrain]]
    tau: np.ndarray
    horizon: float

    @property
    def output(self) -> List[SpikeTrain]:
        return self.trains[-1]

    def spike_counts(self, layer: int) -> np.ndarray:
        return np.array([len(train) for train in self.trains[layer]], dtype=float)


def init_weights(layers: Sequence[LayerSpec], ranges: Sequence[Tuple[float, float]],
                 rng: np.random.Generator, delays: bool = False,
                 kernel: KernelParams = DEFAULT_KERNEL, noise: EscapeNoiseParams = DEFAULT_NOISE,
                 seed: int = 0) -> NetworkParams:
    """Draw every weight i.i.d. from U[lo, hi) of its layer; delays from the integers 1..10 ms."""
    layers = list(layers)
    validate_layers(layers)
    if len(ranges) != len(layers) - 1:
        raise ValueError(f"Expected {len(layers) - 1} weight ranges, got {len(ranges)}")

    weights = []
    for l, (lo, hi) in enumerate(ranges):
        if lo > hi:
            raise ValueError(f"Weight range {l} is empty: [{lo}, {hi})")
        shape = (layers[l + 1].size, layers[l].size)
        weights.append(rng.uniform(lo, hi, size=shape) if hi > lo else np.full(shape, float(lo)))

    delay_matrix = None
    if delays:
        delay_matrix = rng.integers(DELAY_RANGE[0], DELAY_RANGE[1] + 1, size=weights[0].shape).astype(float)

    logger.debug("Initialised network %s (delays=%s)", [layer.size for layer in layers], delays)
    return NetworkParams(layers=layers, weights=weights, delays=delay_matrix,
                         kernel=kernel, noise=noise, seed=seed)


def first_spike_times(record: SpikeRecord) -> np.ndarray:
    return np.array([min(train) if train else np.inf for train in record.output], dtype=float)
