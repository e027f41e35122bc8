"""Single-spike latency encoding through the first response time of a LIF neuron."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from network.topology import SpikeTrain
from srm.kernels import DEFAULT_KERNEL, KernelParams, lif_current_for_latency, lif_first_spike_time

NORMALIZED = "normalized"
VALUE_MAP = "value_map"


@dataclass
class LatencyEncoderConfig:
    """
    normalized: I = i_max * (x - lo) / (hi - lo), with [lo, hi] the fixed
    value_range or the sample's own min/max.
    value_map: each feature value is looked up in `value_map` (value -> nA).
    """

    resistance: float = 4.0
    i_max: float = 20.0
    cutoff: float = 9.0
    mode: str = NORMALIZED
    value_range: Optional[Tuple[float, float]] = None
    value_map: Dict[float, float] = field(default_factory=dict)
    bias: bool = False
    kernel: KernelParams = DEFAULT_KERNEL

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive (got {self.cutoff})")
        if self.i_max <= 0:
            raise ValueError(f"i_max must be positive (got {self.i_max})")
        if self.resistance <= 0:
            raise ValueError(f"resistance must be positive (got {self.resistance})")
        if self.mode not in (NORMALIZED, VALUE_MAP):
            raise ValueError(f"Unknown latency mode '{self.mode}'")
        if self.mode == VALUE_MAP and not self.value_map:
            raise ValueError("value_map mode needs a non-empty value map")

    def n_inputs(self, n_features: int) -> int:
        return n_features + (1 if self.bias else 0)


def value_map_from_latencies(latencies: Dict[float, float], resistance: float = 4.0,
                             kernel: KernelParams = DEFAULT_KERNEL) -> Dict[float, float]:
    """Currents that make the encoder fire at the requested latencies (0 ms -> inf)."""
    return {float(v): float(lif_current_for_latency(t, resistance, kernel)) for v, t in latencies.items()}


def feature_currents(x: Sequence[float], cfg: LatencyEncoderConfig) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("Latency encoding needs finite features")

    if cfg.mode == VALUE_MAP:
        try:
            return np.array([cfg.value_map[float(v)] for v in x], dtype=float)
        except KeyError as e:
            raise ValueError(f"Feature value {e.args[0]} has no entry in the value map") from e

    lo, hi = cfg.value_range if cfg.value_range is not None else (x.min(), x.max())
    if hi <= lo:
        return np.zeros_like(x)
    return cfg.i_max * (np.clip(x, lo, hi) - lo) / (hi - lo)


def latency_encode(x: Sequence[float], cfg: LatencyEncoderConfig) -> List[SpikeTrain]:
    """One train per feature (plus a bias train firing at 0 ms when enabled)."""
    times = np.asarray(lif_first_spike_time(feature_currents(x, cfg), cfg.resistance, cfg.kernel), dtype=float)
    trains: List[SpikeTrain] = [[float(t)] if t <= cfg.cutoff else [] for t in np.atleast_1d(times)]
    if cfg.bias:
        trains.append([0.0])
    return trains
