"""Population coding of real-valued features with overlapping Gaussian receptive fields."""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from network.topology import SpikeTrain

logger = logging.getLogger(__name__)


@dataclass
class ReceptiveFieldConfig:
    """q encoders per feature spread over [x_min, x_max]; centres and widths derive from them."""

    q: int
    x_min: np.ndarray
    x_max: np.ndarray
    max_latency: float = 10.0
    cutoff: float = 9.0

    def __post_init__(self):
        if self.q < 3:
            raise ValueError(f"Receptive fields need q >= 3 (got {self.q})")
        self.x_min = np.atleast_1d(np.asarray(self.x_min, dtype=float))
        self.x_max = np.atleast_1d(np.asarray(self.x_max, dtype=float))
        if self.x_min.shape != self.x_max.shape:
            raise ValueError("x_min and x_max must have one entry per feature")
        if np.any(self.x_max < self.x_min):
            raise ValueError("x_max must not be below x_min")

    @property
    def n_features(self) -> int:
        return self.x_min.size

    @property
    def n_inputs(self) -> int:
        return self.n_features * self.q

    @property
    def span(self) -> np.ndarray:
        # a constant feature still gets distinct centres
        span = self.x_max - self.x_min
        return np.where(span > 0, span, 1.0)

    @property
    def centers(self) -> np.ndarray:
        """Shape (n_features, q); the outer two centres sit half a spacing outside the range."""
        j = np.arange(1, self.q + 1)
        spacing = self.span / (self.q - 2)
        return self.x_min[:, None] + (2 * j[None, :] - 3) / 2.0 * spacing[:, None]

    @property
    def sigma(self) -> np.ndarray:
        return 2.0 / 3.0 * self.span / (self.q - 2)


def fit_receptive_fields(features: np.ndarray, q: int) -> ReceptiveFieldConfig:
    """Feature ranges taken from the (training) samples."""
    features = np.asarray(features, dtype=float)
    x_min, x_max = features.min(axis=0), features.max(axis=0)
    constant = np.flatnonzero(x_max == x_min)
    if constant.size:
        logger.debug("Features %s are constant over %d samples", constant.tolist(), len(features))
    return ReceptiveFieldConfig(q=q, x_min=x_min, x_max=x_max)


def receptive_field_activations(x: Sequence[float], cfg: ReceptiveFieldConfig) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size != cfg.n_features:
        raise ValueError(f"Expected {cfg.n_features} features, got {x.size}")
    diff = x[:, None] - cfg.centers
    return np.exp(-diff ** 2 / (2.0 * cfg.sigma[:, None] ** 2))


def receptive_field_encode(x: Sequence[float], cfg: ReceptiveFieldConfig) -> List[SpikeTrain]:
    """Feature-major trains: encoder j of feature i is input i*q + j."""
    times = cfg.max_latency * (1.0 - receptive_field_activations(x, cfg))
    return [[float(t)] if t <= cfg.cutoff else [] for t in times.ravel()]
