from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from encoders import EncodedSample
from learning import ActivationVector, cross_entropy, predict, softmax_activation
from logger import logger
from network import NetworkParams, SpikeRecord, simulate
from .settings import ExperimentConfig

T = TypeVar('T')

NULL_WARNING_RATE = 0.5


@dataclass
class Presentation:
    record: SpikeRecord
    activation: ActivationVector
    loss: float


def present(params: NetworkParams, sample: EncodedSample, cfg: ExperimentConfig,
            key: Tuple[int, ...]) -> Presentation:
    """Simulate one sample with its own random stream and score the output spikes."""
    record = simulate(params, sample.spikes, T=cfg.T, dt=cfg.dt, rng=np.random.default_rng(key))
    activation = softmax_activation(record.tau, cfg.nu)
    return Presentation(record=record, activation=activation, loss=cross_entropy(activation, sample.label))


def ordered_map(fn: Callable[[int], T], n: int, workers: int) -> List[T]:
    """fn(0..n-1), possibly on worker threads, results in index order."""
    if workers <= 1 or n <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(fn, i) for i in range(n)]
        return [f.result() for f in futures]


@dataclass
class EvalResult:
    loss: float
    accuracy: float
    null_rate: float
    error_rate: float
    confusion: np.ndarray
    n_samples: int
    predictions: List[Optional[int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'loss': self.loss,
            'accuracy': self.accuracy,
            'null_rate': self.null_rate,
            'error_rate': self.error_rate,
            'confusion': self.confusion.astype(int).tolist(),
            'n_samples': self.n_samples,
        }


def confusion_matrix(labels: Sequence[int], predictions: Sequence[Optional[int]], n_classes: int) -> np.ndarray:
    """Rows are true classes; the extra last column counts null predictions."""
    matrix = np.zeros((n_classes, n_classes + 1), dtype=int)
    for y, p in zip(labels, predictions):
        matrix[y, n_classes if p is None else p] += 1
    return matrix


def evaluate(params: NetworkParams, samples: Sequence[EncodedSample], cfg: ExperimentConfig,
             key: Tuple[int, ...] = (0,)) -> EvalResult:
    """Mean cross-entropy plus first-to-spike predictions; nulls are neither right nor wrong answers."""
    if not samples:
        raise ValueError("Cannot evaluate an empty split")

    def score(i: int) -> Tuple[float, Optional[int]]:
        shown = present(params, samples[i], cfg, (*key, i))
        return shown.loss, predict(shown.record.tau, cfg.dt)

    results = ordered_map(score, len(samples), cfg.workers)
    losses = [loss for loss, _ in results]
    predictions = [p for _, p in results]
    labels = [s.label for s in samples]

    n = len(samples)
    correct = sum(1 for y, p in zip(labels, predictions) if p == y)
    nulls = sum(1 for p in predictions if p is None)
    result = EvalResult(
        loss=float(np.mean(losses)),
        accuracy=correct / n,
        null_rate=nulls / n,
        error_rate=(n - correct - nulls) / n,
        confusion=confusion_matrix(labels, predictions, params.n_classes),
        n_samples=n,
        predictions=predictions,
    )
    if result.null_rate > NULL_WARNING_RATE:
        logger.warning(f"{100 * result.null_rate:.0f}% of {n} samples produced no clear output spike")
    return result


def early_stop_tracker(series: Sequence[float], rule: str = 'min', tolerance: float = 0.01) -> int:
    """
    Index of the chosen stopping point of a validation-loss series.
    'min' picks the (first) minimum; 'within_1pct' the first point within
    `tolerance` of it.
    """
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        raise ValueError("Early stopping needs a non-empty series")
    best = int(np.argmin(values))
    if rule == 'min':
        return best
    if rule == 'within_1pct':
        limit = values[best] + tolerance * abs(values[best])
        return int(np.flatnonzero(values <= limit)[0])
    raise ValueError(f"Unknown early stopping rule '{rule}'")
