"""Training loop of one (run, fold): mini-batches, RMSProp updates, periodic evaluation."""

import math
import time
from dataclasses import dataclass, field
from itertools import islice
from typing import Any, Dict, List, Optional, Protocol, Tuple

import numpy as np

from data import iterate_batches
from learning import (
    GradientState, OptimizerHyper, SampleGradientContext, add_changes, output_error_signals,
    rmsprop_apply, sample_weight_change
)
from logger import logger
from network import NetworkParams, build_layers, init_weights
from .evaluation import EvalResult, evaluate, early_stop_tracker, ordered_map, present
from .pipeline import (
    FoldData, STREAM_BATCHES, STREAM_EVAL, STREAM_INIT, STREAM_TRAIN, kernel_params, layer_sizes, noise_params
)
from .settings import ConfigError, ExperimentConfig


class RunCancelled(Exception):
    pass


class ProgressReporter(Protocol):
    def on_evaluation(self, run: int, fold: int, iteration: int, total: int, result: EvalResult) -> None: ...

    def cancelled(self) -> bool: ...


@dataclass
class EvalPoint:
    iteration: int
    epoch: int
    split: str
    result: EvalResult
    wall_clock: float


@dataclass
class RunMetrics:
    """Everything one (run, fold) produced."""

    run: int
    fold: int
    evaluations: List[EvalPoint] = field(default_factory=list)
    train_loss: List[Tuple[int, int, float]] = field(default_factory=list)
    stop_index: Optional[int] = None
    test: Optional[EvalPoint] = None
    params: Optional[NetworkParams] = None
    optimizer: Optional[GradientState] = None
    encoder: Optional[dict] = None
    start_iteration: int = 0

    @property
    def monitor_losses(self) -> List[float]:
        return [p.result.loss for p in self.evaluations]

    @property
    def stop_point(self) -> Optional[EvalPoint]:
        return None if self.stop_index is None else self.evaluations[self.stop_index]

    def epoch_at(self, iteration: int) -> Optional[int]:
        """1-based epoch of the mini-batch that completed `iteration` updates."""
        for it, epoch, _ in self.train_loss:
            if it + 1 == iteration:
                return epoch + 1
        return None


def optimizer_hyper(cfg: ExperimentConfig) -> OptimizerHyper:
    return OptimizerHyper(eta0=cfg.eta0, lambda0=cfg.lambda0, gamma0=cfg.gamma0, beta=cfg.beta,
                          epsilon=cfg.epsilon, w_min=cfg.w_min, w_max=cfg.w_max)


def build_network(cfg: ExperimentConfig, n_inputs: int, run: int, fold: int) -> NetworkParams:
    layers = build_layers(layer_sizes(cfg, n_inputs), hidden_kind=cfg.hidden_kind)
    rng = np.random.default_rng((cfg.seed, run, fold, STREAM_INIT))
    return init_weights(layers, cfg.init_ranges, rng, delays=cfg.delays,
                        kernel=kernel_params(cfg), noise=noise_params(cfg), seed=cfg.seed)


def total_iterations(cfg: ExperimentConfig, n_train: int) -> int:
    if cfg.iterations is not None:
        return cfg.iterations
    return cfg.epochs * math.ceil(n_train / cfg.batch_size)


@dataclass
class ResumePoint:
    """Network and optimiser state of one (run, fold) read back from its checkpoint."""

    run: int
    fold: int
    params: NetworkParams
    optimizer: Dict[str, Any]
    config: Dict[str, Any]

    @property
    def iteration(self) -> int:
        return int(self.optimizer.get('updates', 0))

    @property
    def seed(self) -> int:
        return int(self.config['seed'])


def _restore(cfg: ExperimentConfig, data: FoldData, resume: ResumePoint) -> Tuple[NetworkParams, GradientState]:
    params = resume.params.copy()
    expected = layer_sizes(cfg, data.encoder.n_inputs)
    if list(params.sizes) != expected:
        raise ConfigError(f"Checkpoint network {list(params.sizes)} does not match the configured {expected}")
    state = GradientState.from_dict(resume.optimizer, params)
    state.hyper = optimizer_hyper(cfg)
    return params, state


def _is_eval_step(cfg: ExperimentConfig, iteration: int, batches_per_epoch: int, total: int) -> bool:
    done = iteration + 1
    if done == total:
        return True
    if cfg.eval_unit == 'iteration':
        return done % cfg.eval_every == 0
    return done % batches_per_epoch == 0 and (done // batches_per_epoch) % cfg.eval_every == 0


def train_fold(cfg: ExperimentConfig, data: FoldData, run: int, reporter: Optional[ProgressReporter] = None,
               resume: Optional[ResumePoint] = None) -> RunMetrics:
    """
    Train for the configured epochs or iterations. A resumed fold continues
    the batch order and random streams where its checkpoint left off.
    """
    fold = data.fold
    if resume is None:
        params = build_network(cfg, data.encoder.n_inputs, run, fold)
        state = GradientState.for_network(params, optimizer_hyper(cfg))
    else:
        params, state = _restore(cfg, data, resume)
    start = state.updates
    metrics = RunMetrics(run=run, fold=fold, encoder=data.encoder.to_dict(), start_iteration=start)

    n_train = len(data.train)
    batches_per_epoch = math.ceil(n_train / cfg.batch_size)
    end = start + total_iterations(cfg, n_train)
    stream = islice(iterate_batches(n_train, cfg.batch_size, (cfg.seed, run, fold, STREAM_BATCHES)), start, None)
    snapshots: List[Tuple[NetworkParams, GradientState]] = []
    started = time.monotonic()

    if start:
        logger.info(f"Run {run} fold {fold}: resuming at iteration {start} (epoch {start // batches_per_epoch})")
    logger.info(f"Run {run} fold {fold}: training {params.sizes} up to iteration {end} on {n_train} samples")

    for iteration in range(start, end):
        epoch, batch = next(stream)

        def sample_change(i: int):
            sample = data.train[batch[i]]
            shown = present(params, sample, cfg, (cfg.seed, run, fold, STREAM_TRAIN, iteration, i))
            delta = output_error_signals(shown.activation, sample.label)
            ctx = SampleGradientContext(record=shown.record, delta=delta, params=params)
            return sample_weight_change(ctx, state.hyper), shown.loss

        # reduce in sample order so results do not depend on the worker count
        results = ordered_map(sample_change, len(batch), cfg.workers)
        for changes, _ in results:
            add_changes(state, changes)
        metrics.train_loss.append((iteration, epoch, float(np.mean([loss for _, loss in results]))))
        rmsprop_apply(state, params)

        if not _is_eval_step(cfg, iteration, batches_per_epoch, end):
            continue

        eval_index = len(metrics.evaluations)
        result = evaluate(params, data.monitor, cfg, (cfg.seed, run, fold, STREAM_EVAL, eval_index))
        metrics.evaluations.append(EvalPoint(iteration=iteration + 1, epoch=epoch + 1, split=data.monitor_name,
                                             result=result, wall_clock=time.monotonic() - started))
        if cfg.early_stopping:
            snapshots.append((params.copy(), _copy_state(state, params)))
        logger.info(f"Run {run} fold {fold} iteration {iteration + 1}/{end} (epoch {epoch + 1}): "
                    f"{data.monitor_name} loss {result.loss:.4f}, accuracy {result.accuracy:.3f}, "
                    f"null rate {result.null_rate:.3f}")

        if reporter is not None:
            reporter.on_evaluation(run, fold, iteration + 1, end, result)
            if reporter.cancelled():
                logger.warning(f"Run {run} fold {fold} cancelled at iteration {iteration + 1}")
                raise RunCancelled("Run cancelled by user")

    metrics.stop_index = early_stop_tracker(metrics.monitor_losses, cfg.early_stop_rule)
    if cfg.early_stopping:
        params, state = snapshots[metrics.stop_index]
        logger.info(f"Run {run} fold {fold}: early stop at evaluation {metrics.stop_index} "
                    f"(iteration {metrics.stop_point.iteration})")
    metrics.params, metrics.optimizer = params, state

    test_samples = data.test if data.test is not None else data.monitor
    reported = metrics.stop_point if cfg.early_stopping else metrics.evaluations[-1]
    test_result = evaluate(params, test_samples, cfg, (cfg.seed, run, fold, STREAM_EVAL, len(metrics.evaluations)))
    metrics.test = EvalPoint(iteration=reported.iteration, epoch=reported.epoch, split='test',
                             result=test_result, wall_clock=time.monotonic() - started)
    logger.info(f"Run {run} fold {fold}: test accuracy {test_result.accuracy:.3f}, loss {test_result.loss:.4f}")
    return metrics


def _copy_state(state: GradientState, params: NetworkParams) -> GradientState:
    copy = GradientState.for_network(params, state.hyper)
    copy.m = [m.copy() for m in state.m]
    copy.updates = state.updates
    return copy
