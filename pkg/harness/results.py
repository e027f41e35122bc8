"""metrics.csv, summary.json and per-run checkpoints of an experiment invocation."""

import csv
import json
import os
from typing import Any, Dict, List, Sequence

import numpy as np

from config import VERSION
from network import CheckpointError, load_checkpoint, load_checkpoint_extra, save_checkpoint
from .settings import ExperimentConfig
from .training import EvalPoint, ResumePoint, RunMetrics

METRIC_FIELDS = ['run', 'fold', 'iteration', 'epoch', 'split', 'metric', 'value']
SCALAR_METRICS = ('loss', 'accuracy', 'null_rate', 'error_rate')


def mean_sem(values: Sequence[float]) -> Dict[str, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return {'mean': float('nan'), 'sem': float('nan'), 'n': 0}
    sem = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return {'mean': float(arr.mean()), 'sem': sem, 'n': int(arr.size)}


def _point_rows(m: RunMetrics, point: EvalPoint) -> List[List[Any]]:
    r = point.result
    return [[m.run, m.fold, point.iteration, point.epoch, point.split, name, getattr(r, name)]
            for name in SCALAR_METRICS]


def write_metrics(path: str, results: Sequence[RunMetrics]) -> None:
    """Long format: one (run, fold, iteration, split, metric) value per row."""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(METRIC_FIELDS)
        for m in results:
            for iteration, epoch, loss in m.train_loss:
                writer.writerow([m.run, m.fold, iteration + 1, epoch + 1, 'train_batch', 'loss', loss])
            for point in m.evaluations:
                writer.writerows(_point_rows(m, point))
            if m.test is not None:
                writer.writerows(_point_rows(m, m.test))


def run_summary(m: RunMetrics) -> Dict[str, Any]:
    stop = m.stop_point
    return {
        'run': m.run,
        'fold': m.fold,
        'start_iteration': m.start_iteration,
        'evaluations': len(m.evaluations),
        'stop_index': m.stop_index,
        'stop_iteration': stop.iteration if stop else None,
        'stop_epoch': stop.epoch if stop else None,
        'best_monitor_loss': min(m.monitor_losses) if m.evaluations else None,
        'final_monitor': m.evaluations[-1].result.to_dict() if m.evaluations else None,
        'test': m.test.result.to_dict() if m.test else None,
    }


def aggregate(results: Sequence[RunMetrics]) -> Dict[str, Any]:
    """Mean and standard error over every (run, fold) of the reported test metrics."""
    tested = [m for m in results if m.test is not None]
    out = {name: mean_sem([getattr(m.test.result, name) for m in tested]) for name in SCALAR_METRICS}
    out['stop_epoch'] = mean_sem([m.stop_point.epoch for m in results if m.stop_point])
    out['stop_iteration'] = mean_sem([m.stop_point.iteration for m in results if m.stop_point])
    out['final_monitor_loss'] = mean_sem([m.evaluations[-1].result.loss for m in results if m.evaluations])
    return out


def write_summary(path: str, cfg: ExperimentConfig, results: Sequence[RunMetrics],
                  extra: Dict[str, Any] = None) -> Dict[str, Any]:
    summary = {
        'version': VERSION,
        'config': cfg.model_dump(mode='json'),
        'runs': [run_summary(m) for m in results],
        'aggregate': aggregate(results),
    }
    if extra:
        summary.update(extra)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(summary, f, indent=2)
    return summary


def checkpoint_path(out_dir: str, run: int, fold: int) -> str:
    return os.path.join(out_dir, f'checkpoint_run{run}_fold{fold}.json')


def write_checkpoint(out_dir: str, cfg: ExperimentConfig, m: RunMetrics) -> str:
    path = checkpoint_path(out_dir, m.run, m.fold)
    iteration = m.optimizer.updates if m.optimizer else None
    save_checkpoint(
        path, m.params,
        optimizer=m.optimizer.to_dict() if m.optimizer else None,
        extra={'version': VERSION, 'config': cfg.model_dump(mode='json'), 'encoder': m.encoder,
               'run': m.run, 'fold': m.fold, 'iteration': iteration,
               'epoch': m.epoch_at(iteration) if iteration else None},
    )
    return path


def read_resume_point(path: str) -> ResumePoint:
    """The (run, fold) state a checkpoint written by write_checkpoint can continue from."""
    params, optimizer = load_checkpoint(path)
    extra = load_checkpoint_extra(path)
    if optimizer is None:
        raise CheckpointError(f"{path} carries no optimiser state to resume from")
    missing = [key for key in ('config', 'run', 'fold') if key not in extra]
    if missing:
        raise CheckpointError(f"{path} lacks {', '.join(missing)} needed to resume")
    return ResumePoint(run=int(extra['run']), fold=int(extra['fold']), params=params, optimizer=optimizer,
                       config=extra['config'])
