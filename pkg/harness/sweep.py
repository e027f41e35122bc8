"""Grid sweeps over numeric config fields, reporting loss minimum and time-to-minimum per point."""

import csv
import itertools
import json
import os
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import VERSION
from logger import logger
from .experiment import run_experiment
from .pipeline import resolve_out_dir
from .results import mean_sem
from .settings import ConfigError, ExperimentConfig, apply_overrides
from .training import ProgressReporter, RunMetrics

SWEEP_FIELDS = [
    'point', 'params', 'min_loss_median', 'min_loss_sem', 'min_iteration', 'min_epoch',
    'within_1pct_iteration', 'within_1pct_epoch', 'within_10pct_iteration', 'within_10pct_epoch',
    'test_accuracy_mean', 'test_accuracy_sem',
]


def parse_grid(axes: Sequence[str]) -> Dict[str, List[Any]]:
    """'eta0=0.01,0.1,1' -> {'eta0': [0.01, 0.1, 1.0]}; integers stay integers."""
    grid: Dict[str, List[Any]] = {}
    for axis in axes:
        key, sep, values = axis.partition('=')
        key = key.strip()
        if not sep or not key or not values.strip():
            raise ConfigError(f"Grid axis '{axis}' must look like key=v1,v2,...")
        if key not in ExperimentConfig.model_fields:
            raise ConfigError(f"Unknown config field '{key}' in grid")
        parsed = []
        for raw in values.split(','):
            raw = raw.strip()
            try:
                parsed.append(int(raw))
            except ValueError:
                try:
                    parsed.append(float(raw))
                except ValueError as e:
                    raise ConfigError(f"Grid value '{raw}' for '{key}' is not numeric") from e
        grid[key] = parsed
    if not grid:
        raise ConfigError("Sweep grid is empty")
    return grid


def grid_points(grid: Dict[str, List[Any]]) -> List[Dict[str, Any]]:
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def _first_within(curve: np.ndarray, tolerance: float) -> int:
    best = curve.min()
    return int(np.flatnonzero(curve <= best + tolerance * abs(best))[0])


def summarize_point(runs: Sequence[RunMetrics]) -> Dict[str, Any]:
    """Minimum of each run's monitored loss, and timing read off the run-averaged curve."""
    curves = [np.array(m.monitor_losses) for m in runs if m.evaluations]
    length = min(len(c) for c in curves)
    mean_curve = np.mean([c[:length] for c in curves], axis=0)
    points = runs[0].evaluations[:length]

    minima = np.array([c.min() for c in curves])
    best = int(np.argmin(mean_curve))
    within_1 = _first_within(mean_curve, 0.01)
    within_10 = _first_within(mean_curve, 0.10)
    accuracy = mean_sem([m.test.result.accuracy for m in runs if m.test is not None])
    sem = mean_sem(minima)['sem']
    return {
        'min_loss_median': float(np.median(minima)),
        'min_loss_sem': sem,
        'min_iteration': points[best].iteration,
        'min_epoch': points[best].epoch,
        'within_1pct_iteration': points[within_1].iteration,
        'within_1pct_epoch': points[within_1].epoch,
        'within_10pct_iteration': points[within_10].iteration,
        'within_10pct_epoch': points[within_10].epoch,
        'test_accuracy_mean': accuracy['mean'],
        'test_accuracy_sem': accuracy['sem'],
        'mean_curve': mean_curve.tolist(),
    }


def sweep(cfg: ExperimentConfig, grid: Dict[str, List[Any]], out_dir: Optional[str] = None,
          data_dir: Optional[str] = None, reporter: Optional[ProgressReporter] = None) -> List[Dict[str, Any]]:
    out_dir = resolve_out_dir(out_dir, f"{cfg.name}-sweep")
    rows = []
    for i, point in enumerate(grid_points(grid)):
        point_cfg = apply_overrides(cfg, **point)
        logger.info(f"Sweep point {i}: {point}")
        result = run_experiment(point_cfg, out_dir=os.path.join(out_dir, f'point_{i:03d}'),
                                data_dir=data_dir, reporter=reporter)
        rows.append({'point': i, 'params': point, **summarize_point(result.runs)})

    with open(os.path.join(out_dir, 'sweep.csv'), 'w', encoding='utf-8', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=SWEEP_FIELDS, extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({**row, 'params': json.dumps(row['params'], sort_keys=True)})
    with open(os.path.join(out_dir, 'sweep.json'), 'w', encoding='utf-8') as f:
        json.dump({'version': VERSION, 'config': cfg.model_dump(mode='json'), 'grid': grid, 'points': rows},
                  f, indent=2)
    logger.info(f"Sweep over {len(rows)} point(s) written to {out_dir}")
    return rows
