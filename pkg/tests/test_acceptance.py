"""
Full-scale and scaled-down reference experiments. These take minutes to hours
and are deselected by default; run them with `pytest -m slow`. The Iris,
Wisconsin and MNIST runs need the dataset files under SNN_DATA_DIR.
"""

import os

import numpy as np
import pytest

from config import DATA_DIR, IRIS_FILE, MNIST_FILES, WISCONSIN_FILE, get_dataset_path
from harness import apply_overrides, get_preset, run_experiment

pytestmark = pytest.mark.slow


def _require(*files):
    missing = [f for f in files if not os.path.exists(get_dataset_path(f, DATA_DIR))]
    if missing:
        pytest.skip(f"dataset files not found under {DATA_DIR}: {', '.join(missing)}")


def _aggregate(cfg):
    return run_experiment(cfg, write_files=False).summary['aggregate']


def test_xor_reaches_low_training_loss():
    agg = _aggregate(get_preset('xor'))
    assert agg['final_monitor_loss']['n'] >= 20
    assert agg['final_monitor_loss']['mean'] <= 0.05
    assert agg['accuracy']['mean'] >= 0.99


def test_iris_cross_validation():
    _require(IRIS_FILE)
    agg = _aggregate(get_preset('iris'))
    assert agg['accuracy']['mean'] >= 0.93
    assert 10 <= agg['stop_epoch']['mean'] <= 60


def test_wisconsin_cross_validation():
    _require(WISCONSIN_FILE)
    agg = _aggregate(get_preset('wisconsin'))
    assert agg['accuracy']['mean'] >= 0.95


def test_mnist_latency_scaled_down():
    _require(*MNIST_FILES.values())
    agg = _aggregate(get_preset('mnist-latency'))
    assert agg['accuracy']['mean'] >= 0.80


def test_mnist_scanline_scaled_down():
    _require(*MNIST_FILES.values())
    agg = _aggregate(get_preset('mnist-scanline'))
    assert agg['accuracy']['mean'] >= 0.70


def test_mnist_scanline_delays_help():
    """Delayed input projections beat delayless ones on average over five seeds"""
    _require(*MNIST_FILES.values())
    delayed, delayless = [], []
    for seed in range(5):
        cfg = apply_overrides(get_preset('mnist-scanline'), seed=seed)
        delayed.append(_aggregate(cfg)['accuracy']['mean'])
        delayless.append(_aggregate(apply_overrides(cfg, delays=False))['accuracy']['mean'])
    assert np.mean(delayed) >= np.mean(delayless)
