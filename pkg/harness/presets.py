"""
Named experiment settings. The MNIST presets are the scaled-down desk runs;
the full-scale settings are noted next to them.
"""

from typing import Callable, Dict, List

from .settings import ConfigError, ExperimentConfig


def xor_preset() -> ExperimentConfig:
    # value 1 fires at 0 ms, value 0 at 6 ms, plus a bias neuron at 0 ms
    return ExperimentConfig(
        name='xor', dataset='xor', encoder='latency',
        latency={'mode': 'value_map', 'value_latencies': {'0': 6.0, '1': 0.0}, 'bias': True},
        hidden=[5], n_outputs=2,
        nu=2.0, eta0=0.5, lambda0=0.0, w_min=-30.0, w_max=30.0,
        init_ranges=[(0.0, 16.0), (0.0, 6.4)],
        batch_size=4, epochs=500, split='none', runs=20,
    )


def iris_preset() -> ExperimentConfig:
    return ExperimentConfig(
        name='iris', dataset='iris', encoder='receptive_field', rf_q=12,
        hidden=[20], n_outputs=3,
        nu=2.0, eta0=0.1, lambda0=1e-3, w_min=-15.0, w_max=15.0,
        init_ranges=[(0.0, 4.0), (0.0, 2.0)],
        batch_size=150, epochs=100, split='kfold', k=3,
        early_stopping=True, runs=10,
    )


def iris_sweep_preset() -> ExperimentConfig:
    """Learning-rate sweep setting: mini-batches of 100 for 150 epochs, curves kept whole."""
    return iris_preset().model_copy(update={
        'name': 'iris-sweep', 'batch_size': 100, 'epochs': 150,
        'early_stopping': False, 'early_stop_rule': 'within_1pct',
    })


def wisconsin_preset() -> ExperimentConfig:
    return ExperimentConfig(
        name='wisconsin', dataset='wisconsin', encoder='receptive_field', rf_q=7,
        hidden=[20], n_outputs=2,
        nu=2.0, eta0=0.1, lambda0=1e-3, w_min=-15.0, w_max=15.0,
        init_ranges=[(0.0, 2.2), (0.0, 2.0)],
        batch_size=150, epochs=100, split='kfold', k=3,
        early_stopping=True, runs=10,
    )


def mnist_latency_preset(n_hidden: int = 40) -> ExperimentConfig:
    # full scale: n_hidden=160, iterations=4000, no train_subset
    return ExperimentConfig(
        name='mnist-latency', dataset='mnist', encoder='latency',
        latency={'mode': 'normalized', 'i_max': 20.0, 'value_range': (0.0, 255.0)},
        hidden=[n_hidden], n_outputs=10,
        nu=4.0, eta0=0.01, lambda0=1e-4, w_min=-2.0, w_max=2.0,
        init_ranges=[(0.0, 0.4), (0.0, 32.0 / n_hidden)],
        batch_size=150, iterations=1500, split='holdout', validation_size=600,
        train_subset=10000, eval_unit='iteration', eval_every=20, runs=1,
    )


def mnist_scanline_preset(n_scanlines: int = 32, n_hidden: int = 40) -> ExperimentConfig:
    # full scale: 64 scanlines, 1600 iterations, no train_subset
    return ExperimentConfig(
        name='mnist-scanline', dataset='mnist', encoder='scanline', n_scanlines=n_scanlines,
        hidden=[n_hidden], n_outputs=10, delays=True,
        nu=4.0, eta0=0.05, lambda0=1e-4, w_min=-6.0, w_max=6.0,
        init_ranges=[(0.0, 40.0 / n_scanlines), (0.0, 32.0 / n_hidden)],
        batch_size=150, iterations=800, split='holdout', validation_size=600,
        train_subset=10000, eval_unit='iteration', eval_every=20, runs=1,
    )


PRESETS: Dict[str, Callable[[], ExperimentConfig]] = {
    'xor': xor_preset,
    'iris': iris_preset,
    'iris-sweep': iris_sweep_preset,
    'wisconsin': wisconsin_preset,
    'mnist-latency': mnist_latency_preset,
    'mnist-scanline': mnist_scanline_preset,
}


def preset_names() -> List[str]:
    return list(PRESETS)


def get_preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise ConfigError(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}")
    return PRESETS[name]()
