"""Dataset loading, encoder construction and per-run data splits for an experiment."""

import math
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import DATA_DIR, IRIS_FILE, MNIST_FILES, RESULTS_DIR, WISCONSIN_FILE, get_dataset_path
from data import (
    HOLDOUT, KFOLD, Dataset, IRIS_SCHEMA, SplitPlan, WISCONSIN_SCHEMA, load_csv, load_idx, stratified_split,
    subset_indices, xor_dataset
)
from encoders import (
    EncodedSample, EncodingFileError, LatencyEncoderConfig, ReceptiveFieldConfig, ScanlineSet,
    fit_receptive_fields, latency_encode, load_encoded, receptive_field_encode, scanline_encode,
    scanline_generate, value_map_from_latencies
)
from logger import logger
from srm.kernels import EscapeNoiseParams, KernelParams
from .settings import ConfigError, ExperimentConfig

# independent random streams of one (seed, run, fold)
STREAM_SPLIT = 0
STREAM_INIT = 1
STREAM_TRAIN = 2
STREAM_EVAL = 3
STREAM_ENCODER = 4
STREAM_BATCHES = 5

PIXEL_MAX = 255.0

ENCODED_TRAIN_FILE = 'encoded_train.json'
ENCODED_TEST_FILE = 'encoded_test.json'


def kernel_params(cfg: ExperimentConfig) -> KernelParams:
    n = cfg.neuron
    return KernelParams(eps0=n.eps0, tau_m=n.tau_m, tau_s=n.tau_s, theta=n.theta, u_r=n.u_r)


def noise_params(cfg: ExperimentConfig) -> EscapeNoiseParams:
    return EscapeNoiseParams(rho0=cfg.neuron.rho0, delta_u=cfg.neuron.delta_u)


def load_datasets(cfg: ExperimentConfig, data_dir: Optional[str] = None) -> Tuple[Dataset, Optional[Dataset]]:
    """(main, test) datasets; test is only separate for MNIST."""
    base = data_dir or DATA_DIR
    if cfg.dataset == 'xor':
        main, test = xor_dataset(), None
    elif cfg.dataset == 'iris':
        main, test = load_csv(get_dataset_path(IRIS_FILE, base), IRIS_SCHEMA), None
    elif cfg.dataset == 'wisconsin':
        main, test = load_csv(get_dataset_path(WISCONSIN_FILE, base), WISCONSIN_SCHEMA), None
    else:
        main = load_idx(get_dataset_path(MNIST_FILES['train_images'], base),
                        get_dataset_path(MNIST_FILES['train_labels'], base))
        test = load_idx(get_dataset_path(MNIST_FILES['test_images'], base),
                        get_dataset_path(MNIST_FILES['test_labels'], base))

    if main.n_classes != cfg.n_outputs:
        raise ConfigError(f"Output layer has {cfg.n_outputs} neurons but {cfg.dataset} has {main.n_classes} classes")
    return main, test


class SampleEncoder:
    """Feature rows to input spike trains, fitted once per run/fold on training data."""

    def __init__(self, cfg: ExperimentConfig, kind: str, n_features: int,
                 latency: Optional[LatencyEncoderConfig] = None, fields: Optional[ReceptiveFieldConfig] = None,
                 lines: Optional[ScanlineSet] = None):
        self.cfg = cfg
        self.kind = kind
        self.n_features = n_features
        self.latency = latency
        self.fields = fields
        self.lines = lines

    @classmethod
    def fit(cls, cfg: ExperimentConfig, train: Dataset, rng: np.random.Generator) -> "SampleEncoder":
        if cfg.encoder == 'latency':
            return cls(cfg, 'latency', train.n_features, latency=_latency_config(cfg))
        if cfg.encoder == 'receptive_field':
            return cls(cfg, 'receptive_field', train.n_features,
                       fields=fit_receptive_fields(train.features, cfg.rf_q))
        if train.image_shape is None:
            raise ConfigError("Scanline encoding needs image samples")
        height, width = train.image_shape
        return cls(cfg, 'scanline', train.n_features,
                   lines=scanline_generate(cfg.n_scanlines, width, height, rng))

    @property
    def n_inputs(self) -> int:
        if self.kind == 'latency':
            return self.n_features + (1 if self.latency.bias else 0)
        if self.kind == 'receptive_field':
            return self.fields.n_inputs
        return self.lines.n_lines

    def encode(self, features: np.ndarray) -> List[List[float]]:
        if self.kind == 'latency':
            return latency_encode(features, self.latency)
        if self.kind == 'receptive_field':
            return receptive_field_encode(features, self.fields)
        shape = (self.lines.height, self.lines.width)
        image = np.asarray(features, dtype=float).reshape(shape) / PIXEL_MAX
        return scanline_encode(image, self.lines, self.cfg.dt)

    def encode_dataset(self, ds: Dataset) -> List[EncodedSample]:
        return [EncodedSample(spikes=self.encode(ds.features[i]), label=int(ds.labels[i])) for i in range(len(ds))]

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {'kind': self.kind, 'n_features': self.n_features}
        if self.fields is not None:
            out['fields'] = {'q': self.fields.q, 'x_min': self.fields.x_min.tolist(),
                             'x_max': self.fields.x_max.tolist()}
        if self.lines is not None:
            out['scanlines'] = self.lines.to_dict()
        return out

    @classmethod
    def from_dict(cls, cfg: ExperimentConfig, data: Dict[str, Any]) -> "SampleEncoder":
        kind, n_features = data['kind'], int(data['n_features'])
        if kind == 'latency':
            return cls(cfg, kind, n_features, latency=_latency_config(cfg))
        if kind == 'receptive_field':
            f = data['fields']
            return cls(cfg, kind, n_features,
                       fields=ReceptiveFieldConfig(q=int(f['q']), x_min=f['x_min'], x_max=f['x_max']))
        return cls(cfg, kind, n_features, lines=ScanlineSet.from_dict(data['scanlines']))


def _latency_config(cfg: ExperimentConfig) -> LatencyEncoderConfig:
    s = cfg.latency
    kernel = kernel_params(cfg)
    value_map = {}
    if s.mode == 'value_map':
        value_map = value_map_from_latencies({float(k): v for k, v in s.value_latencies.items()},
                                             s.resistance, kernel)
    return LatencyEncoderConfig(
        resistance=s.resistance, i_max=s.i_max, cutoff=s.cutoff, mode=s.mode,
        value_range=tuple(s.value_range) if s.value_range is not None else None,
        value_map=value_map, bias=s.bias, kernel=kernel,
    )


@dataclass
class FoldData:
    """Encoded samples of one (run, fold): training set, the split that is monitored, and the test split."""

    fold: int
    encoder: SampleEncoder
    train: List[EncodedSample]
    monitor: List[EncodedSample]
    monitor_name: str
    test: Optional[List[EncodedSample]] = None


@dataclass
class EncodedCache:
    """Spike trains written by `encode`, in the sample order of the datasets they came from."""

    encoder: SampleEncoder
    main: List[EncodedSample]
    test: Optional[List[EncodedSample]] = None


def _read_cached(path: str, ds: Dataset, cfg: ExperimentConfig) -> Tuple[List[EncodedSample], Dict[str, Any]]:
    if not os.path.exists(path):
        raise ConfigError(f"Encoded samples {path} not found; run the encode command first")
    try:
        samples, header = load_encoded(path)
    except EncodingFileError as e:
        raise ConfigError(str(e)) from e
    if len(samples) != len(ds):
        raise ConfigError(f"{path} holds {len(samples)} samples but {ds.provenance} has {len(ds)}")
    if not np.array_equal([s.label for s in samples], ds.labels):
        raise ConfigError(f"Labels in {path} do not match {ds.provenance}")
    if not math.isclose(header['dt'], cfg.dt):
        raise ConfigError(f"{path} was encoded with dt={header['dt']} ms, the config uses dt={cfg.dt} ms")
    return samples, header


def load_encoded_cache(cfg: ExperimentConfig, main: Dataset, test: Optional[Dataset]) -> EncodedCache:
    """
    Every run and fold then shares the one encoding, including an encoder
    fitted on the whole main dataset.
    """
    samples, header = _read_cached(os.path.join(cfg.encoded_dir, ENCODED_TRAIN_FILE), main, cfg)
    encoder_doc = header['meta'].get('encoder')
    if not encoder_doc:
        raise ConfigError(f"{cfg.encoded_dir} does not describe the encoder that produced it")
    encoder = SampleEncoder.from_dict(cfg, encoder_doc)
    if encoder.kind != cfg.encoder or encoder.n_inputs != header['n_inputs']:
        raise ConfigError(f"{cfg.encoded_dir} holds a {encoder.kind} encoding with {header['n_inputs']} inputs, "
                          f"the config asks for {cfg.encoder}")

    test_samples = None
    if test is not None:
        test_samples, _ = _read_cached(os.path.join(cfg.encoded_dir, ENCODED_TEST_FILE), test, cfg)
    logger.info(f"Using cached {encoder.kind} encoding from {cfg.encoded_dir} ({len(samples)} samples)")
    return EncodedCache(encoder=encoder, main=samples, test=test_samples)


def _fold_data(cfg: ExperimentConfig, fold: int, run: int, main: Dataset, train_idx: np.ndarray,
               monitor_idx: np.ndarray, monitor_name: str, test: Optional[Dataset],
               test_idx: Optional[np.ndarray], cache: Optional[EncodedCache]) -> FoldData:
    if cache is not None:
        encoder = cache.encoder
        train = [cache.main[i] for i in train_idx]
        monitor = train if monitor_idx is train_idx else [cache.main[i] for i in monitor_idx]
        test_samples = None if test_idx is None else [cache.test[i] for i in test_idx]
    else:
        train_ds = main.take(train_idx)
        rng = np.random.default_rng((cfg.seed, run, fold, STREAM_ENCODER))
        encoder = SampleEncoder.fit(cfg, train_ds, rng)
        train = encoder.encode_dataset(train_ds)
        monitor = train if monitor_idx is train_idx else encoder.encode_dataset(main.take(monitor_idx))
        test_samples = None if test_idx is None else encoder.encode_dataset(test.take(test_idx))
    logger.info(f"Run {run} fold {fold}: {len(train)} training / {len(monitor)} {monitor_name} samples "
                f"({cfg.encoder}{', cached' if cache else ''}, {encoder.n_inputs} inputs)")
    return FoldData(fold=fold, encoder=encoder, train=train, monitor=monitor, monitor_name=monitor_name,
                    test=test_samples)


def prepare_folds(cfg: ExperimentConfig, main: Dataset, test: Optional[Dataset], run: int,
                  cache: Optional[EncodedCache] = None) -> List[FoldData]:
    """Splits are re-drawn for every run from (seed, run)."""
    rng = np.random.default_rng((cfg.seed, run, 0, STREAM_SPLIT))

    if cfg.split == 'kfold':
        folds = stratified_split(main, SplitPlan(KFOLD, k=cfg.k, seed=cfg.seed), rng)
        everything = np.arange(len(main))
        return [_fold_data(cfg, f, run, main, np.setdiff1d(everything, held_out), held_out, 'validation',
                           None, None, cache)
                for f, held_out in enumerate(folds)]

    if cfg.split == 'holdout':
        plan = SplitPlan(HOLDOUT, validation_size=cfg.validation_size, seed=cfg.seed)
        train_idx, val_idx = stratified_split(main, plan, rng)
        if cfg.train_subset:
            train_idx = train_idx[subset_indices(main.take(train_idx), cfg.train_subset, rng)]
        test_idx = None
        if test is not None:
            test_idx = subset_indices(test, cfg.test_subset, rng) if cfg.test_subset else np.arange(len(test))
        return [_fold_data(cfg, 0, run, main, train_idx, val_idx, 'validation', test, test_idx, cache)]

    # no split: train and monitor on the same samples (XOR)
    train_idx = subset_indices(main, cfg.train_subset, rng) if cfg.train_subset else np.arange(len(main))
    test_idx = None if test is None else np.arange(len(test))
    return [_fold_data(cfg, 0, run, main, train_idx, train_idx, 'train', test, test_idx, cache)]


def layer_sizes(cfg: ExperimentConfig, n_inputs: int) -> List[int]:
    return [n_inputs, *cfg.hidden, cfg.n_outputs]


def resolve_out_dir(out_dir: Optional[str], name: str) -> str:
    path = out_dir or os.path.join(RESULTS_DIR, name)
    os.makedirs(path, exist_ok=True)
    return path
