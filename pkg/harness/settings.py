"""Experiment configuration: every hyperparameter of a run, validated and serialisable."""

import json
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from config import WORKERS


class ConfigError(ValueError):
    pass


class LatencySettings(BaseModel):
    model_config = ConfigDict(extra='forbid')

    resistance: float = 4.0
    i_max: float = 20.0
    cutoff: float = 9.0
    mode: Literal['normalized', 'value_map'] = 'normalized'
    value_range: Optional[Tuple[float, float]] = None
    # feature value -> desired spike latency in ms (value_map mode)
    value_latencies: Dict[str, float] = {}
    bias: bool = False

    @field_validator('value_latencies')
    @classmethod
    def validate_latencies(cls, v):
        for key, latency in v.items():
            float(key)
            if latency < 0:
                raise ValueError(f'Latency for value {key} must be non-negative')
        return v


class NeuronSettings(BaseModel):
    model_config = ConfigDict(extra='forbid')

    eps0: float = 4.0
    tau_m: float = 10.0
    tau_s: float = 5.0
    theta: float = 15.0
    u_r: float = 0.0
    rho0: float = 0.01
    delta_u: float = 1.0


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra='forbid')

    name: str = 'experiment'
    dataset: Literal['xor', 'iris', 'wisconsin', 'mnist']
    encoder: Literal['latency', 'receptive_field', 'scanline']
    latency: LatencySettings = LatencySettings()
    rf_q: int = 12
    n_scanlines: int = 32
    # directory written by the encode command; its spike trains replace fresh encoding
    encoded_dir: Optional[str] = None

    hidden: List[int]
    hidden_kind: Literal['stochastic', 'deterministic'] = 'stochastic'
    n_outputs: int
    delays: bool = False
    neuron: NeuronSettings = NeuronSettings()

    nu: float
    eta0: float
    lambda0: float = 0.0
    gamma0: float = 0.1
    beta: float = 0.9
    epsilon: float = 1e-8
    w_min: float
    w_max: float
    init_ranges: List[Tuple[float, float]]

    batch_size: int = 150
    epochs: Optional[int] = None
    iterations: Optional[int] = None
    T: float = 40.0
    dt: float = 0.1

    split: Literal['none', 'kfold', 'holdout'] = 'none'
    k: int = 3
    validation_size: int = 600
    train_subset: Optional[int] = None
    test_subset: Optional[int] = None

    eval_unit: Literal['epoch', 'iteration'] = 'epoch'
    eval_every: int = 1
    early_stopping: bool = False
    early_stop_rule: Literal['min', 'within_1pct'] = 'min'

    seed: int = 0
    runs: int = 1
    workers: int = WORKERS

    @field_validator('hidden')
    @classmethod
    def validate_hidden(cls, v):
        if not v or any(n < 1 for n in v):
            raise ValueError('hidden must list at least one positive layer size')
        return v

    @field_validator('nu', 'eta0', 'T', 'dt')
    @classmethod
    def validate_positive(cls, v):
        if v <= 0:
            raise ValueError('must be positive')
        return v

    @field_validator('lambda0', 'gamma0')
    @classmethod
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError('must be non-negative')
        return v

    @field_validator('batch_size', 'runs', 'eval_every', 'workers', 'n_outputs', 'n_scanlines')
    @classmethod
    def validate_count(cls, v):
        if v < 1:
            raise ValueError('must be at least 1')
        return v

    @field_validator('seed')
    @classmethod
    def validate_seed(cls, v):
        if v < 0:
            raise ValueError('seed must be non-negative')
        return v

    @model_validator(mode='after')
    def validate_consistency(self):
        if (self.epochs is None) == (self.iterations is None):
            raise ValueError('exactly one of epochs and iterations must be set')
        if len(self.init_ranges) != len(self.hidden) + 1:
            raise ValueError(f'init_ranges needs {len(self.hidden) + 1} entries, one per weight matrix')
        if any(lo > hi for lo, hi in self.init_ranges):
            raise ValueError('every init range needs lo <= hi')
        if self.w_min >= self.w_max:
            raise ValueError('w_min must be below w_max')
        if self.encoder == 'scanline' and self.dataset != 'mnist':
            raise ValueError('scanline encoding needs an image dataset')
        if self.split == 'kfold' and self.k < 2:
            raise ValueError('k-fold splitting needs k >= 2')
        if self.rf_q < 3:
            raise ValueError('rf_q must be at least 3')
        return self


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path} is not valid JSON: {e}") from e
    return parse_config(data)


def parse_config(data: Dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config: {e}") from e


def apply_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Re-validate with the non-None overrides applied."""
    updates = {k: v for k, v in overrides.items() if v is not None}
    if not updates:
        return cfg
    return parse_config({**cfg.model_dump(), **updates})
