from .topology import (
    INPUT, STOCHASTIC, DETERMINISTIC, LayerSpec, NetworkParams, SpikeRecord, SpikeTrain,
    build_layers, validate_layers, init_weights, first_spike_times
)
from .simulate import DEFAULT_T, DEFAULT_DT, time_grid, psp_traces, input_drive, simulate
from .checkpoint import (
    CheckpointError, params_to_dict, params_from_dict, save_checkpoint, load_checkpoint,
    load_checkpoint_extra
)
