from .kernels import (
    KernelParams, EscapeNoiseParams, DEFAULT_KERNEL, DEFAULT_NOISE,
    psp_kernel, reset_kernel, escape_rate, spike_probability,
    lif_first_spike_time, lif_current_for_latency
)
from .neuron import (
    NeuronState, membrane_potential, step_deterministic, step_stochastic
)
