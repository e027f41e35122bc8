from .objective import (
    LOSS_FLOOR, ActivationVector, TargetLabel, softmax_activation, one_hot, cross_entropy,
    output_error_signals, predict
)
from .gradients import (
    SampleGradientContext, SpikeCredits, output_credits, propagate_credits, correlate,
    weight_gradients, output_weight_gradient, hidden_weight_gradient, deep_hidden_weight_gradient
)
from .plasticity import (
    OptimizerHyper, GradientState, regularization_term, synaptic_scaling_term,
    sample_weight_change, add_changes, accumulate_sample, rmsprop_apply
)
