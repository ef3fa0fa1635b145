"""
Complex-valued network engine.

Complex arrays with recorded operations, the layer primitives of the
Hammerstein networks, losses, reverse-mode gradients and Adam.
"""
from .layers import (
    conv1d_causal,
    dense,
    depthwise_conv,
    depthwise_conv_multi,
    mag_phase_split,
    recombine,
    split_tanh,
    transpose_signals,
)
from .losses import mse_db, mse_loss
from .optim import AdamState, adam_step
from .tensor import AXES, CxArray, Parameter, Role, backward

__all__ = [
    "conv1d_causal", "dense", "depthwise_conv", "depthwise_conv_multi",
    "mag_phase_split", "recombine", "split_tanh", "transpose_signals",
    "mse_db", "mse_loss", "AdamState", "adam_step",
    "AXES", "CxArray", "Parameter", "Role", "backward",
]
