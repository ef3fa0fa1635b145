"""Slow loop implementations used as test oracles."""
import numpy as np


def brute_force_conv(signal, kernel):
    """Causal convolution with zero history, one output per input sample."""
    signal = np.asarray(signal, dtype=np.complex128)
    out = np.zeros_like(signal)
    for k in range(signal.size):
        for lag, tap in enumerate(kernel):
            if k - lag >= 0:
                out[k] += tap * signal[k - lag]
    return out


def brute_force_depthwise(x, kernels):
    """Filter column s of a [time, signals] array with kernels[s]."""
    x = np.asarray(x)
    return np.stack([brute_force_conv(x[:, s], kernels[s])
                     for s in range(x.shape[1])], axis=1)


def brute_force_depthwise_multi(x, kernels):
    """Sum over p of brute_force_depthwise(x[p], kernels[:, p])."""
    x = np.asarray(x)
    out = np.zeros(x.shape[1:], dtype=np.complex128)
    for p in range(x.shape[0]):
        out += brute_force_depthwise(x[p], kernels[:, p, :])
    return out


def reference_hammerstein(inputs, weights, kernels):
    """Evaluate a global network by hand on [signals, time] inputs.

    Args:
        weights: (w1, w2, w3) MLP matrices
        kernels: [signals, L] FIR per signal
    """
    w1, w2, w3 = weights
    outputs = []
    for signal, kernel in zip(np.asarray(inputs), kernels):
        magnitude = np.abs(signal)[:, np.newaxis].astype(np.complex128)
        phase = np.ones_like(signal)
        nonzero = magnitude[:, 0].real > 0
        phase[nonzero] = signal[nonzero] / np.abs(signal[nonzero])
        hidden = magnitude
        for matrix in (w1, w2):
            hidden = hidden @ matrix
            hidden = np.tanh(hidden.real) + 1j * np.tanh(hidden.imag)
        nonlinear = (hidden @ w3)[:, 0] * phase
        outputs.append(brute_force_conv(nonlinear, kernel))
    return np.stack(outputs)
