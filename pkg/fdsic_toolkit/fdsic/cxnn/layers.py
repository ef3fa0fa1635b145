"""
Layer primitives of the complex-valued Hammerstein networks.

Activations are laid out [signals, time, channels] going into the MLP and
[channels, time, signals] going into the depthwise convolutions.  No layer
has a bias.
"""
import numpy as np

from fdsic.cxnn.tensor import CxArray, as_node
from fdsic.errors import ShapeError

TIME = 1


def dense(x, weights):
    """Multiply the last axis of x by a weight matrix, per time step.

    Args:
        x: CxArray [..., in_units]
        weights: Parameter [in_units, out_units]

    Returns:
        CxArray [..., out_units] with the labels of x
    """
    x = as_node(x)
    if weights.ndim != 2 or x.shape[-1] != weights.shape[0]:
        raise ShapeError(
            f"dense: input {x.shape} does not match weights {weights.shape}"
        )

    def backward_fn(grad):
        flat_x = x.data.reshape(-1, x.shape[-1])
        flat_grad = grad.reshape(-1, grad.shape[-1])
        return (grad @ weights.data.conj().T,
                flat_x.conj().T @ flat_grad)

    return CxArray(x.data @ weights.data, x.axes, (x, weights), backward_fn)


def split_tanh(x):
    """Apply tanh to the real and imaginary parts separately."""
    x = as_node(x)
    real, imag = np.tanh(x.data.real), np.tanh(x.data.imag)

    def backward_fn(grad):
        return (grad.real * (1.0 - real ** 2)
                + 1j * grad.imag * (1.0 - imag ** 2),)

    return CxArray(real + 1j * imag, x.axes, (x,), backward_fn)


def mag_phase_split(x):
    """Split x into its magnitude and unit phase.

    The magnitude is recorded for back-propagation; the phase is returned
    as a constant, so gradients flow only through the magnitude path.

    Returns:
        (mag, phase_unit); phase_unit is 1 where x is 0
    """
    x = as_node(x)
    magnitude = np.abs(x.data)
    nonzero = magnitude > 0.0
    phase = np.ones_like(x.data)
    np.divide(x.data, magnitude, out=phase, where=nonzero)

    def backward_fn(grad):
        return (np.where(nonzero, grad.real * phase, 0.0),)

    mag = CxArray(magnitude, x.axes, (x,), backward_fn)
    return mag, CxArray(phase, x.axes)


def recombine(y, phase_unit):
    """Multiply y by a constant unit phase, broadcasting over channels."""
    y, phase_unit = as_node(y), as_node(phase_unit)
    try:
        shape = np.broadcast_shapes(y.shape, phase_unit.shape)
    except ValueError as err:
        raise ShapeError(f"recombine: {err}") from err
    if shape != y.shape:
        raise ShapeError(
            f"recombine: phase {phase_unit.shape} would grow {y.shape}"
        )
    phase = phase_unit.data

    def backward_fn(grad):
        return (grad * phase.conj(),)

    return CxArray(y.data * phase, y.axes, (y,), backward_fn)


def transpose_signals(x):
    """Swap the signals and channels axes, labels included."""
    x = as_node(x)
    return x.swapaxes(x.axis("signals"), x.axis("channels"))


def _delay(values, lag, axis=TIME):
    """Delay values by lag samples along axis, zero-filling the front."""
    if lag == 0:
        return values
    out = np.zeros_like(values)
    target = [slice(None)] * values.ndim
    source = [slice(None)] * values.ndim
    target[axis] = slice(lag, None)
    source[axis] = slice(None, values.shape[axis] - lag)
    out[tuple(target)] = values[tuple(source)]
    return out


def _advance(values, lag, axis=TIME):
    """Advance values by lag samples along axis, zero-filling the end."""
    if lag == 0:
        return values
    out = np.zeros_like(values)
    target = [slice(None)] * values.ndim
    source = [slice(None)] * values.ndim
    target[axis] = slice(None, values.shape[axis] - lag)
    source[axis] = slice(lag, None)
    out[tuple(target)] = values[tuple(source)]
    return out


def _check_kernel_length(length, x):
    if not 1 <= length <= x.shape[TIME]:
        raise ShapeError(
            f"kernel length {length} exceeds {x.shape[TIME]} time steps"
        )


def conv1d_causal(x, kernel):
    """Convolve every signal with one shared causal kernel.

    out[s, k] = sum_l kernel[l] x[s, k - l], with zero history.

    Args:
        x: CxArray [signals, time, 1]
        kernel: Parameter [L]

    Returns:
        CxArray [signals, time, 1]
    """
    x = as_node(x)
    if x.ndim != 3 or x.shape[2] != 1 or kernel.ndim != 1:
        raise ShapeError(
            f"conv1d_causal: input {x.shape}, kernel {kernel.shape}"
        )
    _check_kernel_length(kernel.shape[0], x)
    taps = kernel.data

    out = np.zeros_like(x.data)
    for lag, tap in enumerate(taps):
        out += tap * _delay(x.data, lag)

    def backward_fn(grad):
        grad_x = np.zeros_like(grad)
        grad_kernel = np.empty_like(taps)
        for lag, tap in enumerate(taps):
            grad_x += tap.conjugate() * _advance(grad, lag)
            grad_kernel[lag] = np.vdot(_delay(x.data, lag), grad)
        return grad_x, grad_kernel

    return CxArray(out, x.axes, (x, kernel), backward_fn)


def _multi_forward(values, kernels):
    """Sum delayed branches into out[k, s]."""
    out = np.zeros(values.shape[1:], dtype=np.complex128)
    for lag in range(kernels.shape[2]):
        out += np.einsum("pks,sp->ks", _delay(values, lag),
                         kernels[:, :, lag])
    return out[np.newaxis]


def _multi_backward(values, kernels, grad):
    grad = grad[0]
    grad_values = np.zeros_like(values)
    grad_kernels = np.empty_like(kernels)
    for lag in range(kernels.shape[2]):
        grad_values += np.einsum(
            "sp,ks->pks", kernels[:, :, lag].conj(), _advance(grad, lag, 0)
        )
        grad_kernels[:, :, lag] = np.einsum(
            "pks,ks->sp", _delay(values, lag).conj(), grad
        )
    return grad_values, grad_kernels


def depthwise_conv(x, kernels):
    """Convolve every signal with its own causal kernel.

    Args:
        x: CxArray [1, time, signals]
        kernels: Parameter [signals, L]

    Returns:
        CxArray [1, time, signals]
    """
    x = as_node(x)
    layout = (x.ndim, x.shape[0], kernels.ndim)
    if layout != (3, 1, 2) or kernels.shape[0] != x.shape[2]:
        raise ShapeError(
            f"depthwise_conv: input {x.shape}, kernels {kernels.shape}"
        )
    _check_kernel_length(kernels.shape[1], x)
    stacked = kernels.data[:, np.newaxis, :]

    def backward_fn(grad):
        grad_x, grad_kernels = _multi_backward(x.data, stacked, grad)
        return grad_x, grad_kernels[:, 0, :]

    return CxArray(_multi_forward(x.data, stacked), x.axes, (x, kernels),
                   backward_fn)


def depthwise_conv_multi(x, kernels):
    """Convolve every signal over all P channels and sum the channels.

    Args:
        x: CxArray [P, time, signals]
        kernels: Parameter [signals, P, L]

    Returns:
        CxArray [1, time, signals]
    """
    x = as_node(x)
    if (x.ndim, kernels.ndim) != (3, 3) \
            or kernels.shape[:2] != (x.shape[2], x.shape[0]):
        raise ShapeError(
            f"depthwise_conv_multi: input {x.shape}, kernels {kernels.shape}"
        )
    _check_kernel_length(kernels.shape[2], x)

    def backward_fn(grad):
        return _multi_backward(x.data, kernels.data, grad)

    return CxArray(_multi_forward(x.data, kernels.data), x.axes,
                   (x, kernels), backward_fn)
