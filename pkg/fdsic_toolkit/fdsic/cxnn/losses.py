"""Losses on complex residuals."""
import math
import numpy as np

from fdsic import config
from fdsic.cxnn.tensor import CxArray, as_node
from fdsic.errors import DegenerateInputError


def mse_loss(residual):
    """Mean of |r|^2 over all elements, recorded for backward().

    Returns:
        0-d CxArray holding the real loss
    """
    residual = as_node(residual)
    count = residual.data.size

    def backward_fn(grad):
        return (grad.real * 2.0 * residual.data / count,)

    value = np.mean(np.abs(residual.data) ** 2)
    return CxArray(value, parents=(residual,), backward_fn=backward_fn)


def _values(array):
    return np.asarray(getattr(array, "data", array))


def mse_db(residual, reference):
    """Return 10 log10(sum |r|^2 / sum |y|^2), floored at MSE_DB_FLOOR.

    Args:
        residual: CxArray or complex array r
        reference: CxArray or complex array y the residual is measured on
    """
    error = np.sum(np.abs(_values(residual)) ** 2)
    power = np.sum(np.abs(_values(reference)) ** 2)
    if power == 0.0:
        raise DegenerateInputError("reference signal is all zeros")
    if error == 0.0:
        return config.MSE_DB_FLOOR
    return max(10.0 * math.log10(error / power), config.MSE_DB_FLOOR)
