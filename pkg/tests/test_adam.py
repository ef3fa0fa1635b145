"""Adam optimizer tests."""
import numpy as np
import pytest

from fdsic.cxnn import AdamState, Parameter, Role, adam_step, backward
from fdsic.cxnn import mse_loss
from fdsic.errors import ShapeError


def test_zero_gradient_keeps_parameters():
    """A zero gradient on a fresh state changes nothing."""
    param = Parameter("w", [1.0 + 2.0j, -0.5j])
    before = param.data.copy()
    adam_step([param], {"w": np.zeros(2, dtype=complex)}, AdamState())
    assert np.array_equal(param.data, before)


def test_first_step_magnitude():
    """The first bias-corrected step moves every component by about lr."""
    param = Parameter("w", np.zeros(3))
    grad = np.array([2.0 - 0.1j, -1e-3 + 5.0j, 0.7 + 0.7j])
    adam_step([param], {"w": grad}, AdamState(lr=0.01))
    components = param.data.view(np.float64)
    np.testing.assert_allclose(np.abs(components), 0.01, rtol=1e-4)
    assert np.all(np.sign(components) == -np.sign(grad.view(np.float64)))


def test_scalar_convergence():
    """Minimizing |w - c|^2 from 0 reaches c = 1 + 1j within 2000 steps."""
    target = np.array([1.0 + 1.0j])
    param = Parameter("w", np.zeros(1))
    state = AdamState(lr=0.01)
    for _ in range(2000):
        loss = mse_loss(param - target)
        adam_step([param], backward(loss, [param]), state)
        if abs(param.data[0] - target[0]) < 1e-6:
            break
    assert abs(param.data[0] - target[0]) < 1e-6
    assert state.step <= 2000


def test_frozen_roles():
    """Frozen parameters are bitwise unchanged."""
    shared = Parameter("shared", [1.0 + 1.0j], Role.SHARED)
    adaptive = Parameter("adaptive", [1.0 + 1.0j], Role.ADAPTIVE)
    before = shared.data.copy()
    grads = {"shared": np.array([1.0 + 0j]), "adaptive": np.array([1.0j])}
    state = adam_step([shared, adaptive], grads, AdamState(),
                      frozen=frozenset({Role.SHARED}))
    assert np.array_equal(shared.data, before)
    assert adaptive.data[0] != before[0]
    assert "shared" not in state.first


def test_gradient_shape_checked():
    """Gradients must match their parameter's shape."""
    param = Parameter("w", np.zeros(2))
    with pytest.raises(ShapeError):
        adam_step([param], {"w": np.zeros(3)}, AdamState())


def test_invalid_hyperparameters():
    """Learning rate and betas are checked."""
    with pytest.raises(ValueError):
        AdamState(lr=0.0)
    with pytest.raises(ValueError):
        AdamState(beta1=1.0)
