"""Adam on the real-pair view of complex parameters."""
from dataclasses import dataclass, field
import numpy as np

from fdsic import config
from fdsic.errors import ShapeError


@dataclass
class AdamState:
    """Moment accumulators and step counter of one optimizer run.

    Accumulators are keyed by parameter name and hold float64 arrays over
    the interleaved real and imaginary components.
    """

    lr: float = config.LEARNING_RATE
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    first: dict = field(default_factory=dict)
    second: dict = field(default_factory=dict)

    def __post_init__(self):
        """Check the hyper-parameters."""
        if self.lr <= 0.0:
            raise ValueError(f"learning rate must be > 0, got {self.lr}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("betas must lie in [0, 1)")


def _real_pair(values):
    return values.view(np.float64)


def adam_step(params, grads, state, frozen=frozenset()):
    """Apply one Adam update in place.

    Args:
        params: iterable of Parameters
        grads: dict from parameter name to packed complex gradient
        state: AdamState, updated in place
        frozen: roles whose parameters are left untouched

    Returns:
        the updated state
    """
    state.step += 1
    first_fix = 1.0 - state.beta1 ** state.step
    second_fix = 1.0 - state.beta2 ** state.step
    for param in params:
        if param.role in frozen:
            continue
        grad = np.ascontiguousarray(grads[param.name], dtype=np.complex128)
        if grad.shape != param.shape:
            raise ShapeError(
                f"gradient {grad.shape} for {param.name} {param.shape}"
            )
        grad = _real_pair(grad)
        first = state.first.setdefault(param.name, np.zeros_like(grad))
        second = state.second.setdefault(param.name, np.zeros_like(grad))
        first *= state.beta1
        first += (1.0 - state.beta1) * grad
        second *= state.beta2
        second += (1.0 - state.beta2) * grad ** 2
        update = state.lr * (first / first_fix) \
            / (np.sqrt(second / second_fix) + state.eps)
        weights = _real_pair(param.data)
        weights -= update
    return state
