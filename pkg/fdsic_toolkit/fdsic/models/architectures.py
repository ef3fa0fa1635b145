"""
The three complex-valued Hammerstein networks.

All three split the input into magnitude and phase, run the magnitude
through a bias-free MLP with split-tanh hidden layers, restore the phase
and finish with a causal convolution.  They differ in how the convolution
is shared across file IDs:

    GLOBAL_H    one kernel for every signal, all weights SHARED
    ADAPTIVE_H  one ADAPTIVE kernel per signal (depthwise)
    PARALLEL_H  the MLP output layer is dropped and every signal gets an
                ADAPTIVE kernel per hidden unit, summed over the units
"""
import logging
import numpy as np

from fdsic import seeding
from fdsic.cxnn import (
    CxArray,
    Parameter,
    Role,
    conv1d_causal,
    dense,
    depthwise_conv,
    depthwise_conv_multi,
    mag_phase_split,
    recombine,
    split_tanh,
    transpose_signals,
)
from fdsic.errors import ShapeError
from fdsic.models.baselines import MemoryPolynomial
from fdsic.models.kinds import ModelKind, ModelSpec

LOGGER = logging.getLogger(__name__)

WEIGHT_STD = 0.1
KERNEL_GAIN = 0.1
KERNEL_NOISE_STD = 0.01


def _weights(rng, shape):
    return seeding.complex_normal(rng, shape, WEIGHT_STD)


def _kernels(rng, shape):
    kernels = seeding.complex_normal(rng, shape, KERNEL_NOISE_STD)
    kernels[..., 0] += KERNEL_GAIN
    return kernels


class HammersteinNet:
    """Base class holding the parameters and the shared MLP front end.

    Subclasses declare their parameters in LAYOUT as
    (name, role, initializer, shape function of the ModelSpec) and implement
    _head on the MLP features.
    """

    kind = None
    LAYOUT = ()

    def __init__(self, spec):
        """Create and initialize the parameters for spec."""
        self.spec = spec
        self.params = {}
        for name, role, initializer, shape_of in self.LAYOUT:
            self.params[name] = Parameter(
                name, initializer(self._rng(name), shape_of(spec)), role
            )

    def _rng(self, name):
        index = [entry[0] for entry in self.LAYOUT].index(name)
        seed = seeding.derive_seed(self.spec.seed, seeding.INIT, index)
        return np.random.default_rng(seed)

    def parameters(self, role=None):
        """Return the parameters, optionally only those with one role."""
        return [param for param in self.params.values()
                if role is None or param.role is role]

    def num_weights(self, role=None):
        """Count complex weights, optionally of one role."""
        return sum(param.size for param in self.parameters(role))

    def reinitialize(self, role=Role.ADAPTIVE):
        """Reset the parameters of one role to their initial values."""
        for name, param_role, initializer, shape_of in self.LAYOUT:
            if param_role is role:
                self.params[name].data[...] = initializer(
                    self._rng(name), shape_of(self.spec)
                )

    def snapshot(self):
        """Return a copy of every parameter's values by name."""
        return {name: param.data.copy()
                for name, param in self.params.items()}

    def load(self, values):
        """Overwrite parameter values from a name to array mapping."""
        for name, param in self.params.items():
            array = np.asarray(values[name], dtype=np.complex128)
            if array.shape != param.shape:
                raise ShapeError(
                    f"{name}: expected {param.shape}, got {array.shape}"
                )
            param.data[...] = array

    def _features(self, inputs):
        """Run the hidden MLP layers on the magnitude of inputs.

        Returns:
            (hidden features [signals, time, P], phase [signals, time, 1])
        """
        inputs = np.asarray(inputs, dtype=np.complex128)
        if inputs.ndim != 2:
            raise ShapeError(f"expected [signals, time], got {inputs.shape}")
        x = CxArray(inputs[..., np.newaxis], ("signals", "time", "channels"))
        mag, phase = mag_phase_split(x)
        hidden = split_tanh(dense(mag, self.params["mlp.w1"]))
        hidden = split_tanh(dense(hidden, self.params["mlp.w2"]))
        return hidden, phase

    def forward(self, inputs):
        """Predict the SI for every signal.

        Args:
            inputs: complex array [signals, time]

        Returns:
            CxArray [signals, time, 1] recorded for backward()
        """
        hidden, phase = self._features(inputs)
        return self._head(hidden, phase)

    def _head(self, hidden, phase):
        raise NotImplementedError

    def predict(self, inputs):
        """Return the prediction as a plain [signals, time] array."""
        return self.forward(inputs).data[..., 0]


def _in_layer(spec):
    return (1, spec.P)


def _hidden_layer(spec):
    return (spec.P, spec.P)


def _out_layer(spec):
    return (spec.P, 1)


_MLP = (
    ("mlp.w1", Role.SHARED, _weights, _in_layer),
    ("mlp.w2", Role.SHARED, _weights, _hidden_layer),
)


class GlobalHammerstein(HammersteinNet):
    """MLP on the magnitude followed by one shared FIR."""

    kind = ModelKind.GLOBAL_H
    LAYOUT = _MLP + (
        ("mlp.w3", Role.SHARED, _weights, _out_layer),
        ("fir", Role.SHARED, _kernels, lambda spec: (spec.L,)),
    )

    def _head(self, hidden, phase):
        nonlinear = recombine(dense(hidden, self.params["mlp.w3"]), phase)
        return conv1d_causal(nonlinear, self.params["fir"])


class AdaptiveHammerstein(HammersteinNet):
    """MLP on the magnitude followed by one ADAPTIVE kernel per signal."""

    kind = ModelKind.ADAPTIVE_H
    LAYOUT = _MLP + (
        ("mlp.w3", Role.SHARED, _weights, _out_layer),
        ("kernels", Role.ADAPTIVE, _kernels,
         lambda spec: (spec.num_signals, spec.L)),
    )

    def _head(self, hidden, phase):
        nonlinear = recombine(dense(hidden, self.params["mlp.w3"]), phase)
        filtered = depthwise_conv(transpose_signals(nonlinear),
                                  self.params["kernels"])
        return transpose_signals(filtered)


class ParallelHammerstein(HammersteinNet):
    """Hidden MLP units filtered in parallel by per-signal kernels."""

    kind = ModelKind.PARALLEL_H
    LAYOUT = _MLP + (
        ("kernels", Role.ADAPTIVE, _kernels,
         lambda spec: (spec.num_signals, spec.P, spec.L)),
    )

    def _head(self, hidden, phase):
        branches = transpose_signals(recombine(hidden, phase))
        filtered = depthwise_conv_multi(branches, self.params["kernels"])
        return transpose_signals(filtered)


NETWORKS = {
    network.kind: network
    for network in (GlobalHammerstein, AdaptiveHammerstein,
                    ParallelHammerstein)
}


def build(spec):
    """Instantiate the model described by a ModelSpec.

    Neural kinds return a HammersteinNet with freshly initialized weights,
    MEMORY_POLY and LINEAR_FIR an unfitted MemoryPolynomial.
    """
    if spec.kind.neural:
        model = NETWORKS[spec.kind](spec)
        LOGGER.debug(
            "Built %s: %d shared + %d adaptive weights",
            spec.kind.name,
            model.num_weights(Role.SHARED),
            model.num_weights(Role.ADAPTIVE),
        )
        return model
    order = 1 if spec.kind is ModelKind.LINEAR_FIR else spec.P
    return MemoryPolynomial(order, spec.L, kind=spec.kind)
