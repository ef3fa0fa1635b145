"""Layer primitive tests against closed forms and loop oracles."""
import numpy as np
import pytest

from fdsic.cxnn import (
    CxArray,
    Parameter,
    conv1d_causal,
    dense,
    depthwise_conv,
    depthwise_conv_multi,
    mag_phase_split,
    mse_db,
    mse_loss,
    recombine,
    split_tanh,
    transpose_signals,
)
from fdsic.errors import DegenerateInputError, ShapeError
import utils


def _random(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture(name="rng")
def setup_rng():
    """Seeded generator for random test inputs."""
    return np.random.default_rng(1234)


def test_dense_identity(rng):
    """An identity matrix passes the input through."""
    x = _random(rng, 2, 5, 3)
    out = dense(CxArray(x), Parameter("w", np.eye(3)))
    np.testing.assert_array_equal(out.data, x)


def test_dense_weight_counts():
    """1->8, 8->8 and 8->1 layers hold 8, 64 and 8 weights."""
    shapes = [(1, 8), (8, 8), (8, 1)]
    counts = [Parameter("w", np.zeros(shape)).size for shape in shapes]
    assert counts == [8, 64, 8]


def test_dense_linear(rng):
    """dense(a x + b y) = a dense(x) + b dense(y)."""
    weights = Parameter("w", _random(rng, 3, 4))
    x, y = _random(rng, 6, 3), _random(rng, 6, 3)
    a, b = 0.3 - 2.0j, 1.5 + 0.5j
    left = dense(CxArray(a * x + b * y), weights).data
    right = a * dense(CxArray(x), weights).data \
        + b * dense(CxArray(y), weights).data
    np.testing.assert_allclose(left, right, atol=1e-12)


def test_dense_shape_mismatch(rng):
    """Inner axes must agree."""
    with pytest.raises(ShapeError):
        dense(CxArray(_random(rng, 4, 3)), Parameter("w", np.eye(2)))


def test_split_tanh():
    """Zero stays zero, real stays real, components are bounded."""
    assert split_tanh(CxArray(np.zeros(3))).data.tolist() == [0, 0, 0]
    real = split_tanh(CxArray(np.array([-2.0, 0.5, 9.0]))).data
    assert np.all(real.imag == 0.0)
    big = split_tanh(CxArray(np.array([50.0 - 50.0j]))).data
    assert np.all(np.abs(big.real) <= 1.0)
    assert np.all(np.abs(big.imag) <= 1.0)


def test_mag_phase_split():
    """Polar split of 2 e^{j pi/4}, with phase 1 at zero."""
    value = 2.0 * np.exp(1j * np.pi / 4.0)
    mag, phase = mag_phase_split(CxArray(np.array([value, 0.0])))
    np.testing.assert_allclose(mag.data, [2.0, 0.0])
    assert np.all(mag.data.imag == 0.0)
    np.testing.assert_allclose(phase.data, [np.exp(1j * np.pi / 4.0), 1.0])


def test_recombine_inverts_split(rng):
    """recombine(mag_phase_split(x)) = x, zeros included."""
    x = _random(rng, 2, 7, 1)
    x[0, 3, 0] = 0.0
    mag, phase = mag_phase_split(CxArray(x))
    np.testing.assert_allclose(recombine(mag, phase).data, x, atol=1e-15)


def test_recombine_keeps_magnitude(rng):
    """A unit phase does not change |y|; phase 1 leaves y unchanged."""
    y = _random(rng, 2, 5, 4)
    phase = np.exp(1j * rng.uniform(0, 2 * np.pi, (2, 5, 1)))
    np.testing.assert_allclose(np.abs(recombine(CxArray(y), phase).data),
                               np.abs(y))
    unit = recombine(CxArray(y), np.ones((2, 5, 1)))
    np.testing.assert_array_equal(unit.data, y)


def test_recombine_rejects_growth(rng):
    """The phase may not broadcast y to a larger shape."""
    with pytest.raises(ShapeError):
        recombine(CxArray(_random(rng, 2, 5, 1)), np.ones((2, 5, 3)))


def test_conv_delta():
    """Unit impulse passes through, a lag-3 impulse delays by 3."""
    x = np.arange(1, 11, dtype=np.complex128).reshape(1, 10, 1)
    identity = Parameter("k", [1.0, 0.0, 0.0, 0.0])
    np.testing.assert_array_equal(conv1d_causal(CxArray(x), identity).data,
                                  x)
    shifted = conv1d_causal(CxArray(x), Parameter("k", [0, 0, 0, 1.0]))
    np.testing.assert_array_equal(shifted.data[0, :3, 0], 0.0)
    np.testing.assert_array_equal(shifted.data[0, 3:, 0], x[0, :7, 0])


def test_conv_oracle(rng):
    """Shared-kernel convolution matches the double loop."""
    x = _random(rng, 3, 16, 1)
    kernel = _random(rng, 5)
    out = conv1d_causal(CxArray(x), Parameter("k", kernel)).data
    for signal in range(3):
        expected = utils.brute_force_conv(x[signal, :, 0], kernel)
        assert np.max(np.abs(out[signal, :, 0] - expected)) < 1e-12


def test_conv_kernel_too_long(rng):
    """Kernels longer than the time axis are rejected."""
    with pytest.raises(ShapeError):
        conv1d_causal(CxArray(_random(rng, 1, 4, 1)),
                      Parameter("k", np.ones(5)))


def test_depthwise_oracle(rng):
    """Per-signal convolution matches the loop oracle."""
    x = _random(rng, 1, 64, 4)
    kernels = _random(rng, 4, 6)
    out = depthwise_conv(CxArray(x), Parameter("k", kernels)).data
    expected = utils.brute_force_depthwise(x[0], kernels)
    assert out.shape == (1, 64, 4)
    assert np.max(np.abs(out[0] - expected)) < 1e-12


def test_depthwise_equal_kernels(rng):
    """Identical kernels reproduce conv1d_causal per signal."""
    x = _random(rng, 5, 20, 1)
    kernel = _random(rng, 4)
    shared = conv1d_causal(CxArray(x), Parameter("k", kernel)).data
    stacked = Parameter("k", np.tile(kernel, (5, 1)))
    columns = transpose_signals(CxArray(x, ("signals", "time", "channels")))
    depthwise = transpose_signals(depthwise_conv(columns, stacked)).data
    np.testing.assert_allclose(depthwise, shared, atol=1e-14)


def test_depthwise_weight_count():
    """Ten kernels of length 32 hold 320 weights."""
    assert Parameter("k", np.zeros((10, 32))).size == 320
    assert Parameter("k", np.zeros((10, 8, 32))).size == 2560


def test_depthwise_multi_oracle(rng):
    """Multi-channel depthwise convolution matches the triple loop."""
    x = _random(rng, 3, 32, 4)
    kernels = _random(rng, 4, 3, 5)
    out = depthwise_conv_multi(CxArray(x), Parameter("k", kernels)).data
    expected = utils.brute_force_depthwise_multi(x, kernels)
    assert out.shape == (1, 32, 4)
    assert np.max(np.abs(out[0] - expected)) < 1e-12


def test_depthwise_multi_single_channel(rng):
    """P = 1 reduces to depthwise_conv."""
    x = _random(rng, 1, 24, 3)
    kernels = _random(rng, 3, 1, 4)
    multi = depthwise_conv_multi(CxArray(x), Parameter("k", kernels)).data
    single = depthwise_conv(CxArray(x),
                            Parameter("k", kernels[:, 0, :])).data
    np.testing.assert_allclose(multi, single, atol=1e-14)


def test_depthwise_mismatch(rng):
    """Kernel count must equal the signals axis."""
    with pytest.raises(ShapeError):
        depthwise_conv(CxArray(_random(rng, 1, 8, 3)),
                       Parameter("k", np.ones((4, 2))))
    with pytest.raises(ShapeError):
        depthwise_conv_multi(CxArray(_random(rng, 2, 8, 3)),
                             Parameter("k", np.ones((3, 3, 2))))


def test_transpose_labels(rng):
    """Transposing swaps the signals and channels labels."""
    x = CxArray(_random(rng, 4, 6, 2), ("signals", "time", "channels"))
    out = transpose_signals(x)
    assert out.shape == (2, 6, 4)
    assert out.axes == ("channels", "time", "signals")


def test_axis_labels_validated(rng):
    """Labels must be unique and known."""
    with pytest.raises(ShapeError):
        CxArray(_random(rng, 2, 2), ("time", "time"))
    with pytest.raises(ShapeError):
        CxArray(_random(rng, 2, 2), ("time", "freq"))
    with pytest.raises(ShapeError):
        CxArray(_random(rng, 2, 2), ("time",))


def test_mse_loss_values(rng):
    """Zero, all-ones and scaled residuals."""
    assert float(mse_loss(CxArray(np.zeros(5)))) == 0.0
    ones = np.ones(4) * np.exp(1j * np.arange(4))
    assert float(mse_loss(CxArray(ones))) == pytest.approx(1.0)
    r = _random(rng, 10)
    alpha = 0.5 + 2.0j
    assert float(mse_loss(CxArray(alpha * r))) == pytest.approx(
        abs(alpha) ** 2 * float(mse_loss(CxArray(r)))
    )


def test_mse_db_values(rng):
    """0 dB, -60 dB and the -300 dB floor."""
    y = _random(rng, 3, 10)
    assert mse_db(y, y) == pytest.approx(0.0)
    assert mse_db(1e-3 * y, y) == pytest.approx(-60.0)
    assert mse_db(np.zeros_like(y), y) == -300.0
    with pytest.raises(DegenerateInputError):
        mse_db(y, np.zeros_like(y))
