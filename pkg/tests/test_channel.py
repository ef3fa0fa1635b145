"""SI channel profile and sampling tests."""
import numpy as np
import pytest

from fdsic import config
from fdsic.data import (
    ChannelSpec,
    SIChannel,
    draw_channel_spec,
    draw_taps,
    pdp_from_spec,
    rms_delay_spread,
    sample_si_channel,
)
from fdsic.data.channel import solve_decay_constant
from fdsic.errors import CalibrationError, DegenerateInputError
from fdsic.errors import InputShapeError


def test_pdp_dominance_and_power():
    """Tap 0 sits dominance_db above tap 1 and the profile sums to one."""
    pdp = pdp_from_spec(30.0, 10.0)
    assert pdp.size == 12
    assert 10.0 * np.log10(pdp[0] / pdp[1]) == pytest.approx(10.0, abs=1e-6)
    assert pdp.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(pdp[1:]) < 0.0)


@pytest.mark.parametrize("target, dominance", [(20.0, 10.0), (40.0, 10.0),
                                               (40.0, 5.0), (27.5, 7.0)])
def test_pdp_reaches_target_spread(target, dominance):
    """The solved profile reaches its RMS delay spread within 0.5 ns."""
    pdp = pdp_from_spec(target, dominance)
    spread = rms_delay_spread(np.sqrt(pdp))
    assert abs(spread - target) < 0.5


def test_unreachable_spread():
    """20 ns cannot be reached at 5 dB dominance; the error says why."""
    with pytest.raises(CalibrationError) as excinfo:
        solve_decay_constant(20.0, 5.0)
    low, high = excinfo.value.attainable
    assert low > 20.0
    assert high > 40.0


def test_targets_outside_windows():
    """Targets outside the measurement windows are rejected."""
    with pytest.raises(ValueError):
        pdp_from_spec(10.0, 7.0)
    with pytest.raises(ValueError):
        pdp_from_spec(30.0, 12.0)


def test_rms_delay_spread_values():
    """A single tap has no spread; two equal taps spread half a period."""
    assert rms_delay_spread([1.0, 0.0, 0.0]) == 0.0
    assert rms_delay_spread([1.0, 1.0]) == pytest.approx(
        config.SAMPLE_PERIOD_NS / 2.0
    )
    with pytest.raises(DegenerateInputError):
        rms_delay_spread(np.zeros(12))


def test_channel_tap_count():
    """SI channels have exactly 12 taps."""
    with pytest.raises(InputShapeError):
        SIChannel(np.ones(11))


def test_sampled_channels_within_windows():
    """1000 sampled channels all satisfy dominance and delay spread."""
    for seed in range(1000):
        channel = sample_si_channel(draw_channel_spec(seed))
        assert 5.0 <= channel.internal_dominance <= 10.0, seed
        assert 20.0 <= channel.rms_delay_spread <= 40.0, seed
        assert channel.taps[0].imag == 0.0
        assert channel.taps[0].real > 0.0


def test_sampling_deterministic():
    """The same spec seed yields the same taps."""
    spec = ChannelSpec(30.0, 8.0, 11)
    first = sample_si_channel(spec)
    second = sample_si_channel(ChannelSpec(30.0, 8.0, 11))
    assert np.array_equal(first.taps, second.taps)
    other = sample_si_channel(ChannelSpec(30.0, 8.0, 12))
    assert not np.array_equal(first.taps, other.taps)


def test_fading_converges_to_profile():
    """Mean tap power over many draws approaches the profile."""
    pdp = pdp_from_spec(30.0, 8.0)
    rng = np.random.default_rng(4)
    power = np.mean(
        [np.abs(draw_taps(pdp, rng)) ** 2 for _ in range(20000)], axis=0
    )
    assert power[0] == pytest.approx(pdp[0], rel=1e-12)
    np.testing.assert_allclose(power[1:], pdp[1:], rtol=0.05)


def test_spec_pdp_matches_pdp_from_spec():
    """ChannelSpec solves the same profile as pdp_from_spec."""
    spec = ChannelSpec(33.0, 6.0, 0)
    np.testing.assert_allclose(spec.pdp, pdp_from_spec(33.0, 6.0))
    assert spec.decay_constant > 0.0
