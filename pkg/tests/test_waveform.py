"""OFDM packet and 64-QAM mapping tests."""
import itertools
import numpy as np
import pytest

from fdsic.data import OfdmConfig, generate_ofdm_packet, papr_db, qam64_map
from fdsic.data.waveform import qam64_constellation
from fdsic.errors import InputShapeError


def test_constellation_unit_energy():
    """Mean energy over all 64 points is one."""
    points = qam64_constellation()
    assert points.size == 64
    assert np.mean(np.abs(points) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_zero_bits_map_to_grid_point():
    """Bits 000000 land on a grid point with odd-integer coordinates."""
    point = qam64_map([0, 0, 0, 0, 0, 0])[0] * np.sqrt(42.0)
    levels = {-7, -5, -3, -1, 1, 3, 5, 7}
    assert round(point.real) in levels
    assert round(point.imag) in levels
    assert point.real == pytest.approx(round(point.real))
    assert point.imag == pytest.approx(round(point.imag))


def test_gray_neighbours_differ_in_one_bit():
    """Horizontally or vertically adjacent points differ in exactly 1 bit.

    The check is exhaustive over the 64-point grid.
    """
    points = qam64_constellation() * np.sqrt(42.0)
    step = 2.0
    for first, second in itertools.combinations(range(64), 2):
        delta = points[first] - points[second]
        adjacent = (
            (abs(abs(delta.real) - step) < 1e-9 and abs(delta.imag) < 1e-9)
            or (abs(abs(delta.imag) - step) < 1e-9
                and abs(delta.real) < 1e-9)
        )
        if adjacent:
            assert bin(first ^ second).count("1") == 1, (
                f"labels {first:06b} and {second:06b} are neighbours"
            )


def test_bad_bit_counts():
    """Bit sequences must split into whole symbols of 0/1 values."""
    with pytest.raises(InputShapeError):
        qam64_map([0, 1, 0])
    with pytest.raises(InputShapeError):
        qam64_map([0, 1, 2, 0, 1, 0])


def test_packet_deterministic():
    """The same seed yields bitwise-identical packets."""
    first = generate_ofdm_packet(0)
    second = generate_ofdm_packet(0)
    assert np.array_equal(first.samples, second.samples)
    assert not np.array_equal(first.samples,
                              generate_ofdm_packet(1).samples)


@pytest.mark.parametrize("seed", [0, 1, 17, 2**40])
def test_packet_length_and_power(seed):
    """Packets have 3218 samples at unit mean power."""
    packet = generate_ofdm_packet(seed)
    assert len(packet) == 3218
    assert abs(packet.mean_power - 1.0) < 1e-9


def test_packet_is_read_only():
    """Generated samples cannot be modified in place."""
    packet = generate_ofdm_packet(3)
    with pytest.raises(ValueError):
        packet.samples[0] = 0.0


def test_papr_range():
    """PAPR over 100 seeds stays within [5, 13] dB."""
    paprs = [papr_db(generate_ofdm_packet(seed)) for seed in range(100)]
    assert min(paprs) >= 5.0
    assert max(paprs) <= 13.0


def test_null_subcarriers():
    """Null subcarriers are at least 30 dB below the data subcarriers."""
    ofdm = OfdmConfig()
    samples = generate_ofdm_packet(5, ofdm).samples
    symbol = samples[ofdm.cp_length:ofdm.symbol_length]
    power = np.abs(np.fft.fft(symbol)) ** 2
    data = np.zeros(ofdm.fft_size, dtype=bool)
    data[ofdm.data_bins] = True
    assert power[data].min() > 0.0
    ratio_db = 10.0 * np.log10(
        (power[~data].max() + 1e-300) / power[data].mean()
    )
    assert ratio_db < -30.0


def test_cyclic_prefix():
    """Each symbol starts with a copy of its last cp_length samples."""
    ofdm = OfdmConfig()
    samples = generate_ofdm_packet(9, ofdm).samples
    symbol = samples[:ofdm.symbol_length]
    np.testing.assert_allclose(symbol[:ofdm.cp_length],
                               symbol[-ofdm.cp_length:], atol=1e-12)


def test_invalid_layouts():
    """Inconsistent OFDM layouts are rejected."""
    with pytest.raises(ValueError):
        OfdmConfig(cp_length=64)
    with pytest.raises(ValueError):
        OfdmConfig(data_subcarriers=51)
    with pytest.raises(ValueError):
        OfdmConfig(packet_samples=0)
