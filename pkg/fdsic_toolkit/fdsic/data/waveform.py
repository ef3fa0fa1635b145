"""
OFDM baseband packets standing in for HT WLAN transmissions.

Packets are payload-only OFDM symbols: random 64-QAM on the data
subcarriers, DC and band edges nulled, cyclic prefix prepended, and the
whole packet normalized to unit mean power.
"""
import enum
from dataclasses import dataclass, field
import numpy as np

from fdsic import config
from fdsic.errors import InputShapeError

BITS_PER_SYMBOL = 6

# Amplitude level for each 3-bit Gray code, indexed by the code value.
_GRAY_LEVELS = np.array([-7, -5, -1, -3, 7, 5, 1, 3], dtype=np.float64)
_QAM64_SCALE = 1.0 / np.sqrt(42.0)


class Constellation(enum.Enum):
    """Payload constellations."""

    QAM64 = 64


@dataclass(frozen=True, eq=False)
class ComplexSignal:
    """Complex baseband samples at a fixed sample rate."""

    samples: np.ndarray
    sample_rate: float = config.SAMPLE_RATE

    def __post_init__(self):
        """Freeze a private complex128 copy of the samples."""
        samples = np.array(self.samples, dtype=np.complex128).ravel()
        if samples.size == 0:
            raise InputShapeError("a signal needs at least one sample")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self):
        """Return the number of samples."""
        return self.samples.size

    @property
    def mean_power(self):
        """Mean of |s|^2 over the signal."""
        return float(np.mean(np.abs(self.samples) ** 2))


@dataclass(frozen=True)
class OfdmConfig:
    """Layout of the OFDM packets."""

    fft_size: int = 64
    cp_length: int = 16
    data_subcarriers: int = 52
    constellation: Constellation = field(default=Constellation.QAM64)
    packet_samples: int = config.PACKET_SAMPLES

    def __post_init__(self):
        """Check the layout invariants."""
        if not 0 <= self.cp_length < self.fft_size:
            raise ValueError("cp_length must be smaller than fft_size")
        if not 0 < self.data_subcarriers < self.fft_size:
            raise ValueError("data_subcarriers must be below fft_size")
        if self.data_subcarriers % 2:
            raise ValueError("data_subcarriers must be even")
        if self.packet_samples <= 0:
            raise ValueError("packet_samples must be positive")

    @property
    def symbol_length(self):
        """Samples per OFDM symbol including the cyclic prefix."""
        return self.fft_size + self.cp_length

    @property
    def data_bins(self):
        """FFT bin indices of the data subcarriers, DC excluded."""
        half = self.data_subcarriers // 2
        positive = np.arange(1, half + 1)
        return np.concatenate([positive, self.fft_size - positive[::-1]])


def qam64_map(bits):
    """Map a bit sequence onto Gray-coded, unit-energy 64-QAM symbols.

    The first three bits of every group select the in-phase level and the
    last three the quadrature level, each through a 3-bit Gray code, so
    neighbouring points differ in one bit.

    Args:
        bits: flat sequence of 0/1 values, length divisible by 6

    Returns:
        complex128 array with one symbol per 6 bits
    """
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size % BITS_PER_SYMBOL:
        raise InputShapeError(
            f"bit count {bits.size} is not divisible by {BITS_PER_SYMBOL}"
        )
    if np.any((bits != 0) & (bits != 1)):
        raise InputShapeError("bits must be 0 or 1")
    groups = bits.reshape(-1, BITS_PER_SYMBOL)
    weights = np.array([4, 2, 1])
    in_phase = _GRAY_LEVELS[groups[:, :3] @ weights]
    quadrature = _GRAY_LEVELS[groups[:, 3:] @ weights]
    return _QAM64_SCALE * (in_phase + 1j * quadrature)


def qam64_constellation():
    """Return all 64 points indexed by their 6-bit label."""
    labels = np.arange(64)
    bits = (labels[:, None] >> np.arange(5, -1, -1)) & 1
    return qam64_map(bits.ravel())


def generate_ofdm_packet(seed, ofdm=None):
    """Generate one unit-power OFDM packet.

    Args:
        seed: integer seed, the packet is a pure function of it
        ofdm: OfdmConfig, defaults to the 802.11n-like 64/16/52 layout

    Returns:
        ComplexSignal of ofdm.packet_samples samples
    """
    ofdm = ofdm or OfdmConfig()
    rng = np.random.default_rng(seed)
    num_symbols = -(-ofdm.packet_samples // ofdm.symbol_length)
    bits = rng.integers(
        0, 2, size=num_symbols * ofdm.data_subcarriers * BITS_PER_SYMBOL
    )
    grid = np.zeros((num_symbols, ofdm.fft_size), dtype=np.complex128)
    grid[:, ofdm.data_bins] = qam64_map(bits).reshape(num_symbols, -1)

    symbols = np.fft.ifft(grid, axis=1) * np.sqrt(ofdm.fft_size)
    prefix = symbols[:, ofdm.fft_size - ofdm.cp_length:ofdm.fft_size]
    with_cp = np.concatenate([prefix, symbols], axis=1)
    stream = with_cp.ravel()[:ofdm.packet_samples]
    stream = stream / np.sqrt(np.mean(np.abs(stream) ** 2))
    return ComplexSignal(stream)


def papr_db(signal):
    """Return the peak-to-average power ratio of a signal in dB."""
    samples = getattr(signal, "samples", signal)
    power = np.abs(np.asarray(samples)) ** 2
    return float(10.0 * np.log10(power.max() / power.mean()))
