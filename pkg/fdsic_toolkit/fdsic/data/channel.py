"""
Self-interference channel impulse responses.

h_SI[k] = h_iSI[k] + h_eSI[k]: a deterministic internal path at delay zero
plus Rayleigh-faded external reflections with a single-exponential power
delay profile.  Realizations are kept only when they fall inside the
measured windows for internal dominance and RMS delay spread.
"""
import logging
from dataclasses import dataclass, field
import numpy as np
from scipy import optimize

from fdsic import config, seeding
from fdsic.errors import (
    CalibrationError,
    ChannelGenerationError,
    DegenerateInputError,
    InputShapeError,
)

LOGGER = logging.getLogger(__name__)

# Search bracket for the decay constant in ns, (0, 10 us].
_DECAY_BRACKET_NS = (1e-3, 1e4)
_RMS_TOLERANCE_NS = 0.5


def rms_delay_spread(taps, sample_period=config.SAMPLE_PERIOD_NS):
    """Return the RMS delay spread of a tapped delay line in ns.

    Args:
        taps: complex (or real) tap amplitudes, tap l at delay l*sample_period
        sample_period: tap spacing in ns

    Returns:
        power-weighted standard deviation of the tap delays
    """
    power = np.abs(np.asarray(taps)) ** 2
    return _profile_spread(power, sample_period)


def _profile_spread(power, sample_period):
    total = power.sum()
    if total <= 0.0:
        raise DegenerateInputError("all taps are zero")
    delays = np.arange(power.size) * sample_period
    mean_delay = power @ delays / total
    spread = power @ (delays - mean_delay) ** 2 / total
    return float(np.sqrt(max(spread, 0.0)))


def _exponential_profile(decay, dominance_db, num_taps=config.CHANNEL_TAPS):
    """Build the unit-power PDP for a decay constant in ns."""
    lags = np.arange(num_taps - 1)
    external = np.exp(-lags * config.SAMPLE_PERIOD_NS / decay)
    profile = np.concatenate([[10.0 ** (dominance_db / 10.0)], external])
    return profile / profile.sum()


def solve_decay_constant(target_rms_ds, dominance_db):
    """Find the decay constant giving the target RMS delay spread.

    The spread of the profile grows monotonically with the decay
    constant, so bisection over the bracket converges when the target lies
    between the spreads at the bracket ends.

    Returns:
        decay constant in ns
    """
    def excess(decay):
        """Return the RMS delay spread above target for one decay."""
        profile = _exponential_profile(decay, dominance_db)
        spread = _profile_spread(profile, config.SAMPLE_PERIOD_NS)
        return spread - target_rms_ds

    low, high = _DECAY_BRACKET_NS
    reachable = (excess(low) + target_rms_ds, excess(high) + target_rms_ds)
    if not reachable[0] <= target_rms_ds <= reachable[1]:
        raise CalibrationError(
            f"RMS delay spread {target_rms_ds:.2f} ns is unreachable at "
            f"{dominance_db:.2f} dB dominance; attainable "
            f"[{reachable[0]:.2f}, {reachable[1]:.2f}] ns",
            target=target_rms_ds,
            attainable=reachable,
        )
    if excess(low) == 0.0:
        return low
    if excess(high) == 0.0:
        return high
    decay = optimize.bisect(excess, low, high, xtol=1e-9, maxiter=200)
    if abs(excess(decay)) > _RMS_TOLERANCE_NS:
        raise CalibrationError(
            "decay constant bisection did not converge",
            target=target_rms_ds,
        )
    return decay


def _check_targets(target_rms_ds, dominance_db):
    low, high = config.RMS_DELAY_SPREAD_NS
    if not low <= target_rms_ds <= high:
        raise ValueError(f"target RMS delay spread {target_rms_ds} ns "
                         f"outside [{low}, {high}]")
    low, high = config.INTERNAL_DOMINANCE_DB
    if not low <= dominance_db <= high:
        raise ValueError(f"dominance {dominance_db} dB "
                         f"outside [{low}, {high}]")


def pdp_from_spec(target_rms_ds, dominance_db):
    """Return the 12-tap unit-power PDP for the two measurement facts.

    Tap 0 carries the internal path, dominance_db above tap 1; taps 1..11
    decay exponentially with the constant that yields target_rms_ds.
    """
    _check_targets(target_rms_ds, dominance_db)
    decay = solve_decay_constant(target_rms_ds, dominance_db)
    return _exponential_profile(decay, dominance_db)


@dataclass(frozen=True)
class ChannelSpec:
    """Targets for one SI channel draw."""

    target_rms_ds: float
    dominance_db: float
    seed: int
    decay_constant: float = field(init=False)

    def __post_init__(self):
        """Solve for the decay constant; unreachable targets raise."""
        _check_targets(self.target_rms_ds, self.dominance_db)
        decay = solve_decay_constant(self.target_rms_ds, self.dominance_db)
        object.__setattr__(self, "decay_constant", decay)

    @property
    def pdp(self):
        """Unit-power power delay profile of this spec."""
        return _exponential_profile(self.decay_constant, self.dominance_db)


@dataclass(frozen=True, eq=False)
class SIChannel:
    """A 12-tap SI channel realization, internal path at index 0."""

    taps: np.ndarray
    sample_period: float = config.SAMPLE_PERIOD_NS
    internal_index: int = 0

    def __post_init__(self):
        """Freeze the taps and check their count."""
        taps = np.array(self.taps, dtype=np.complex128).ravel()
        if taps.size != config.CHANNEL_TAPS:
            raise InputShapeError(
                f"expected {config.CHANNEL_TAPS} taps, got {taps.size}"
            )
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def rms_delay_spread(self):
        """Realized RMS delay spread in ns."""
        return rms_delay_spread(self.taps, self.sample_period)

    @property
    def internal_dominance(self):
        """Internal path power over the strongest external path in dB."""
        power = np.abs(self.taps) ** 2
        return float(10.0 * np.log10(power[0] / power[1:].max()))

    def within_windows(self):
        """Check both measurement windows on this realization."""
        low_db, high_db = config.INTERNAL_DOMINANCE_DB
        low_ns, high_ns = config.RMS_DELAY_SPREAD_NS
        return bool(
            low_db <= self.internal_dominance <= high_db
            and low_ns <= self.rms_delay_spread <= high_ns
        )


def draw_channel_spec(seed):
    """Draw RMS delay spread and dominance targets until they are reachable.

    Low delay spreads are unreachable at low dominance because the
    internal path and tap 1 alone already spread the profile.
    """
    rng = np.random.default_rng(seed)
    for attempt in range(config.MAX_CHANNEL_ATTEMPTS):
        target = rng.uniform(*config.RMS_DELAY_SPREAD_NS)
        dominance = rng.uniform(*config.INTERNAL_DOMINANCE_DB)
        try:
            return ChannelSpec(target, dominance, seed)
        except CalibrationError as err:
            LOGGER.debug("Channel spec draw %d rejected: %s", attempt, err)
    raise ChannelGenerationError(
        f"no reachable channel spec after {config.MAX_CHANNEL_ATTEMPTS} draws"
    )


def draw_taps(pdp, rng):
    """Draw one fading realization of a PDP.

    The internal tap is sqrt(p_0) with zero phase; every external tap is
    circularly-symmetric complex Gaussian with variance p_l.
    """
    pdp = np.asarray(pdp, dtype=np.float64)
    taps = seeding.complex_normal(rng, pdp.size) * np.sqrt(pdp)
    taps[0] = np.sqrt(pdp[0])
    return taps


def sample_si_channel(spec):
    """Sample a channel for spec, resampling until it fits both windows.

    Raises:
        ChannelGenerationError: after MAX_CHANNEL_ATTEMPTS rejections
    """
    seed = seeding.derive_seed(spec.seed, seeding.FADING)
    rng = np.random.default_rng(seed)
    pdp = spec.pdp
    for attempt in range(config.MAX_CHANNEL_ATTEMPTS):
        channel = SIChannel(draw_taps(pdp, rng))
        if channel.within_windows():
            LOGGER.debug(
                "Channel accepted after %d attempts: %.2f ns, %.2f dB",
                attempt + 1,
                channel.rms_delay_spread,
                channel.internal_dominance,
            )
            return channel
    raise ChannelGenerationError(
        f"channel for seed {spec.seed} missed the windows "
        f"{config.MAX_CHANNEL_ATTEMPTS} times"
    )


def empirical_pdp(pdp, realizations, seed):
    """Return the mean tap power over unconditioned fading draws of a PDP."""
    if realizations < 1:
        raise ValueError("realizations must be >= 1")
    rng = np.random.default_rng(seed)
    power = np.zeros(len(pdp))
    for _ in range(realizations):
        power += np.abs(draw_taps(pdp, rng)) ** 2
    return power / realizations
