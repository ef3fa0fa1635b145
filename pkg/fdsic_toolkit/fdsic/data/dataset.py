"""
Labeled self-interference datasets.

Every dataset holds ten file records, each one time-invariant SI system
observed over one packet.  The taxonomy decides which system parts are
shared by all records (invariant) and which are redrawn per file ID
(variant).  Hammerstein records follow y = PA(s) * h + n, Wiener records
y = AD(z * h + n).
"""
import enum
import logging
from dataclasses import dataclass
import numpy as np
from scipy import signal as sps

from fdsic import config, seeding
from fdsic.data.channel import SIChannel, draw_channel_spec
from fdsic.data.channel import sample_si_channel
from fdsic.data.nonlinearity import NonlinearityKind, NonlinearitySpec
from fdsic.data.nonlinearity import ad_apply, attainable_range, calibrate
from fdsic.data.nonlinearity import si_sdr
from fdsic.data.waveform import ComplexSignal, generate_ofdm_packet
from fdsic.errors import CalibrationError, InputShapeError

LOGGER = logging.getLogger(__name__)


class SystemKind(enum.IntEnum):
    """System option; values are the on-disk codes."""

    HAMMERSTEIN = 0
    WIENER = 1

    @property
    def nonlinearity(self):
        """Nonlinearity family of this system option."""
        if self is SystemKind.HAMMERSTEIN:
            return NonlinearityKind.PA_ARCTAN
        return NonlinearityKind.AD_CLIP

    @classmethod
    def parse(cls, text):
        """Parse 'h', 'w' or a full member name."""
        key = str(text).strip().upper()
        for member in cls:
            if key in (member.name, member.name[0]):
                return member
        raise ValueError(f"unknown system {text!r}, expected h or w")


class Taxonomy(enum.IntEnum):
    """Variability of the nonlinearity (NL) and SI channel across IDs."""

    INV_NL_INV_SI = 0
    INV_NL_VAR_SI = 1
    VAR_NL_VAR_SI = 2

    @property
    def nl_invariant(self):
        """Whether one nonlinearity serves every record."""
        return self is not Taxonomy.VAR_NL_VAR_SI

    @property
    def si_invariant(self):
        """Whether one channel serves every record."""
        return self is Taxonomy.INV_NL_INV_SI

    def label(self, system=SystemKind.HAMMERSTEIN):
        """Return the dataset label, e.g. 'invNL+varSI'.

        Wiener labels name the channel first, mirroring the block order.
        """
        nl = "invNL" if self.nl_invariant else "varNL"
        si = "invSI" if self.si_invariant else "varSI"
        if system is SystemKind.WIENER:
            return f"{si}+{nl}"
        return f"{nl}+{si}"

    @classmethod
    def parse(cls, text):
        """Parse a label in either block order, or a member name."""
        key = str(text).strip()
        if key.upper() in cls.__members__:
            return cls[key.upper()]
        parts = {part.strip().lower() for part in key.split("+")}
        for member in cls:
            if parts == {part.lower() for part in member.label().split("+")}:
                return member
        raise ValueError(f"unknown taxonomy {text!r}")


@dataclass(frozen=True, eq=False)
class FileRecord:
    """One file ID: excitation, response and its ground-truth system."""

    file_id: int
    input: ComplexSignal
    output: ComplexSignal
    truth_channel: SIChannel
    truth_nl: NonlinearitySpec
    noise_seed: int

    def __post_init__(self):
        """Check the file ID range and the signal lengths."""
        if not 0 <= self.file_id < config.FILES_PER_DATASET:
            raise InputShapeError(f"file_id {self.file_id} out of range")
        if len(self.input) != len(self.output):
            raise InputShapeError(
                f"record {self.file_id}: input has {len(self.input)} "
                f"samples, output {len(self.output)}"
            )


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ten file records sharing a system option and taxonomy."""

    system: SystemKind
    taxonomy: Taxonomy
    records: tuple
    si_sdr0: float = config.DEFAULT_SI_SDR0
    master_seed: int = 0

    def __post_init__(self):
        """Normalize the enums and enforce the taxonomy on the records."""
        object.__setattr__(self, "system", SystemKind(self.system))
        object.__setattr__(self, "taxonomy", Taxonomy(self.taxonomy))
        object.__setattr__(self, "records", tuple(self.records))
        if len(self.records) != config.FILES_PER_DATASET:
            raise InputShapeError(
                f"a dataset holds {config.FILES_PER_DATASET} records, "
                f"got {len(self.records)}"
            )
        ids = [record.file_id for record in self.records]
        if ids != list(range(config.FILES_PER_DATASET)):
            raise InputShapeError(f"file IDs out of order: {ids}")
        lengths = {len(record.input) for record in self.records}
        if len(lengths) != 1:
            raise InputShapeError(f"records differ in length: {lengths}")
        self._check_taxonomy()

    def _check_taxonomy(self):
        first = self.records[0]
        for record in self.records[1:]:
            if self.taxonomy.si_invariant and not np.array_equal(
                record.truth_channel.taps, first.truth_channel.taps
            ):
                raise ValueError(
                    f"record {record.file_id} breaks the shared channel"
                )
            shared_nl = record.truth_nl.same_device(first.truth_nl)
            if self.taxonomy.nl_invariant and not shared_nl:
                raise ValueError(
                    f"record {record.file_id} breaks the shared nonlinearity"
                )

    @property
    def label(self):
        """Taxonomy label in this system's block order."""
        return self.taxonomy.label(self.system)

    @property
    def num_samples(self):
        """Samples per record."""
        return len(self.records[0].input)

    @property
    def inputs(self):
        """Inputs stacked as a [records, samples] array."""
        return np.stack([record.input.samples for record in self.records])

    @property
    def outputs(self):
        """Outputs stacked as a [records, samples] array."""
        return np.stack([record.output.samples for record in self.records])


def calibration_probe(ofdm=None):
    """Return the fixed packet every nonlinearity is calibrated on."""
    return generate_ofdm_packet(config.CALIBRATION_PROBE_SEED, ofdm)


def receiver_noise(si_component, noise_seed,
                   level_db=config.NOISE_LEVEL_DB):
    """Draw complex Gaussian noise level_db below the SI component power.

    Args:
        si_component: complex array of the noiseless SI at the receiver
        noise_seed: seed of the noise stream
        level_db: noise power relative to the empirical SI power

    Returns:
        complex128 array shaped like si_component
    """
    si_component = np.asarray(si_component)
    power = np.mean(np.abs(si_component) ** 2) * 10.0 ** (level_db / 10.0)
    rng = np.random.default_rng(noise_seed)
    return seeding.complex_normal(rng, si_component.shape, np.sqrt(power))


def _through_channel(samples, channel):
    return sps.lfilter(channel.taps, [1.0], samples)


def hammerstein_response(s, channel, nl, noise_seed):
    """Return y = PA(s) * h + n for one record as a ComplexSignal."""
    s = getattr(s, "samples", s)
    si = _through_channel(nl.apply(s), channel)
    return ComplexSignal(si + receiver_noise(si, noise_seed))


def _pre_clip(z, channel, noise_seed):
    si = _through_channel(getattr(z, "samples", z), channel)
    return si + receiver_noise(si, noise_seed)


def wiener_response(z, channel, nl, noise_seed):
    """Return y = AD(z * h + n) for one record as a ComplexSignal."""
    return ComplexSignal(nl.apply(_pre_clip(z, channel, noise_seed)))


def _target_window(si_sdr0, attainable):
    """Intersect si_sdr0 +- SI_SDR_SPREAD_DB with the attainable range."""
    low = max(si_sdr0 - config.SI_SDR_SPREAD_DB, attainable[0])
    high = min(si_sdr0 + config.SI_SDR_SPREAD_DB, attainable[1])
    if low > high:
        raise CalibrationError(
            f"no SI-SDR within {config.SI_SDR_SPREAD_DB} dB of {si_sdr0} dB "
            f"is attainable; range [{attainable[0]:.2f}, "
            f"{attainable[1]:.2f}] dB",
            target=si_sdr0,
            attainable=attainable,
        )
    if (low, high) != (si_sdr0 - config.SI_SDR_SPREAD_DB,
                       si_sdr0 + config.SI_SDR_SPREAD_DB):
        LOGGER.warning(
            "SI-SDR targets clipped to [%.2f, %.2f] dB around %.2f dB",
            low, high, si_sdr0,
        )
    return low, high


def _check_sdr0(si_sdr0):
    low, high = config.SI_SDR0_RANGE
    if not low <= si_sdr0 <= high:
        raise ValueError(f"si_sdr0 {si_sdr0} dB outside [{low}, {high}]")


def _record_channel(taxonomy, master_seed, file_id, shared):
    if taxonomy.si_invariant:
        return shared
    seed = seeding.derive_seed(master_seed, file_id, seeding.CHANNEL)
    return sample_si_channel(draw_channel_spec(seed))


def _shared_channel(taxonomy, system_seed):
    if not taxonomy.si_invariant:
        return None
    seed = seeding.derive_seed(system_seed, seeding.SHARED, seeding.CHANNEL)
    return sample_si_channel(draw_channel_spec(seed))


def _target_rng(master_seed, file_id):
    seed = seeding.derive_seed(master_seed, file_id, seeding.NONLINEARITY)
    return np.random.default_rng(seed)


def _log_dataset(dataset):
    achieved = [rec.truth_nl.achieved_si_sdr for rec in dataset.records]
    LOGGER.info(
        "Generated %s %s dataset: %d records x %d samples, SI-SDR "
        "%.2f..%.2f dB (seed %d)",
        dataset.system.name, dataset.label, len(dataset.records),
        dataset.num_samples, min(achieved), max(achieved),
        dataset.master_seed,
    )


def generate_hammerstein(taxonomy, si_sdr0=config.DEFAULT_SI_SDR0,
                         master_seed=0, system_seed=None, ofdm=None):
    """Generate a Hammerstein dataset.

    Args:
        taxonomy: Taxonomy member or label
        si_sdr0: nominal PA SI-SDR in dB, within SI_SDR0_RANGE
        master_seed: seed of waveforms, noise and variant system parts
        system_seed: seed of the invariant system parts, defaults to
            master_seed
        ofdm: OfdmConfig of the packets, defaults to full-length packets

    Returns:
        Dataset of ten records

    Raises:
        CalibrationError: a PA target cannot be reached
    """
    taxonomy = _as_taxonomy(taxonomy)
    _check_sdr0(si_sdr0)
    system_seed = master_seed if system_seed is None else system_seed
    probe = calibration_probe(ofdm)

    if taxonomy.nl_invariant:
        shared_nl = calibrate(NonlinearityKind.PA_ARCTAN, si_sdr0, probe)
    else:
        window = _target_window(
            si_sdr0, attainable_range(NonlinearityKind.PA_ARCTAN, probe)
        )
    shared_channel = _shared_channel(taxonomy, system_seed)

    records = []
    for file_id in range(config.FILES_PER_DATASET):
        packet = generate_ofdm_packet(
            seeding.derive_seed(master_seed, file_id, seeding.PACKET), ofdm
        )
        channel = _record_channel(
            taxonomy, master_seed, file_id, shared_channel
        )
        if taxonomy.nl_invariant:
            nl = shared_nl
        else:
            target = _target_rng(master_seed, file_id).uniform(*window)
            nl = calibrate(NonlinearityKind.PA_ARCTAN, target, probe)
        noise_seed = seeding.derive_seed(master_seed, file_id, seeding.NOISE)
        output = hammerstein_response(packet, channel, nl, noise_seed)
        records.append(
            FileRecord(file_id, packet, output, channel, nl, noise_seed)
        )

    dataset = Dataset(SystemKind.HAMMERSTEIN, taxonomy, records,
                      si_sdr0, master_seed)
    _log_dataset(dataset)
    return dataset


def _calibrate_clip(target, x):
    """Calibrate the clip level on x scaled to unit power, then rescale."""
    rms = np.sqrt(np.mean(np.abs(x) ** 2))
    unit = calibrate(NonlinearityKind.AD_CLIP, target, x / rms)
    return NonlinearitySpec(unit.kind, unit.param * rms, unit.achieved_si_sdr)


def shared_clip_signal(taxonomy, system_seed, ofdm=None):
    """Return the signal a shared clip level is calibrated on.

    The calibration probe is passed through every channel the system seed
    assigns, the shared one or one per file ID, and the results are
    stacked.  Only system_seed enters, so test data keeps the clip level.
    """
    probe = calibration_probe(ofdm).samples
    shared = _shared_channel(taxonomy, system_seed)
    channels = [
        _record_channel(taxonomy, system_seed, file_id, shared)
        for file_id in range(1 if shared else config.FILES_PER_DATASET)
    ]
    return np.concatenate([_through_channel(probe, channel)
                           for channel in channels])


def generate_wiener(taxonomy, si_sdr0=config.DEFAULT_SI_SDR0,
                    master_seed=0, system_seed=None, ofdm=None):
    """Generate a Wiener dataset.

    Noise enters before the clipper.  Per-record clip levels are
    calibrated on that record's pre-clip signal, a shared clip level on
    shared_clip_signal.  Every record stores the SI-SDR its clip level
    realizes on its own pre-clip signal.

    Args:
        taxonomy: Taxonomy member or label
        si_sdr0: nominal AD SI-SDR in dB, within SI_SDR0_RANGE
        master_seed: seed of waveforms, noise and variant system parts
        system_seed: seed of the invariant system parts, defaults to
            master_seed
        ofdm: OfdmConfig of the packets

    Returns:
        Dataset of ten records
    """
    taxonomy = _as_taxonomy(taxonomy)
    _check_sdr0(si_sdr0)
    system_seed = master_seed if system_seed is None else system_seed

    if taxonomy.nl_invariant:
        shared_nl = _calibrate_clip(
            si_sdr0, shared_clip_signal(taxonomy, system_seed, ofdm)
        )
    shared_channel = _shared_channel(taxonomy, system_seed)

    records = []
    for file_id in range(config.FILES_PER_DATASET):
        packet = generate_ofdm_packet(
            seeding.derive_seed(master_seed, file_id, seeding.PACKET), ofdm
        )
        channel = _record_channel(
            taxonomy, master_seed, file_id, shared_channel
        )
        noise_seed = seeding.derive_seed(master_seed, file_id, seeding.NOISE)
        x = _pre_clip(packet, channel, noise_seed)
        if taxonomy.nl_invariant:
            nl = shared_nl
        else:
            unit_x = x / np.sqrt(np.mean(np.abs(x) ** 2))
            window = _target_window(
                si_sdr0, attainable_range(NonlinearityKind.AD_CLIP, unit_x)
            )
            target = _target_rng(master_seed, file_id).uniform(*window)
            nl = _calibrate_clip(target, x)
        output = ComplexSignal(ad_apply(x, nl.param))
        nl = NonlinearitySpec(nl.kind, nl.param, si_sdr(output, x))
        records.append(
            FileRecord(file_id, packet, output, channel, nl, noise_seed)
        )

    dataset = Dataset(SystemKind.WIENER, taxonomy, records,
                      si_sdr0, master_seed)
    _log_dataset(dataset)
    return dataset


def generate(system, taxonomy, si_sdr0=config.DEFAULT_SI_SDR0,
             master_seed=0, system_seed=None, ofdm=None):
    """Dispatch to generate_hammerstein or generate_wiener."""
    if SystemKind(system) is SystemKind.HAMMERSTEIN:
        generator = generate_hammerstein
    else:
        generator = generate_wiener
    return generator(taxonomy, si_sdr0, master_seed, system_seed, ofdm)


def _as_taxonomy(taxonomy):
    if isinstance(taxonomy, Taxonomy):
        return taxonomy
    if isinstance(taxonomy, int):
        return Taxonomy(taxonomy)
    return Taxonomy.parse(taxonomy)
