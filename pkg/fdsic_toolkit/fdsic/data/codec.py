"""
Binary dataset files and their YAML sidecars.

Layout, all little-endian:

    header  magic "SICD", version u16, system u8, taxonomy u8,
            record count u16, si_sdr0 f64, master_seed u64
    record  file_id u16, sample count u32, input samples, output samples,
            12 channel taps, nonlinearity kind u8, param f64,
            achieved SI-SDR f64, noise_seed u64

Samples and taps are (re, im) float64 pairs.
"""
import logging
import pathlib
import numpy as np
import yaml

from fdsic import config
from fdsic.data.channel import SIChannel
from fdsic.data.dataset import Dataset, FileRecord, SystemKind, Taxonomy
from fdsic.data.nonlinearity import NonlinearityKind, NonlinearitySpec
from fdsic.data.waveform import ComplexSignal
from fdsic.errors import DatasetFormatError, FdsicError

LOGGER = logging.getLogger(__name__)

MAGIC = b"SICD"
COMPLEX = np.dtype("<c16")

HEADER = np.dtype([
    ("magic", "S4"),
    ("version", "<u2"),
    ("system", "u1"),
    ("taxonomy", "u1"),
    ("record_count", "<u2"),
    ("si_sdr0", "<f8"),
    ("master_seed", "<u8"),
])
RECORD_HEAD = np.dtype([("file_id", "<u2"), ("sample_count", "<u4")])
RECORD_TAIL = np.dtype([
    ("nl_kind", "u1"),
    ("param", "<f8"),
    ("achieved_si_sdr", "<f8"),
    ("noise_seed", "<u8"),
])


class BinaryReader:
    """Cursor over an in-memory byte buffer that fails with offsets."""

    def __init__(self, data):
        """Start at byte zero of data."""
        self.data = memoryview(data)
        self.offset = 0

    def take(self, dtype, count=1, what="field"):
        """Read count items of dtype and advance the cursor.

        Raises:
            DatasetFormatError: fewer bytes remain than requested
        """
        dtype = np.dtype(dtype)
        count = int(count)
        size = dtype.itemsize * count
        if count < 0 or self.offset + size > len(self.data):
            raise DatasetFormatError(
                f"truncated {what}: need {size} bytes, "
                f"{len(self.data) - self.offset} left",
                self.offset,
            )
        values = np.frombuffer(self.data, dtype, count, self.offset)
        self.offset += size
        return values.copy()

    def take_one(self, dtype, what="field"):
        """Read a single item of dtype."""
        return self.take(dtype, 1, what)[0]

    def expect_end(self):
        """Fail when bytes remain after the last structure."""
        if self.offset != len(self.data):
            raise DatasetFormatError(
                f"{len(self.data) - self.offset} trailing bytes", self.offset
            )


def sidecar_path(path):
    """Return the YAML sidecar path belonging to a binary file."""
    path = pathlib.Path(path)
    return path.with_name(path.name + ".yaml")


def _header_bytes(dataset):
    header = np.zeros((), dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = config.DATASET_FORMAT_VERSION
    header["system"] = dataset.system
    header["taxonomy"] = dataset.taxonomy
    header["record_count"] = len(dataset.records)
    header["si_sdr0"] = dataset.si_sdr0
    header["master_seed"] = dataset.master_seed
    return header.tobytes()


def _record_bytes(record):
    head = np.zeros((), dtype=RECORD_HEAD)
    head["file_id"] = record.file_id
    head["sample_count"] = len(record.input)
    tail = np.zeros((), dtype=RECORD_TAIL)
    tail["nl_kind"] = record.truth_nl.kind
    tail["param"] = record.truth_nl.param
    tail["achieved_si_sdr"] = record.truth_nl.achieved_si_sdr
    tail["noise_seed"] = record.noise_seed
    return b"".join([
        head.tobytes(),
        record.input.samples.astype(COMPLEX).tobytes(),
        record.output.samples.astype(COMPLEX).tobytes(),
        record.truth_channel.taps.astype(COMPLEX).tobytes(),
        tail.tobytes(),
    ])


def dataset_metadata(dataset):
    """Return the sidecar mapping describing every record's metadata."""
    records = []
    for record in dataset.records:
        channel = record.truth_channel
        records.append({
            "file_id": record.file_id,
            "samples": len(record.input),
            "noise_seed": int(record.noise_seed),
            "nonlinearity": {
                "kind": record.truth_nl.kind.name,
                "param": float(record.truth_nl.param),
                "achieved_si_sdr_db": float(record.truth_nl.achieved_si_sdr),
            },
            "channel": {
                "rms_delay_spread_ns": channel.rms_delay_spread,
                "internal_dominance_db": channel.internal_dominance,
                "taps": [[float(tap.real), float(tap.imag)]
                         for tap in channel.taps],
            },
        })
    return {
        "format": MAGIC.decode(),
        "version": config.DATASET_FORMAT_VERSION,
        "system": dataset.system.name,
        "taxonomy": dataset.label,
        "si_sdr0_db": float(dataset.si_sdr0),
        "master_seed": int(dataset.master_seed),
        "records": records,
    }


def write_dataset(dataset, path):
    """Write a dataset and its sidecar.

    Returns:
        pathlib.Path of the binary file
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = _header_bytes(dataset) + b"".join(
        _record_bytes(record) for record in dataset.records
    )
    path.write_bytes(payload)
    with sidecar_path(path).open("w", encoding="utf-8") as sidecar:
        yaml.safe_dump(dataset_metadata(dataset), sidecar, sort_keys=False)
    LOGGER.info("Wrote %s (%d bytes)", path, len(payload))
    return path


def _read_header(reader):
    header = reader.take_one(HEADER, "header")
    if header["magic"] != MAGIC:
        raise DatasetFormatError(
            f"expected magic {MAGIC!r}, found {bytes(header['magic'])!r}", 0
        )
    if header["version"] != config.DATASET_FORMAT_VERSION:
        raise DatasetFormatError(
            f"unsupported version {header['version']}, expected "
            f"{config.DATASET_FORMAT_VERSION}",
            HEADER.fields["version"][1],
        )
    for name, enum_type in (("system", SystemKind), ("taxonomy", Taxonomy)):
        if int(header[name]) not in set(enum_type):
            raise DatasetFormatError(
                f"unknown {name} code {header[name]}",
                HEADER.fields[name][1],
            )
    if header["record_count"] != config.FILES_PER_DATASET:
        raise DatasetFormatError(
            f"record count {header['record_count']}, expected "
            f"{config.FILES_PER_DATASET}",
            HEADER.fields["record_count"][1],
        )
    return header


def _read_record(reader):
    start = reader.offset
    head = reader.take_one(RECORD_HEAD, "record header")
    count = int(head["sample_count"])
    samples_in = reader.take(COMPLEX, count, "input samples")
    samples_out = reader.take(COMPLEX, count, "output samples")
    taps = reader.take(COMPLEX, config.CHANNEL_TAPS, "channel taps")
    tail = reader.take_one(RECORD_TAIL, "nonlinearity")
    try:
        nl = NonlinearitySpec(
            NonlinearityKind(int(tail["nl_kind"])),
            float(tail["param"]),
            float(tail["achieved_si_sdr"]),
        )
        return FileRecord(
            int(head["file_id"]),
            ComplexSignal(samples_in),
            ComplexSignal(samples_out),
            SIChannel(taps),
            nl,
            int(tail["noise_seed"]),
        )
    except (ValueError, FdsicError) as err:
        raise DatasetFormatError(f"invalid record: {err}", start) from err


def read_dataset(path):
    """Read a dataset written by write_dataset.

    The whole file is parsed before anything is returned.

    Raises:
        DatasetFormatError: bad magic, version, count, truncation or
            trailing bytes, with the failing byte offset
    """
    reader = BinaryReader(pathlib.Path(path).read_bytes())
    header = _read_header(reader)
    records = [_read_record(reader)
               for _ in range(int(header["record_count"]))]
    reader.expect_end()
    system = SystemKind(int(header["system"]))
    try:
        dataset = Dataset(
            system,
            Taxonomy(int(header["taxonomy"])),
            records,
            float(header["si_sdr0"]),
            int(header["master_seed"]),
        )
    except (ValueError, FdsicError) as err:
        raise DatasetFormatError(f"invalid dataset: {err}", 0) from err
    LOGGER.debug("Read %s: %s %s", path, system.name, dataset.label)
    return dataset
